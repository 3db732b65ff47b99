#pragma once

// Dataset download from OpenML by id, a local checksummed cache, and corpus
// manifests mixing ids with local files.
//
// Cache layout: <cache>/<id>.arff and <cache>/<id>.json, the latter holding
// {dataset_id, fetched_at, path, checksum}. A cache hit performs no network
// I/O. Files are written to a temporary name and renamed into place.
//
// Manifest format: one entry per line, '#' starts a comment. An entry made
// of digits only is an OpenML dataset id, anything else a path to a local
// .arff or .csv file (relative paths resolve against the manifest's folder).
//
// Link against OpenSSL (target metaprep_openml): SHA-256 checksums and https.

// Eigen has to be parsed before httplib pulls in <resolv.h>, whose `_res`
// macro collides with Eigen parameter names.
#include <Eigen/Dense>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "metaprep/arff.hpp"
#include "metaprep/common.hpp"
#include "metaprep/csv.hpp"
#include "metaprep/dataset.hpp"

namespace metaprep {

class NetworkError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Throws NetworkError when no response could be obtained at all.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse get(const std::string& url) = 0;
};

class HttplibClient : public HttpClient {
 public:
  explicit HttplibClient(int timeout_seconds = 60) : timeout_(timeout_seconds) {}

  HttpResponse get(const std::string& url) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("not an absolute URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    auto res = client.Get(path);
    if (!res) throw NetworkError("request to " + url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  int timeout_;
};

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to a sibling temporary file, then renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline constexpr const char* kCacheEnvVar = "METAPREP_CACHE_DIR";
inline constexpr const char* kOpenMlApi = "https://www.openml.org/api/v1/json/data/";

// Explicit value, else $METAPREP_CACHE_DIR, else ./.metaprep-cache.
inline std::filesystem::path resolve_cache_dir(const std::optional<std::string>& explicit_dir = std::nullopt) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  return ".metaprep-cache";
}

struct CacheEntry {
  std::int64_t dataset_id = 0;
  std::string fetched_at;  // ISO 8601, UTC
  std::string path;
  std::string checksum;  // hex SHA-256 of the ARFF file
};

inline std::filesystem::path cache_arff_path(const std::filesystem::path& dir, std::int64_t id) {
  return dir / (std::to_string(id) + ".arff");
}

inline std::filesystem::path cache_entry_path(const std::filesystem::path& dir, std::int64_t id) {
  return dir / (std::to_string(id) + ".json");
}

inline std::optional<CacheEntry> read_cache_entry(const std::filesystem::path& dir, std::int64_t id) {
  const auto meta = cache_entry_path(dir, id);
  if (!std::filesystem::exists(meta) || !std::filesystem::exists(cache_arff_path(dir, id))) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(read_file(meta));
    return CacheEntry{j.at("dataset_id").get<std::int64_t>(), j.at("fetched_at").get<std::string>(),
                      j.at("path").get<std::string>(), j.at("checksum").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw ChecksumError("corrupt cache entry for dataset " + std::to_string(id) + ": " + e.what());
  }
}

namespace openml_detail {

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

inline std::string fetch_or_throw(HttpClient& http, const std::string& url, std::int64_t id) {
  HttpResponse res;
  try {
    res = http.get(url);
  } catch (const NetworkError& e) {
    throw NetworkError("dataset " + std::to_string(id) + ": " + e.what());
  }
  if (res.status != 200) {
    throw NetworkError("dataset " + std::to_string(id) + ": HTTP status " + std::to_string(res.status) + " from " + url);
  }
  return res.body;
}

}  // namespace openml_detail

// Downloads (or reads from cache) the ARFF text of an OpenML dataset.
inline std::string fetch_arff_text(std::int64_t id, const std::filesystem::path& cache_dir, HttpClient& http) {
  if (auto entry = read_cache_entry(cache_dir, id)) {
    const std::string text = read_file(cache_arff_path(cache_dir, id));
    if (sha256_hex(text) != entry->checksum) {
      throw ChecksumError("cached file for dataset " + std::to_string(id) + " does not match its checksum");
    }
    return text;
  }
  const std::string description = openml_detail::fetch_or_throw(http, kOpenMlApi + std::to_string(id), id);
  std::string file_url;
  try {
    file_url = nlohmann::json::parse(description).at("data_set_description").at("url").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError("dataset " + std::to_string(id) + ": unexpected description document: " + e.what());
  }
  const std::string text = openml_detail::fetch_or_throw(http, file_url, id);
  std::filesystem::create_directories(cache_dir);
  const auto arff_path = cache_arff_path(cache_dir, id);
  write_file_atomic(arff_path, text);
  nlohmann::json meta = {{"dataset_id", id},
                         {"fetched_at", openml_detail::utc_now()},
                         {"path", arff_path.string()},
                         {"checksum", sha256_hex(text)}};
  write_file_atomic(cache_entry_path(cache_dir, id), meta.dump(1) + "\n");
  return text;
}

inline Dataset fetch_dataset(std::int64_t id, const std::filesystem::path& cache_dir, HttpClient& http) {
  return parse_arff(fetch_arff_text(id, cache_dir, http));
}

// ---------------------------------------------------------------------------
// Manifests and corpora.

struct ManifestEntry {
  std::variant<std::int64_t, std::string> source;  // OpenML id or local path
  std::size_t line = 0;

  std::string describe() const {
    if (std::holds_alternative<std::int64_t>(source)) return "openml:" + std::to_string(std::get<std::int64_t>(source));
    return std::get<std::string>(source);
  }
};

inline std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::vector<ManifestEntry> out;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const bool digits = std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (digits) {
      out.push_back({static_cast<std::int64_t>(*parse_int(line)), line_no});
    } else {
      std::filesystem::path p{std::string(line)};
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      out.push_back({p.lexically_normal().string(), line_no});
    }
  }
  return out;
}

inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

// Local .arff (class detected as usual) or .csv (last column is the class;
// dataset named after the file stem).
inline Dataset load_local_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string ext = to_lower(path.extension().string());
  if (ext == ".csv") {
    CsvOptions opt;
    opt.name = path.stem().string();
    const auto header_end = text.find('\n');
    const auto header = csv_detail::split_record(std::string_view(text).substr(0, header_end), ',');
    if (!header || header->empty()) throw ParseError(ParseErrorKind::EmptyInput, 1, path.string());
    opt.class_column = header->size() - 1;
    return parse_csv(text, opt);
  }
  return parse_arff(text);
}

struct CorpusFailure {
  std::string entry;
  std::string reason;
};

struct Corpus {
  std::vector<Dataset> datasets;  // manifest order, failures skipped
  std::vector<CorpusFailure> failures;
};

// Datasets whose names repeat an earlier one get a "#2", "#3", ... suffix so
// that every dataset keeps its own identity downstream.
inline Corpus load_corpus(const std::vector<ManifestEntry>& manifest, const std::filesystem::path& cache_dir,
                          HttpClient& http, std::size_t jobs = 1) {
  if (manifest.empty()) throw CorpusError("empty manifest");
  std::vector<std::optional<Dataset>> loaded(manifest.size());
  std::vector<std::string> errors(manifest.size());
  parallel_for(manifest.size(), jobs, [&](std::size_t i) {
    try {
      const auto& src = manifest[i].source;
      if (std::holds_alternative<std::int64_t>(src)) {
        loaded[i] = fetch_dataset(std::get<std::int64_t>(src), cache_dir, http);
      } else {
        loaded[i] = load_local_dataset(std::get<std::string>(src));
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  Corpus corpus;
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (!loaded[i]) {
      corpus.failures.push_back({manifest[i].describe(), errors[i]});
      continue;
    }
    const std::size_t n = ++seen[loaded[i]->name()];
    if (n > 1) loaded[i] = loaded[i]->renamed(loaded[i]->name() + "#" + std::to_string(n));
    corpus.datasets.push_back(std::move(*loaded[i]));
  }
  if (corpus.datasets.empty()) {
    throw CorpusError("every manifest entry failed (first: " + corpus.failures.front().entry + ": " +
                      corpus.failures.front().reason + ")");
  }
  return corpus;
}

}  // namespace metaprep

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaprep/openml.hpp"

namespace metaprep::testing {

inline std::filesystem::path data_dir() { return METAPREP_DATA_DIR; }

// In-memory stand-in for the OpenML API: serves a description document and
// an ARFF body per registered id, counts requests and can be told to fail.
class FakeHttpClient : public HttpClient {
 public:
  void add(std::int64_t id, std::string arff) {
    const std::string file_url = "https://files.example/" + std::to_string(id) + ".arff";
    nlohmann::json desc = {{"data_set_description", {{"id", std::to_string(id)}, {"url", file_url}}}};
    bodies_[kOpenMlApi + std::to_string(id)] = desc.dump();
    bodies_[file_url] = std::move(arff);
  }

  void fail_with_status(std::int64_t id, int status) { status_[kOpenMlApi + std::to_string(id)] = status; }
  void fail_with_exception(std::int64_t id) { throws_[kOpenMlApi + std::to_string(id)] = true; }

  HttpResponse get(const std::string& url) override {
    std::lock_guard lock(mutex_);
    ++requests_;
    if (throws_.count(url)) throw NetworkError("connection refused");
    if (auto it = status_.find(url); it != status_.end()) return {it->second, ""};
    auto it = bodies_.find(url);
    if (it == bodies_.end()) return {404, ""};
    return {200, it->second};
  }

  std::size_t requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }

 private:
  std::map<std::string, std::string> bodies_;
  std::map<std::string, int> status_;
  std::map<std::string, bool> throws_;
  mutable std::mutex mutex_;
  std::size_t requests_ = 0;
};

// Ids 1..20 serve the first 20 bundled mini-corpus files in name order.
inline std::vector<std::filesystem::path> mini_corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(data_dir() / "mini_corpus")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline void register_mini_corpus(FakeHttpClient& http, std::size_t count = 20) {
  const auto files = mini_corpus_files();
  for (std::size_t i = 0; i < count && i < files.size(); ++i) http.add(static_cast<std::int64_t>(i + 1), read_file(files[i]));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("metaprep_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace metaprep::testing

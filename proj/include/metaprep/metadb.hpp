#pragma once

// Meta-database: one row per (dataset, transformation) holding the dataset's
// modifiable meta-features, their deltas under the transformation, the base
// performance and the labelled change in performance.
//
// File format (tab separated, UTF-8):
//
//   # metaprep-metadb
//   # schema_version=1
//   # algorithm=<tree|nb|knn:k|logistic>
//   # measure=<acc|prec|rec|auc>
//   # config: <free text, optional>
//   mf_<name>... dmf_<name>... base_perf response_value response_class dataset transformation
//   <one line per row; not-applicable values are empty fields>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "metaprep/classifier.hpp"
#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/metafeatures.hpp"
#include "metaprep/transforms.hpp"

namespace metaprep {

enum class ResponseClass { Positive, Negative, Zero };

inline constexpr std::string_view to_string(ResponseClass c) {
  switch (c) {
    case ResponseClass::Positive: return "positive";
    case ResponseClass::Negative: return "negative";
    case ResponseClass::Zero: return "zero";
  }
  return "?";
}

inline std::optional<ResponseClass> response_class_from_string(std::string_view s) {
  if (s == "positive") return ResponseClass::Positive;
  if (s == "negative") return ResponseClass::Negative;
  if (s == "zero") return ResponseClass::Zero;
  return std::nullopt;
}

struct Response {
  double value = 0.0;
  ResponseClass cls = ResponseClass::Zero;
};

inline constexpr double kDefaultZeroBand = 1e-9;

// Signed relative change (after - base) / base; absolute change when base is 0.
inline Response label_response(double base, double after, double epsilon = kDefaultZeroBand) {
  Response r;
  r.value = base > 0.0 ? (after - base) / base : after - base;
  if (std::abs(r.value) <= epsilon) r.cls = ResponseClass::Zero;
  else r.cls = r.value > 0.0 ? ResponseClass::Positive : ResponseClass::Negative;
  return r;
}

using ModifiableFeatures = std::array<MetaValue, kNumModifiable>;

inline ModifiableFeatures modifiable_part(const MetaFeatureVector& v) {
  ModifiableFeatures out;
  for (std::size_t i = 0; i < kNumModifiable; ++i) out[i] = v.at(i);
  return out;
}

inline ModifiableFeatures modifiable_part(const DeltaVector& v) {
  ModifiableFeatures out;
  for (std::size_t i = 0; i < kNumModifiable; ++i) out[i] = v.at(i);
  return out;
}

struct MetaInstance {
  std::string dataset;
  std::string transformation;  // canonical text
  ModifiableFeatures base_features{};
  ModifiableFeatures delta_features{};
  double base_performance = 0.0;
  double response_value = 0.0;
  ResponseClass response_class = ResponseClass::Zero;

  friend bool operator==(const MetaInstance&, const MetaInstance&) = default;
};

// Learner input columns: base features, deltas, base performance.
inline constexpr std::size_t kNumLearnerFeatures = 2 * kNumModifiable + 1;

inline std::vector<std::string> learner_feature_ids() {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < kNumModifiable; ++i) ids.push_back("mf_" + std::string(kMetaFeatureNames[i]));
  for (std::size_t i = 0; i < kNumModifiable; ++i) ids.push_back("dmf_" + std::string(kMetaFeatureNames[i]));
  ids.emplace_back("base_perf");
  return ids;
}

inline std::vector<MetaValue> learner_features(const ModifiableFeatures& base, const ModifiableFeatures& deltas,
                                               double base_performance) {
  std::vector<MetaValue> row;
  row.reserve(kNumLearnerFeatures);
  row.insert(row.end(), base.begin(), base.end());
  row.insert(row.end(), deltas.begin(), deltas.end());
  row.emplace_back(base_performance);
  return row;
}

inline std::vector<MetaValue> learner_features(const MetaInstance& m) {
  return learner_features(m.base_features, m.delta_features, m.base_performance);
}

inline constexpr int kMetaDbSchemaVersion = 1;

struct MetaDatabase {
  std::string algorithm;
  Measure measure = Measure::Accuracy;
  int schema_version = kMetaDbSchemaVersion;
  std::string config;  // provenance text, may be empty
  std::vector<MetaInstance> rows;

  // Source datasets in order of first appearance.
  std::vector<std::string> datasets() const {
    std::vector<std::string> out;
    std::map<std::string, bool> seen;
    for (const auto& r : rows) {
      if (!seen[r.dataset]) {
        seen[r.dataset] = true;
        out.push_back(r.dataset);
      }
    }
    return out;
  }

  // w = 1 / |T_d| for each row, |T_d| being its dataset's row count.
  std::vector<double> weights() const {
    std::map<std::string, std::size_t> count;
    for (const auto& r : rows) ++count[r.dataset];
    std::vector<double> w;
    w.reserve(rows.size());
    for (const auto& r : rows) w.push_back(1.0 / static_cast<double>(count[r.dataset]));
    return w;
  }

  friend bool operator==(const MetaDatabase&, const MetaDatabase&) = default;
};

// ---------------------------------------------------------------------------
// Building.

struct BuildOptions {
  Measure measure = Measure::Accuracy;
  std::uint64_t seed = 42;
  std::size_t folds = kDefaultFolds;  // capped at the dataset's row count
  double epsilon = kDefaultZeroBand;
  std::size_t jobs = 1;
};

struct DatasetFailure {
  std::string dataset;
  std::string reason;
};

struct BuildResult {
  MetaDatabase db;
  std::vector<DatasetFailure> failures;
};

// Rows come out in (dataset, enumeration) order whatever `jobs` is. A dataset
// for which any step fails contributes no rows and one failure entry.
inline BuildResult build_metadb(const std::vector<Dataset>& corpus, const Classifier& clf, const BuildOptions& options) {
  if (corpus.empty()) throw ArgumentError("empty corpus");
  struct Base {
    MetaFeatureVector features;
    double performance = 0.0;
    std::vector<TransformationSpec> specs;
    std::string error;
  };
  std::vector<Base> base(corpus.size());
  parallel_for(corpus.size(), options.jobs, [&](std::size_t d) {
    try {
      const Dataset& ds = corpus[d];
      base[d].features = compute_meta_features(ds);
      const std::size_t k = std::min(options.folds, ds.num_rows());
      base[d].performance = cross_validate(clf, ds, k, options.seed).measures.get(options.measure);
      base[d].specs = enumerate_applicable(ds);
      if (base[d].specs.empty()) base[d].error = "no applicable transformation";
    } catch (const std::exception& e) {
      base[d].error = e.what();
    }
  });

  struct Task {
    std::size_t dataset;
    std::size_t spec;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> first_task(corpus.size(), 0);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    first_task[d] = tasks.size();
    if (!base[d].error.empty()) continue;
    for (std::size_t s = 0; s < base[d].specs.size(); ++s) tasks.push_back({d, s});
  }
  std::vector<MetaInstance> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
    const auto [d, s] = tasks[t];
    const Dataset& ds = corpus[d];
    const auto& spec = base[d].specs[s];
    try {
      const auto transformed = apply(spec, ds);
      const auto after_features = compute_meta_features(transformed.dataset);
      const std::size_t k = std::min(options.folds, ds.num_rows());
      const double after = cross_validate(clf, transformed.dataset, k, options.seed).measures.get(options.measure);
      const auto response = label_response(base[d].performance, after, options.epsilon);
      MetaInstance& row = rows[t];
      row.dataset = ds.name();
      row.transformation = spec.to_string();
      row.base_features = modifiable_part(base[d].features);
      row.delta_features = modifiable_part(delta(base[d].features, after_features));
      row.base_performance = base[d].performance;
      row.response_value = response.value;
      row.response_class = response.cls;
    } catch (const std::exception& e) {
      errors[t] = spec.to_string() + ": " + e.what();
    }
  });

  BuildResult out;
  out.db.algorithm = clf.name();
  out.db.measure = options.measure;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (!base[d].error.empty()) {
      out.failures.push_back({corpus[d].name(), base[d].error});
      continue;
    }
    const std::size_t end = first_task[d] + base[d].specs.size();
    std::string error;
    for (std::size_t t = first_task[d]; t < end && error.empty(); ++t) error = errors[t];
    if (!error.empty()) {
      out.failures.push_back({corpus[d].name(), error});
      continue;
    }
    for (std::size_t t = first_task[d]; t < end; ++t) out.db.rows.push_back(std::move(rows[t]));
  }
  if (out.db.rows.empty()) {
    std::string msg = "every dataset failed";
    if (!out.failures.empty()) msg += " (first: " + out.failures.front().dataset + ": " + out.failures.front().reason + ")";
    throw Error(msg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence.

inline std::vector<std::string> metadb_header() {
  std::vector<std::string> cols = learner_feature_ids();
  cols.emplace_back("response_value");
  cols.emplace_back("response_class");
  cols.emplace_back("dataset");
  cols.emplace_back("transformation");
  return cols;
}

namespace metadb_detail {

inline void check_field(std::string_view s, const char* what) {
  for (char c : s) {
    if (c == '\t' || c == '\n' || c == '\r') throw FormatError(std::string(what) + " contains a tab or newline");
  }
}

}  // namespace metadb_detail

inline std::string serialize(const MetaDatabase& db) {
  std::ostringstream out;
  metadb_detail::check_field(db.config, "config");
  out << "# metaprep-metadb\n";
  out << "# schema_version=" << db.schema_version << '\n';
  out << "# algorithm=" << db.algorithm << '\n';
  out << "# measure=" << to_string(db.measure) << '\n';
  if (!db.config.empty()) out << "# config: " << db.config << '\n';
  const auto header = metadb_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "\t" : "") << header[i];
  out << '\n';
  auto put = [&](const MetaValue& v) {
    if (v) out << format_double(*v);
    out << '\t';
  };
  for (const auto& r : db.rows) {
    metadb_detail::check_field(r.dataset, "dataset name");
    for (const auto& v : r.base_features) put(v);
    for (const auto& v : r.delta_features) put(v);
    out << format_double(r.base_performance) << '\t' << format_double(r.response_value) << '\t'
        << to_string(r.response_class) << '\t' << r.dataset << '\t' << r.transformation << '\n';
  }
  return out.str();
}

inline MetaDatabase deserialize(std::string_view text) {
  MetaDatabase db;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool magic = false;
  std::optional<int> version;
  bool have_algorithm = false, have_measure = false, have_header = false;
  const auto header = metadb_header();
  auto fail = [&](const std::string& what) { throw FormatError("metadb line " + std::to_string(line_no) + ": " + what); };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(std::string_view(line).substr(1));
      if (body == "metaprep-metadb") {
        magic = true;
      } else if (body.substr(0, 15) == "schema_version=") {
        const auto v = parse_int(body.substr(15));
        if (!v) fail("bad schema_version");
        version = static_cast<int>(*v);
        if (*version != kMetaDbSchemaVersion) {
          throw VersionError("metadb schema_version " + std::to_string(*version) + " is not supported (expected " +
                             std::to_string(kMetaDbSchemaVersion) + ")");
        }
      } else if (body.substr(0, 10) == "algorithm=") {
        db.algorithm = std::string(body.substr(10));
        have_algorithm = true;
      } else if (body.substr(0, 8) == "measure=") {
        try {
          db.measure = measure_from_string(body.substr(8));
        } catch (const ArgumentError& e) {
          fail(e.what());
        }
        have_measure = true;
      } else if (body.substr(0, 7) == "config:") {
        db.config = std::string(trim(body.substr(7)));
      }
      continue;
    }
    if (!magic) fail("not a metadb file");
    if (!version) throw VersionError("metadb file has no schema_version");
    const auto fields = split(line, '\t');
    if (!have_header) {
      if (fields != header) fail("unexpected header");
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    MetaInstance r;
    auto number = [&](const std::string& s) -> double {
      const auto v = parse_double(s);
      if (!v || !std::isfinite(*v)) fail("bad number '" + s + "'");
      return *v;
    };
    auto optional_number = [&](const std::string& s) -> MetaValue {
      if (s.empty()) return std::nullopt;
      return number(s);
    };
    std::size_t f = 0;
    for (auto& v : r.base_features) v = optional_number(fields[f++]);
    for (auto& v : r.delta_features) v = optional_number(fields[f++]);
    r.base_performance = number(fields[f++]);
    r.response_value = number(fields[f++]);
    const auto cls = response_class_from_string(fields[f++]);
    if (!cls) fail("bad response_class '" + fields[f - 1] + "'");
    r.response_class = *cls;
    r.dataset = fields[f++];
    r.transformation = fields[f++];
    try {
      (void)TransformationSpec::parse(r.transformation);
    } catch (const SpecError& e) {
      fail(e.what());
    }
    db.rows.push_back(std::move(r));
  }
  if (!magic) throw FormatError("not a metadb file");
  if (!version) throw VersionError("metadb file has no schema_version");
  if (!have_algorithm || !have_measure) throw FormatError("metadb file lacks algorithm or measure");
  if (!have_header) throw FormatError("metadb file has no header row");
  return db;
}

inline void save(const MetaDatabase& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize(db);
  if (!out) throw Error("write failed for '" + path + "'");
}

inline MetaDatabase load_metadb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace metaprep

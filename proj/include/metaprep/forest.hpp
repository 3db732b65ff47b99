#pragma once

// Tri-class random forest over meta-database rows, with leave-one-dataset-out
// validation.
//
// Training columns are put in ascending feature-id order first, so a model
// does not depend on the column order it was handed. Rows carry weights
// w = 1/|T_d|; they set the bootstrap sampling probabilities and weight the
// Gini impurity. Missing values at a split follow the side that held more
// training weight.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/metadb.hpp"

namespace metaprep {

inline constexpr std::array<ResponseClass, 3> kClassOrder = {ResponseClass::Positive, ResponseClass::Negative,
                                                             ResponseClass::Zero};

inline std::size_t class_slot(ResponseClass c) {
  switch (c) {
    case ResponseClass::Positive: return 0;
    case ResponseClass::Negative: return 1;
    case ResponseClass::Zero: return 2;
  }
  return 2;
}

struct ClassProbabilities {
  double positive = 0.0;
  double negative = 0.0;
  double zero = 0.0;

  double operator[](std::size_t slot) const { return slot == 0 ? positive : slot == 1 ? negative : zero; }

  // Largest probability; ties resolved in the order positive, negative, zero.
  ResponseClass predicted() const {
    if (positive >= negative && positive >= zero) return ResponseClass::Positive;
    if (negative >= zero) return ResponseClass::Negative;
    return ResponseClass::Zero;
  }
};

// Learner input: one row per meta-instance.
struct TrainingTable {
  std::vector<std::string> feature_ids;
  std::vector<std::vector<MetaValue>> rows;
  std::vector<ResponseClass> labels;
  std::vector<double> weights;
};

inline TrainingTable training_table(const MetaDatabase& db) {
  TrainingTable t;
  t.feature_ids = learner_feature_ids();
  t.weights = db.weights();
  for (const auto& r : db.rows) {
    t.rows.push_back(learner_features(r));
    t.labels.push_back(r.response_class);
  }
  return t;
}

struct ForestOptions {
  std::size_t n_trees = 100;
  std::size_t min_node_size = 5;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
};

struct ForestNode {
  // Split nodes: feature >= 0. Leaves: feature == -1 and `leaf` holds the
  // weighted class fractions in class order.
  int feature = -1;
  double threshold = 0.0;
  bool missing_left = true;
  std::size_t left = 0;
  std::size_t right = 0;
  std::array<double, 3> leaf{};

  friend bool operator==(const ForestNode&, const ForestNode&) = default;
};

struct ForestTree {
  std::vector<ForestNode> nodes;  // nodes[0] is the root

  ResponseClass vote(const std::vector<MetaValue>& row) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
      const auto& n = nodes[i];
      const auto& v = row[static_cast<std::size_t>(n.feature)];
      const bool left = v ? *v <= n.threshold : n.missing_left;
      i = left ? n.left : n.right;
    }
    const auto& p = nodes[i].leaf;
    return ClassProbabilities{p[0], p[1], p[2]}.predicted();
  }

  friend bool operator==(const ForestTree&, const ForestTree&) = default;
};

inline constexpr int kForestFormatVersion = 1;

class ForestModel {
 public:
  std::vector<std::string> feature_ids;  // ascending
  std::vector<ForestTree> trees;
  std::size_t n_trees = 0;
  std::size_t min_node_size = 5;
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string measure;
  std::string config;

  // Fraction of trees voting for each class.
  ClassProbabilities predict_proba(const std::vector<MetaValue>& row) const {
    if (row.size() != feature_ids.size()) {
      throw SchemaError("expected " + std::to_string(feature_ids.size()) + " features, got " + std::to_string(row.size()));
    }
    std::array<double, 3> votes{};
    for (const auto& t : trees) votes[class_slot(t.vote(row))] += 1.0;
    const double n = static_cast<double>(trees.size());
    return {votes[0] / n, votes[1] / n, votes[2] / n};
  }

  // Row given in an arbitrary column order named by `ids`.
  ClassProbabilities predict_proba(const std::vector<std::string>& ids, const std::vector<MetaValue>& row) const {
    return predict_proba(reorder(ids, row));
  }

  std::vector<MetaValue> reorder(const std::vector<std::string>& ids, const std::vector<MetaValue>& row) const {
    if (ids.size() != row.size()) throw SchemaError("feature id/value count mismatch");
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;
    if (pos.size() != feature_ids.size()) throw SchemaError("feature set does not match the model");
    std::vector<MetaValue> out;
    out.reserve(feature_ids.size());
    for (const auto& id : feature_ids) {
      auto it = pos.find(id);
      if (it == pos.end()) throw SchemaError("model feature '" + id + "' missing from input");
      out.push_back(row[it->second]);
    }
    return out;
  }

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

namespace forest_detail {

struct Builder {
  const std::vector<std::vector<MetaValue>>& x;  // columns in model order
  const std::vector<std::size_t>& y;             // class slots
  const std::vector<double>& w;
  std::size_t min_node_size;
  std::size_t mtry;
  Rng& rng;
  ForestTree tree;

  std::array<double, 3> totals(const std::vector<std::size_t>& rows) const {
    std::array<double, 3> t{};
    for (std::size_t r : rows) t[y[r]] += w[r];
    return t;
  }

  static double gini(const std::array<double, 3>& t) {
    const double s = t[0] + t[1] + t[2];
    if (s <= 0.0) return 0.0;
    double g = 1.0;
    for (double c : t) g -= (c / s) * (c / s);
    return g;
  }

  std::size_t grow(const std::vector<std::size_t>& rows) {
    const std::size_t id = tree.nodes.size();
    tree.nodes.emplace_back();
    const auto t = totals(rows);
    const double total = t[0] + t[1] + t[2];
    const std::size_t present = static_cast<std::size_t>((t[0] > 0) + (t[1] > 0) + (t[2] > 0));
    auto make_leaf = [&] {
      for (std::size_t c = 0; c < 3; ++c) tree.nodes[id].leaf[c] = total > 0.0 ? t[c] / total : 0.0;
      return id;
    };
    if (present <= 1 || rows.size() < min_node_size) return make_leaf();

    const std::size_t num_features = x.size();
    std::vector<std::size_t> features(num_features);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = 0; i < mtry; ++i) std::swap(features[i], features[i + rng.index(num_features - i)]);
    features.resize(mtry);
    std::sort(features.begin(), features.end());

    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    bool best_missing_left = true;
    std::vector<std::pair<double, std::size_t>> known;
    for (std::size_t f : features) {
      known.clear();
      for (std::size_t r : rows) {
        if (x[f][r]) known.emplace_back(*x[f][r], r);
      }
      if (known.size() < 2) continue;
      std::sort(known.begin(), known.end());
      std::array<double, 3> kt{};
      for (const auto& kv : known) kt[y[kv.second]] += w[kv.second];
      const double known_total = kt[0] + kt[1] + kt[2];
      if (known_total <= 0.0) continue;
      const double known_fraction = known_total / total;
      const double known_gini = gini(kt);
      std::array<double, 3> left{};
      for (std::size_t i = 0; i + 1 < known.size(); ++i) {
        left[y[known[i].second]] += w[known[i].second];
        if (known[i].first == known[i + 1].first) continue;
        std::array<double, 3> right{};
        for (std::size_t c = 0; c < 3; ++c) right[c] = kt[c] - left[c];
        const double wl = left[0] + left[1] + left[2];
        const double wr = known_total - wl;
        const double gain = known_fraction * (known_gini - (wl / known_total) * gini(left) - (wr / known_total) * gini(right));
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = known[i].first + (known[i + 1].first - known[i].first) / 2.0;
          best_missing_left = wl >= wr;
        }
      }
    }
    if (best_feature < 0) return make_leaf();

    std::vector<std::size_t> left_rows, right_rows;
    const auto& col = x[static_cast<std::size_t>(best_feature)];
    for (std::size_t r : rows) {
      const bool go_left = col[r] ? *col[r] <= best_threshold : best_missing_left;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    if (left_rows.empty() || right_rows.empty()) return make_leaf();
    tree.nodes[id].feature = best_feature;
    tree.nodes[id].threshold = best_threshold;
    tree.nodes[id].missing_left = best_missing_left;
    const std::size_t l = grow(left_rows);
    const std::size_t rr = grow(right_rows);
    tree.nodes[id].left = l;
    tree.nodes[id].right = rr;
    return id;
  }
};

}  // namespace forest_detail

inline ForestModel train_forest(const TrainingTable& table, const ForestOptions& options) {
  const std::size_t n = table.rows.size();
  if (n == 0) throw ArgumentError("cannot train on an empty meta-database");
  if (table.labels.size() != n || table.weights.size() != n) throw ArgumentError("training table is ragged");
  if (options.n_trees == 0) throw ArgumentError("n_trees must be positive");
  std::array<bool, 3> seen{};
  for (auto c : table.labels) seen[class_slot(c)] = true;
  if (seen[0] + seen[1] + seen[2] < 2) throw ArgumentError("training data holds a single response class");

  ForestModel model;
  model.feature_ids = table.feature_ids;
  std::sort(model.feature_ids.begin(), model.feature_ids.end());
  if (std::adjacent_find(model.feature_ids.begin(), model.feature_ids.end()) != model.feature_ids.end()) {
    throw ArgumentError("duplicate feature id");
  }
  std::map<std::string, std::size_t> source_col;
  for (std::size_t i = 0; i < table.feature_ids.size(); ++i) source_col[table.feature_ids[i]] = i;
  const std::size_t num_features = model.feature_ids.size();
  std::vector<std::vector<MetaValue>> columns(num_features, std::vector<MetaValue>(n));
  for (std::size_t f = 0; f < num_features; ++f) {
    const std::size_t src = source_col[model.feature_ids[f]];
    for (std::size_t r = 0; r < n; ++r) {
      if (table.rows[r].size() != table.feature_ids.size()) throw ArgumentError("training row has the wrong width");
      columns[f][r] = table.rows[r][src];
    }
  }
  std::vector<std::size_t> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = class_slot(table.labels[r]);

  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (!(table.weights[r] > 0.0)) throw ArgumentError("row weights must be positive");
    acc += table.weights[r];
    cumulative[r] = acc;
  }
  const auto mtry = std::max<std::size_t>(
      1, std::min(num_features, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_features))))));

  model.n_trees = options.n_trees;
  model.min_node_size = options.min_node_size;
  model.seed = options.seed;
  model.trees.resize(options.n_trees);
  parallel_for(options.n_trees, options.jobs, [&](std::size_t t) {
    Rng rng(mix_seed(options.seed, 0x7ee5 + t));
    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform() * acc;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      sample[i] = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), n - 1);
    }
    std::sort(sample.begin(), sample.end());
    forest_detail::Builder b{columns, y, table.weights, options.min_node_size, mtry, rng, {}};
    b.grow(sample);
    model.trees[t] = std::move(b.tree);
  });
  return model;
}

inline ForestModel train_forest(const MetaDatabase& db, const ForestOptions& options) {
  auto model = train_forest(training_table(db), options);
  model.algorithm = db.algorithm;
  model.measure = std::string(to_string(db.measure));
  return model;
}

// ---------------------------------------------------------------------------
// Persistence (JSON document).

inline nlohmann::json to_json(const ForestModel& m) {
  nlohmann::json j;
  j["format"] = "metaprep-forest";
  j["version"] = kForestFormatVersion;
  j["algorithm"] = m.algorithm;
  j["measure"] = m.measure;
  if (!m.config.empty()) j["config"] = m.config;
  j["n_trees"] = m.n_trees;
  j["min_node_size"] = m.min_node_size;
  j["seed"] = m.seed;
  j["class_order"] = {"positive", "negative", "zero"};
  j["feature_ids"] = m.feature_ids;
  auto trees = nlohmann::json::array();
  for (const auto& t : m.trees) {
    auto nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.feature < 0) {
        nodes.push_back({{"leaf", n.leaf}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"missing_left", n.missing_left},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

inline ForestModel forest_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "metaprep-forest") throw FormatError("not a forest model document");
    const int version = j.at("version").get<int>();
    if (version != kForestFormatVersion) {
      throw VersionError("forest model version " + std::to_string(version) + " is not supported (expected " +
                         std::to_string(kForestFormatVersion) + ")");
    }
    ForestModel m;
    m.algorithm = j.at("algorithm").get<std::string>();
    m.measure = j.at("measure").get<std::string>();
    m.config = j.value("config", "");
    m.n_trees = j.at("n_trees").get<std::size_t>();
    m.min_node_size = j.at("min_node_size").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.feature_ids = j.at("feature_ids").get<std::vector<std::string>>();
    for (const auto& jt : j.at("trees")) {
      ForestTree t;
      for (const auto& jn : jt) {
        ForestNode n;
        if (jn.contains("leaf")) {
          n.leaf = jn.at("leaf").get<std::array<double, 3>>();
        } else {
          n.feature = jn.at("feature").get<int>();
          n.threshold = jn.at("threshold").get<double>();
          n.missing_left = jn.at("missing_left").get<bool>();
          n.left = jn.at("left").get<std::size_t>();
          n.right = jn.at("right").get<std::size_t>();
        }
        t.nodes.push_back(n);
      }
      for (const auto& n : t.nodes) {
        if (n.feature >= 0 && (static_cast<std::size_t>(n.feature) >= m.feature_ids.size() || n.left >= t.nodes.size() ||
                               n.right >= t.nodes.size())) {
          throw FormatError("forest model node refers outside its tree");
        }
      }
      if (t.nodes.empty()) throw FormatError("forest model has an empty tree");
      m.trees.push_back(std::move(t));
    }
    if (m.trees.size() != m.n_trees) throw FormatError("forest model tree count mismatch");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed forest model: ") + e.what());
  }
}

inline void save(const ForestModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_json(m).dump(1) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline ForestModel load_forest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed forest model '" + path + "': " + e.what());
  }
  return forest_from_json(j);
}

// ---------------------------------------------------------------------------
// Leave-one-dataset-out validation.

struct LoovPrediction {
  std::string transformation;
  ClassProbabilities probabilities;
  ResponseClass predicted = ResponseClass::Zero;
  ResponseClass actual = ResponseClass::Zero;
  double response_value = 0.0;
};

struct LoovFold {
  std::string dataset;
  std::vector<std::string> training_datasets;  // provenance of the rows used for training
  std::size_t training_rows = 0;
  std::vector<LoovPrediction> predictions;
};

struct LoovReport {
  std::vector<LoovFold> folds;  // datasets in meta-database order
};

// When the training rows hold a single class the fold predicts that class
// with probability 1.
inline LoovReport loov_evaluate(const MetaDatabase& db, const ForestOptions& options) {
  const auto datasets = db.datasets();
  if (datasets.size() < 2) throw ArgumentError("leave-one-dataset-out needs at least 2 datasets");
  const auto weights = db.weights();
  const auto ids = learner_feature_ids();
  LoovReport report;
  report.folds.resize(datasets.size());
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    LoovFold& fold = report.folds[d];
    fold.dataset = datasets[d];
    TrainingTable table;
    table.feature_ids = ids;
    std::vector<std::size_t> test_rows;
    for (std::size_t r = 0; r < db.rows.size(); ++r) {
      const auto& row = db.rows[r];
      if (row.dataset == datasets[d]) {
        test_rows.push_back(r);
        continue;
      }
      table.rows.push_back(learner_features(row));
      table.labels.push_back(row.response_class);
      table.weights.push_back(weights[r]);
      if (std::find(fold.training_datasets.begin(), fold.training_datasets.end(), row.dataset) ==
          fold.training_datasets.end()) {
        fold.training_datasets.push_back(row.dataset);
      }
    }
    fold.training_rows = table.rows.size();
    std::array<bool, 3> seen{};
    for (auto c : table.labels) seen[class_slot(c)] = true;
    std::optional<ForestModel> model;
    if (seen[0] + seen[1] + seen[2] >= 2) {
      ForestOptions fo = options;
      fo.seed = mix_seed(options.seed, d);
      model = train_forest(table, fo);
    }
    for (std::size_t r : test_rows) {
      const auto& row = db.rows[r];
      LoovPrediction p;
      p.transformation = row.transformation;
      if (model) {
        p.probabilities = model->predict_proba(ids, learner_features(row));
      } else {
        const std::size_t only = seen[0] ? 0 : seen[1] ? 1 : 2;
        p.probabilities = {only == 0 ? 1.0 : 0.0, only == 1 ? 1.0 : 0.0, only == 2 ? 1.0 : 0.0};
      }
      p.predicted = p.probabilities.predicted();
      p.actual = row.response_class;
      p.response_value = row.response_value;
      fold.predictions.push_back(std::move(p));
    }
  }
  return report;
}

}  // namespace metaprep

#pragma once

// Classifier interface, cross-validation and the four performance measures.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/folds.hpp"

namespace metaprep {

struct Prediction {
  std::size_t label = 0;
  std::vector<double> scores;  // one per class, sums to 1
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  // Trains on `train` and predicts every row of `test`. Must be a
  // deterministic function of its arguments.
  virtual std::vector<Prediction> fit_predict(const Dataset& train, const Dataset& test, std::uint64_t seed) const = 0;
};

inline void check_schema(const Dataset& train, const Dataset& test) {
  if (train.num_rows() == 0) throw SchemaError("empty training set");
  if (train.attributes() != test.attributes() || train.class_index() != test.class_index()) {
    throw SchemaError("train/test schema mismatch for '" + train.name() + "'");
  }
}

// Index of the largest score; ties go to the lowest class index.
inline std::size_t argmax(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Measures.

enum class Measure { Accuracy, Precision, Recall, Auc };

inline constexpr std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Accuracy: return "acc";
    case Measure::Precision: return "prec";
    case Measure::Recall: return "rec";
    case Measure::Auc: return "auc";
  }
  return "?";
}

inline Measure measure_from_string(std::string_view s) {
  for (auto m : {Measure::Accuracy, Measure::Precision, Measure::Recall, Measure::Auc}) {
    if (to_string(m) == s) return m;
  }
  if (s == "accuracy") return Measure::Accuracy;
  if (s == "precision") return Measure::Precision;
  if (s == "recall") return Measure::Recall;
  throw ArgumentError("unknown measure '" + std::string(s) + "' (expected acc, prec, rec or auc)");
}

struct PerformanceMeasures {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double auc = 0.0;

  double get(Measure m) const {
    switch (m) {
      case Measure::Accuracy: return accuracy;
      case Measure::Precision: return precision;
      case Measure::Recall: return recall;
      case Measure::Auc: return auc;
    }
    return 0.0;
  }

  friend bool operator==(const PerformanceMeasures&, const PerformanceMeasures&) = default;
};

// One-vs-rest area under the ROC curve for class `c` by the rank statistic
// P(score_pos > score_neg) + 0.5 P(tie). nullopt when either side is empty.
inline std::optional<double> one_vs_rest_auc(const std::vector<std::size_t>& actual,
                                             const std::vector<std::vector<double>>& scores, std::size_t c) {
  std::vector<std::pair<double, bool>> items;
  items.reserve(actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i) items.emplace_back(scores[i][c], actual[i] == c);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double pos = 0.0, neg = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i;
    while (j < items.size() && items[j].first == items[i].first) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (items[t].second) {
        rank_sum += mid_rank;
        pos += 1.0;
      } else {
        neg += 1.0;
      }
    }
    i = j;
  }
  if (pos == 0.0 || neg == 0.0) return std::nullopt;
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

// Accuracy; macro precision/recall over classes that occur in `actual`
// (a class never predicted has precision 0); class-frequency weighted
// one-vs-rest AUC.
inline PerformanceMeasures compute_measures(const std::vector<std::size_t>& actual, const std::vector<std::size_t>& predicted,
                                            const std::vector<std::vector<double>>& scores, std::size_t num_classes) {
  const std::size_t n = actual.size();
  PerformanceMeasures m;
  if (n == 0) return m;
  std::vector<double> tp(num_classes, 0.0), predicted_count(num_classes, 0.0), actual_count(num_classes, 0.0);
  double correct = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    actual_count[actual[i]] += 1.0;
    predicted_count[predicted[i]] += 1.0;
    if (actual[i] == predicted[i]) {
      tp[actual[i]] += 1.0;
      correct += 1.0;
    }
  }
  m.accuracy = correct / static_cast<double>(n);
  double present = 0.0, prec_sum = 0.0, rec_sum = 0.0;
  double auc_sum = 0.0, auc_weight = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (actual_count[c] == 0.0) continue;
    present += 1.0;
    prec_sum += predicted_count[c] > 0.0 ? tp[c] / predicted_count[c] : 0.0;
    rec_sum += tp[c] / actual_count[c];
    if (auto a = one_vs_rest_auc(actual, scores, c)) {
      auc_sum += actual_count[c] * *a;
      auc_weight += actual_count[c];
    }
  }
  m.precision = prec_sum / present;
  m.recall = rec_sum / present;
  m.auc = auc_weight > 0.0 ? auc_sum / auc_weight : 0.5;
  return m;
}

// ---------------------------------------------------------------------------
// Cross-validation.

inline constexpr std::size_t kDefaultFolds = 10;

struct CrossValidation {
  PerformanceMeasures measures;
  std::vector<Prediction> predictions;  // indexed by row of the input dataset
  FoldAssignment folds;
};

// Predictions from all folds are pooled before measuring.
inline CrossValidation cross_validate(const Classifier& clf, const Dataset& ds, std::size_t k, std::uint64_t seed) {
  CrossValidation out;
  out.folds = stratified_folds(ds, k, seed);
  out.predictions.resize(ds.num_rows());
  for (std::size_t f = 0; f < k; ++f) {
    const auto test_rows = out.folds.test_rows(f);
    if (test_rows.empty()) continue;
    const auto train_rows = out.folds.train_rows(f);
    const Dataset train = ds.subset(train_rows);
    const Dataset test = ds.subset(test_rows);
    auto preds = clf.fit_predict(train, test, mix_seed(seed, f));
    if (preds.size() != test_rows.size()) throw Error(clf.name() + " returned the wrong number of predictions");
    for (std::size_t i = 0; i < test_rows.size(); ++i) out.predictions[test_rows[i]] = std::move(preds[i]);
  }
  std::vector<std::size_t> actual(ds.num_rows()), predicted(ds.num_rows());
  std::vector<std::vector<double>> scores(ds.num_rows());
  for (std::size_t r = 0; r < ds.num_rows(); ++r) {
    actual[r] = ds.class_of(r);
    predicted[r] = out.predictions[r].label;
    scores[r] = out.predictions[r].scores;
  }
  out.measures = compute_measures(actual, predicted, scores, ds.num_classes());
  return out;
}

}  // namespace metaprep

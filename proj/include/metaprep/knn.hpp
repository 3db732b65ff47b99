#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "metaprep/classifier.hpp"

namespace metaprep {

// k nearest neighbours under Euclidean distance. Continuous attributes are
// min-max scaled with the training split's range (zero range contributes
// nothing); a categorical mismatch or any missing cell contributes 1.
// Distances equal up to a relative 1e-9 count as ties and go to the lowest
// training row, which keeps the neighbour set stable when the data were
// affinely rescaled beforehand.
class KNearest : public Classifier {
 public:
  explicit KNearest(std::size_t k = 1) : k_(k) {
    if (k_ < 1) throw ArgumentError("k must be at least 1");
  }

  std::string name() const override { return "knn:" + std::to_string(k_); }
  std::size_t k() const { return k_; }

  std::vector<Prediction> fit_predict(const Dataset& train, const Dataset& test, std::uint64_t /*seed*/) const override {
    check_schema(train, test);
    const auto preds = train.predictors();
    const std::size_t n = train.num_rows();
    std::vector<double> lo(preds.size(), 0.0), range(preds.size(), 0.0);
    for (std::size_t j = 0; j < preds.size(); ++j) {
      if (!train.attribute(preds[j]).is_continuous()) continue;
      bool seen = false;
      double mn = 0.0, mx = 0.0;
      for (double v : train.column(preds[j])) {
        if (is_missing(v)) continue;
        if (!seen) mn = mx = v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        seen = true;
      }
      lo[j] = mn;
      range[j] = mx - mn;
    }
    const std::size_t k = std::min(k_, n);
    std::vector<Prediction> out;
    out.reserve(test.num_rows());
    std::vector<double> dist(n);
    std::vector<std::size_t> order(n);
    for (std::size_t r = 0; r < test.num_rows(); ++r) {
      for (std::size_t t = 0; t < n; ++t) {
        double d = 0.0;
        for (std::size_t j = 0; j < preds.size(); ++j) {
          const double x = test.value(r, preds[j]);
          const double y = train.value(t, preds[j]);
          if (is_missing(x) || is_missing(y)) {
            d += 1.0;
          } else if (train.attribute(preds[j]).is_continuous()) {
            if (range[j] > 0.0) {
              const double diff = (x - lo[j]) / range[j] - (y - lo[j]) / range[j];
              d += diff * diff;
            }
          } else if (x != y) {
            d += 1.0;
          }
        }
        dist[t] = d;
        order[t] = t;
      }
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
      });
      const double kth = dist[order[k - 1]];
      const double tol = 1e-9 * kth + 1e-12;
      std::vector<std::size_t> chosen;
      std::vector<std::size_t> tied;
      for (std::size_t t : order) {
        if (dist[t] < kth - tol) chosen.push_back(t);
        else if (dist[t] <= kth + tol) tied.push_back(t);
        else break;
      }
      std::sort(tied.begin(), tied.end());
      for (std::size_t t : tied) {
        if (chosen.size() == k) break;
        chosen.push_back(t);
      }
      std::vector<double> votes(train.num_classes(), 0.0);
      for (std::size_t t : chosen) votes[train.class_of(t)] += 1.0;
      for (double& v : votes) v /= static_cast<double>(chosen.size());
      out.push_back({argmax(votes), votes});
    }
    return out;
  }

 private:
  std::size_t k_;
};

}  // namespace metaprep

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "metaprep/classifier.hpp"
#include "metaprep/metafeatures.hpp"

namespace metaprep {

// Gaussian likelihoods for continuous attributes, Laplace (+1) smoothed
// frequencies for categorical ones. Missing cells are skipped, both when
// estimating and when scoring.
class NaiveBayes : public Classifier {
 public:
  std::string name() const override { return "nb"; }

  struct Gaussian {
    double mean = 0.0;
    double sd = 1.0;
  };

  std::vector<Prediction> fit_predict(const Dataset& train, const Dataset& test, std::uint64_t /*seed*/) const override {
    check_schema(train, test);
    const std::size_t num_classes = train.num_classes();
    const std::size_t n = train.num_rows();
    const auto class_counts = train.class_counts();
    std::vector<double> log_prior(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      log_prior[c] = std::log((static_cast<double>(class_counts[c]) + 1.0) / (static_cast<double>(n) + static_cast<double>(num_classes)));
    }

    const auto preds = train.predictors();
    std::vector<std::vector<Gaussian>> gauss(preds.size());
    std::vector<std::vector<std::vector<double>>> log_freq(preds.size());
    for (std::size_t j = 0; j < preds.size(); ++j) {
      const std::size_t a = preds[j];
      if (train.attribute(a).is_continuous()) {
        gauss[j] = fit_gaussians(train, a);
      } else {
        const std::size_t k = train.attribute(a).num_categories();
        std::vector<std::vector<double>> counts(num_classes, std::vector<double>(k, 0.0));
        std::vector<double> totals(num_classes, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          const double v = train.value(r, a);
          if (is_missing(v)) continue;
          counts[train.class_of(r)][static_cast<std::size_t>(v)] += 1.0;
          totals[train.class_of(r)] += 1.0;
        }
        log_freq[j].assign(num_classes, std::vector<double>(k));
        for (std::size_t c = 0; c < num_classes; ++c) {
          for (std::size_t v = 0; v < k; ++v) {
            log_freq[j][c][v] = std::log((counts[c][v] + 1.0) / (totals[c] + static_cast<double>(k)));
          }
        }
      }
    }

    std::vector<Prediction> out;
    out.reserve(test.num_rows());
    for (std::size_t r = 0; r < test.num_rows(); ++r) {
      std::vector<double> logp = log_prior;
      for (std::size_t j = 0; j < preds.size(); ++j) {
        const double v = test.value(r, preds[j]);
        if (is_missing(v)) continue;
        for (std::size_t c = 0; c < num_classes; ++c) {
          if (test.attribute(preds[j]).is_continuous()) {
            const auto& g = gauss[j][c];
            const double z = (v - g.mean) / g.sd;
            logp[c] += -0.5 * z * z - std::log(g.sd);
          } else {
            logp[c] += log_freq[j][c][static_cast<std::size_t>(v)];
          }
        }
      }
      const double top = *std::max_element(logp.begin(), logp.end());
      double sum = 0.0;
      for (double& lp : logp) {
        lp = std::exp(lp - top);
        sum += lp;
      }
      for (double& lp : logp) lp /= sum;
      out.push_back({argmax(logp), logp});
    }
    return out;
  }

  // Per-class mean and sample sd. A class without observed values borrows
  // the overall estimate; sds are floored at max(1e-3 * overall sd, 1e-9).
  static std::vector<Gaussian> fit_gaussians(const Dataset& train, std::size_t a) {
    const std::size_t num_classes = train.num_classes();
    std::vector<std::vector<double>> by_class(num_classes);
    std::vector<double> all;
    for (std::size_t r = 0; r < train.num_rows(); ++r) {
      const double v = train.value(r, a);
      if (is_missing(v)) continue;
      by_class[train.class_of(r)].push_back(v);
      all.push_back(v);
    }
    const double overall_mean = stats::mean(all);
    const double overall_sd = stats::sample_std(all);
    const double floor = std::max(1e-3 * overall_sd, 1e-9);
    std::vector<Gaussian> out(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (by_class[c].empty()) {
        out[c] = {overall_mean, std::max(overall_sd, floor)};
      } else {
        out[c] = {stats::mean(by_class[c]), std::max(stats::sample_std(by_class[c]), floor)};
      }
    }
    return out;
  }
};

}  // namespace metaprep

#pragma once

// Unpruned information-gain decision tree: binary midpoint splits on
// continuous attributes, multiway splits on categorical ones, at least two
// branches holding two or more rows per split.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "metaprep/classifier.hpp"
#include "metaprep/metafeatures.hpp"

namespace metaprep {

class DecisionTree : public Classifier {
 public:
  explicit DecisionTree(std::size_t min_leaf = 2) : min_leaf_(min_leaf) {}

  std::string name() const override { return "tree"; }

  std::vector<Prediction> fit_predict(const Dataset& train, const Dataset& test, std::uint64_t /*seed*/) const override {
    check_schema(train, test);
    std::vector<std::size_t> rows(train.num_rows());
    for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
    const auto root = grow(train, rows);
    std::vector<Prediction> out;
    out.reserve(test.num_rows());
    for (std::size_t r = 0; r < test.num_rows(); ++r) {
      const Node* node = root.get();
      while (!node->children.empty()) node = node->children[route(*node, test.value(r, node->attr))].get();
      out.push_back({argmax(node->scores), node->scores});
    }
    return out;
  }

 private:
  struct Node {
    std::vector<double> scores;  // leaf class frequencies
    std::size_t attr = 0;
    bool continuous = false;
    double threshold = 0.0;
    double slack = 0.0;  // absorbs rounding when the data were affinely rescaled
    std::size_t default_child = 0;
    std::vector<std::unique_ptr<Node>> children;
  };

  struct Split {
    double gain = 0.0;
    std::size_t attr = 0;
    bool continuous = false;
    double threshold = 0.0;
    double slack = 0.0;
  };

  static std::size_t route(const Node& node, double v) {
    if (is_missing(v)) return node.default_child;
    if (node.continuous) return v <= node.threshold + node.slack ? 0 : 1;
    return static_cast<std::size_t>(v);
  }

  static std::vector<double> counts_of(const Dataset& ds, const std::vector<std::size_t>& rows) {
    std::vector<double> counts(ds.num_classes(), 0.0);
    for (std::size_t r : rows) counts[ds.class_of(r)] += 1.0;
    return counts;
  }

  // Gain over rows with a known value, scaled by the known fraction.
  std::optional<Split> best_continuous(const Dataset& ds, const std::vector<std::size_t>& rows, std::size_t a) const {
    const std::size_t num_classes = ds.num_classes();
    std::vector<std::pair<double, std::size_t>> known;
    for (std::size_t r : rows) {
      const double v = ds.value(r, a);
      if (!is_missing(v)) known.emplace_back(v, ds.class_of(r));
    }
    if (known.size() < 2 * min_leaf_) return std::nullopt;
    std::sort(known.begin(), known.end());
    std::vector<double> total(num_classes, 0.0), left(num_classes, 0.0), right(num_classes);
    for (const auto& kv : known) total[kv.second] += 1.0;
    const double nk = static_cast<double>(known.size());
    const double base = stats::entropy_of_counts(total);
    const double known_fraction = nk / static_cast<double>(rows.size());
    std::optional<Split> best;
    for (std::size_t i = 0; i + 1 < known.size(); ++i) {
      left[known[i].second] += 1.0;
      if (known[i].first == known[i + 1].first) continue;
      const std::size_t nl = i + 1;
      if (nl < min_leaf_ || known.size() - nl < min_leaf_) continue;
      for (std::size_t c = 0; c < num_classes; ++c) right[c] = total[c] - left[c];
      const double wl = static_cast<double>(nl) / nk;
      const double gain =
          known_fraction * (base - wl * stats::entropy_of_counts(left) - (1.0 - wl) * stats::entropy_of_counts(right));
      if (!best || gain > best->gain) {
        const double lo = known[i].first, hi = known[i + 1].first;
        best = Split{gain, a, true, lo + (hi - lo) / 2.0, 1e-9 * (hi - lo)};
      }
    }
    return best;
  }

  std::optional<Split> best_categorical(const Dataset& ds, const std::vector<std::size_t>& rows, std::size_t a) const {
    const std::size_t num_classes = ds.num_classes();
    const std::size_t k = ds.attribute(a).num_categories();
    std::vector<std::vector<double>> branch(k, std::vector<double>(num_classes, 0.0));
    std::vector<double> total(num_classes, 0.0);
    double nk = 0.0;
    for (std::size_t r : rows) {
      const double v = ds.value(r, a);
      if (is_missing(v)) continue;
      branch[static_cast<std::size_t>(v)][ds.class_of(r)] += 1.0;
      total[ds.class_of(r)] += 1.0;
      nk += 1.0;
    }
    std::size_t big = 0;
    for (const auto& b : branch) {
      double s = 0.0;
      for (double x : b) s += x;
      if (s >= static_cast<double>(min_leaf_)) ++big;
    }
    if (big < 2) return std::nullopt;
    double cond = 0.0;
    for (const auto& b : branch) {
      double s = 0.0;
      for (double x : b) s += x;
      if (s > 0.0) cond += (s / nk) * stats::entropy_of_counts(b);
    }
    const double gain = (nk / static_cast<double>(rows.size())) * (stats::entropy_of_counts(total) - cond);
    return Split{gain, a, false, 0.0, 0.0};
  }

  std::unique_ptr<Node> grow(const Dataset& ds, const std::vector<std::size_t>& rows) const {
    auto node = std::make_unique<Node>();
    const auto counts = counts_of(ds, rows);
    node->scores = counts;
    const double n = static_cast<double>(rows.size());
    for (double& s : node->scores) s /= n;
    if (is_pure(counts) || rows.size() < 2 * min_leaf_) return node;

    std::optional<Split> best;
    for (std::size_t a : ds.predictors()) {
      auto s = ds.attribute(a).is_continuous() ? best_continuous(ds, rows, a) : best_categorical(ds, rows, a);
      if (s && (!best || s->gain > best->gain)) best = s;
    }
    if (!best || best->gain <= 1e-12) return node;

    node->attr = best->attr;
    node->continuous = best->continuous;
    node->threshold = best->threshold;
    node->slack = best->slack;
    const std::size_t branches = best->continuous ? 2 : ds.attribute(best->attr).num_categories();
    std::vector<std::vector<std::size_t>> parts(branches);
    std::vector<std::size_t> unknown;
    for (std::size_t r : rows) {
      const double v = ds.value(r, best->attr);
      if (is_missing(v)) unknown.push_back(r);
      else parts[route(*node, v)].push_back(r);
    }
    for (std::size_t b = 1; b < branches; ++b) {
      if (parts[b].size() > parts[node->default_child].size()) node->default_child = b;
    }
    for (std::size_t r : unknown) parts[node->default_child].push_back(r);
    std::sort(parts[node->default_child].begin(), parts[node->default_child].end());
    for (auto& part : parts) {
      if (part.empty()) {
        auto leaf = std::make_unique<Node>();
        leaf->scores = node->scores;
        node->children.push_back(std::move(leaf));
      } else {
        node->children.push_back(grow(ds, part));
      }
    }
    return node;
  }

  static bool is_pure(const std::vector<double>& counts) {
    return std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
  }

  std::size_t min_leaf_;
};

}  // namespace metaprep

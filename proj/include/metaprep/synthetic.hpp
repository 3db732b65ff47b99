#pragma once

// Seeded generators for small classification datasets and for meta-databases
// that follow a known labelling rule. Used by the bundled mini corpus, the
// tests and the demo.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/metadb.hpp"

namespace metaprep {

struct SyntheticSpec {
  std::string name = "synthetic";
  std::size_t rows = 120;
  std::size_t classes = 2;
  std::size_t continuous = 3;
  std::size_t informative_continuous = 2;  // the rest is noise
  std::size_t categorical = 0;
  std::size_t informative_categorical = 0;
  std::size_t categories = 3;
  double separation = 1.5;     // distance between class means, in noise sds
  double missing_rate = 0.0;   // fraction of predictor cells blanked
  bool skewed = false;         // exponentiate continuous values
  std::vector<double> scales;  // optional per-continuous-attribute multiplier
  double class_imbalance = 0.0;  // 0 balanced; towards 1 the first class dominates
  std::uint64_t seed = 1;
};

inline Dataset make_synthetic(const SyntheticSpec& spec) {
  Rng rng(mix_seed(spec.seed, 0x5e7));
  const std::size_t n = spec.rows;
  const std::size_t k = spec.classes;

  std::vector<double> class_prob(k);
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    class_prob[c] = std::pow(1.0 - spec.class_imbalance * 0.8, static_cast<double>(c));
    total += class_prob[c];
  }
  std::vector<double> cls(n);
  for (std::size_t r = 0; r < n; ++r) {
    // First k rows cover every class so each one is present.
    if (r < k) {
      cls[r] = static_cast<double>(r);
      continue;
    }
    double u = rng.uniform() * total;
    std::size_t c = 0;
    while (c + 1 < k && u >= class_prob[c]) u -= class_prob[c++];
    cls[r] = static_cast<double>(c);
  }

  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < spec.continuous; ++j) {
    const bool informative = j < spec.informative_continuous;
    std::vector<double> offset(k);
    for (std::size_t c = 0; c < k; ++c) offset[c] = informative ? spec.separation * rng.normal() : 0.0;
    const double scale = j < spec.scales.size() ? spec.scales[j] : 1.0;
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) {
      double v = offset[static_cast<std::size_t>(cls[r])] + rng.normal();
      if (spec.skewed) v = std::exp(0.8 * v);
      col[r] = v * scale;
    }
    attrs.push_back(Attribute::continuous("x" + std::to_string(j + 1)));
    cols.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < spec.categorical; ++j) {
    const bool informative = j < spec.informative_categorical;
    const std::size_t m = std::max<std::size_t>(2, spec.categories);
    std::vector<std::vector<double>> weights(k, std::vector<double>(m, 1.0));
    if (informative) {
      for (std::size_t c = 0; c < k; ++c) weights[c][(c + j) % m] += 3.0;
    }
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& w = weights[static_cast<std::size_t>(cls[r])];
      double sum = 0.0;
      for (double x : w) sum += x;
      double u = rng.uniform() * sum;
      std::size_t v = 0;
      while (v + 1 < m && u >= w[v]) u -= w[v++];
      col[r] = static_cast<double>(v);
    }
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < m; ++v) labels.push_back("v" + std::to_string(v));
    attrs.push_back(Attribute::categorical("c" + std::to_string(j + 1), std::move(labels)));
    cols.push_back(std::move(col));
  }
  if (spec.missing_rate > 0.0) {
    for (auto& col : cols) {
      for (double& v : col) {
        if (rng.bernoulli(spec.missing_rate)) v = missing;
      }
    }
  }
  std::vector<std::string> class_labels;
  for (std::size_t c = 0; c < k; ++c) class_labels.push_back("k" + std::to_string(c));
  attrs.push_back(Attribute::categorical("class", std::move(class_labels)));
  cols.push_back(std::move(cls));
  const std::size_t class_index = attrs.size() - 1;
  return Dataset(spec.name, std::move(attrs), class_index, std::move(cols));
}

// The bundled mini corpus: varied sizes, class counts, attribute mixes,
// skew, scales and missing values.
inline std::vector<SyntheticSpec> mini_corpus_specs() {
  std::vector<SyntheticSpec> specs;
  auto add = [&](SyntheticSpec s) {
    s.seed = 1000 + specs.size();
    specs.push_back(std::move(s));
  };
  SyntheticSpec s;
  s = {}; s.name = "blobs_a"; s.rows = 90; s.continuous = 3; s.informative_continuous = 2; add(s);
  s = {}; s.name = "blobs_b"; s.rows = 120; s.classes = 3; s.continuous = 4; s.informative_continuous = 3; add(s);
  s = {}; s.name = "blobs_wide_scale"; s.rows = 100; s.continuous = 4; s.informative_continuous = 2; s.scales = {1000, 0.01, 5, 1}; add(s);
  s = {}; s.name = "skewed_a"; s.rows = 110; s.continuous = 3; s.informative_continuous = 2; s.skewed = true; add(s);
  s = {}; s.name = "skewed_b"; s.rows = 140; s.classes = 3; s.continuous = 5; s.informative_continuous = 2; s.skewed = true; add(s);
  s = {}; s.name = "weak_signal"; s.rows = 100; s.continuous = 4; s.informative_continuous = 1; s.separation = 0.6; add(s);
  s = {}; s.name = "noisy_many"; s.rows = 80; s.continuous = 7; s.informative_continuous = 2; add(s);
  s = {}; s.name = "mixed_a"; s.rows = 100; s.continuous = 2; s.informative_continuous = 1; s.categorical = 2; s.informative_categorical = 1; add(s);
  s = {}; s.name = "mixed_b"; s.rows = 130; s.classes = 3; s.continuous = 3; s.informative_continuous = 2; s.categorical = 2; s.informative_categorical = 2; s.categories = 4; add(s);
  s = {}; s.name = "mixed_missing"; s.rows = 120; s.continuous = 3; s.informative_continuous = 2; s.categorical = 2; s.informative_categorical = 1; s.missing_rate = 0.05; add(s);
  s = {}; s.name = "cont_missing"; s.rows = 100; s.continuous = 4; s.informative_continuous = 2; s.missing_rate = 0.08; add(s);
  s = {}; s.name = "cat_only"; s.rows = 90; s.continuous = 0; s.informative_continuous = 0; s.categorical = 4; s.informative_categorical = 2; add(s);
  s = {}; s.name = "cat_missing"; s.rows = 100; s.continuous = 0; s.informative_continuous = 0; s.categorical = 3; s.informative_categorical = 2; s.missing_rate = 0.06; add(s);
  s = {}; s.name = "imbalanced"; s.rows = 120; s.continuous = 3; s.informative_continuous = 2; s.class_imbalance = 0.8; add(s);
  s = {}; s.name = "imbalanced_3"; s.rows = 150; s.classes = 3; s.continuous = 3; s.informative_continuous = 2; s.class_imbalance = 0.6; add(s);
  s = {}; s.name = "four_class"; s.rows = 160; s.classes = 4; s.continuous = 4; s.informative_continuous = 3; s.separation = 2.0; add(s);
  s = {}; s.name = "small_n"; s.rows = 40; s.continuous = 3; s.informative_continuous = 2; add(s);
  s = {}; s.name = "one_cont"; s.rows = 80; s.continuous = 1; s.informative_continuous = 1; s.categorical = 1; s.informative_categorical = 0; add(s);
  s = {}; s.name = "binary_cats"; s.rows = 100; s.continuous = 2; s.informative_continuous = 1; s.categorical = 3; s.informative_categorical = 2; s.categories = 2; add(s);
  s = {}; s.name = "separable"; s.rows = 100; s.continuous = 3; s.informative_continuous = 1; s.separation = 5.0; add(s);
  s = {}; s.name = "skewed_mixed"; s.rows = 120; s.continuous = 3; s.informative_continuous = 2; s.skewed = true; s.categorical = 1; s.informative_categorical = 1; s.scales = {50, 1, 0.2}; add(s);
  s = {}; s.name = "hard_3class"; s.rows = 150; s.classes = 3; s.continuous = 5; s.informative_continuous = 2; s.separation = 0.8; s.missing_rate = 0.03; add(s);
  s = {}; s.name = "many_cats"; s.rows = 120; s.continuous = 2; s.informative_continuous = 1; s.categorical = 2; s.informative_categorical = 1; s.categories = 6; add(s);
  s = {}; s.name = "tiny_wide"; s.rows = 30; s.continuous = 6; s.informative_continuous = 2; add(s);
  return specs;
}

// ---------------------------------------------------------------------------
// Meta-databases with a planted rule.

struct SyntheticMetaSpec {
  std::size_t datasets = 40;
  std::size_t min_transformations = 4;
  std::size_t max_transformations = 10;
  double skew_threshold = 1.0;
  double label_noise = 0.0;  // probability of replacing a label with a uniformly drawn one
  std::uint64_t seed = 7;
};

// Every dataset gets random base meta-features. Its transformations are
// discretizations of single attributes (one continuous attribute becomes
// categorical) or global normalizations (no structural change). Planted
// rule: a discretization is positive when the dataset's mean skewness
// exceeds the threshold and negative otherwise; normalizations are zero.
inline MetaDatabase make_synthetic_metadb(const SyntheticMetaSpec& spec) {
  using MF = MetaFeature;
  auto at = [](MF f) { return static_cast<std::size_t>(f); };
  Rng rng(mix_seed(spec.seed, 0x3e7a));
  MetaDatabase db;
  db.algorithm = "tree";
  db.measure = Measure::Accuracy;
  for (std::size_t d = 0; d < spec.datasets; ++d) {
    ModifiableFeatures base{};
    for (std::size_t i = 0; i < kNumModifiable; ++i) base[i] = rng.uniform(0.0, 10.0);
    const double skew = rng.uniform(-1.0, 3.0);
    const double n_cont = static_cast<double>(3 + rng.index(8));
    base[at(MF::MeanSkewnessOfContinuousAttributes)] = skew;
    base[at(MF::NumberOfContinuousAttributes)] = n_cont;
    base[at(MF::NumberOfCategoricalAttributes)] = static_cast<double>(rng.index(4));
    const double base_perf = rng.uniform(0.5, 0.95);
    const std::size_t span = spec.max_transformations - spec.min_transformations + 1;
    const std::size_t count = spec.min_transformations + rng.index(span);
    for (std::size_t t = 0; t < count; ++t) {
      MetaInstance row;
      row.dataset = "meta_" + std::to_string(d);
      row.base_features = base;
      row.base_performance = base_perf;
      for (std::size_t i = 0; i < kNumModifiable; ++i) row.delta_features[i] = 0.0;
      ResponseClass cls = ResponseClass::Zero;
      if (t == 0) {
        row.transformation = "normalize(global)";
      } else if (t == 1) {
        row.transformation = "standardize(global)";
      } else {
        const bool supervised = t % 2 == 0;
        const std::size_t attr = (t - 2) / 2;
        row.transformation = supervised ? "discretize_sup(attr=" + std::to_string(attr) + ")"
                                        : "discretize_unsup(attr=" + std::to_string(attr) + ",bins=10)";
        row.delta_features[at(MF::NumberOfContinuousAttributes)] = -1.0;
        row.delta_features[at(MF::NumberOfCategoricalAttributes)] = 1.0;
        row.delta_features[at(MF::MeanSkewnessOfContinuousAttributes)] = rng.uniform(-0.3, 0.3);
        cls = skew > spec.skew_threshold ? ResponseClass::Positive : ResponseClass::Negative;
      }
      if (spec.label_noise > 0.0 && rng.bernoulli(spec.label_noise)) cls = static_cast<ResponseClass>(rng.index(3));
      row.response_class = cls;
      row.response_value = cls == ResponseClass::Positive   ? rng.uniform(0.01, 0.2)
                           : cls == ResponseClass::Negative ? -rng.uniform(0.01, 0.2)
                                                            : 0.0;
      db.rows.push_back(std::move(row));
    }
  }
  return db;
}

}  // namespace metaprep

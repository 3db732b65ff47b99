#pragma once

// Dataset characteristics (61 meta-features) and delta vectors.
//
// Statistics are computed over predictors only; the class feeds the class
// group and the information measures. Missing cells are dropped per
// attribute (per attribute/class pair for mutual information).
//
// Continuous group: per-attribute mean, sample std (n-1), adjusted
// Fisher-Pearson skewness and adjusted excess kurtosis, aggregated across
// attributes by min/mean/max and type-7 quartiles. A constant attribute has
// zero std, skewness and kurtosis, as does one whose estimator denominator
// vanishes (fewer than 3 or 4 values).
//
// Percentages of attribute kinds use all attributes (class included) as the
// denominator; Dimensionality is NumberOfAttributes / NumberOfInstances.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"

namespace metaprep {

enum class MetaFeature : std::size_t {
  NumberOfContinuousAttributes,
  PercentageOfContinuousAttributes,
  MinMeansOfContinuousAttributes,
  MinStdOfContinuousAttributes,
  MinKurtosisOfContinuousAttributes,
  MinSkewnessOfContinuousAttributes,
  MeanMeansOfContinuousAttributes,
  MeanStdOfContinuousAttributes,
  MeanKurtosisOfContinuousAttributes,
  MeanSkewnessOfContinuousAttributes,
  MaxMeansOfContinuousAttributes,
  MaxStdOfContinuousAttributes,
  MaxKurtosisOfContinuousAttributes,
  MaxSkewnessOfContinuousAttributes,
  Quartile1MeansOfContinuousAttributes,
  Quartile2MeansOfContinuousAttributes,
  Quartile3MeansOfContinuousAttributes,
  Quartile1StdOfContinuousAttributes,
  Quartile2StdOfContinuousAttributes,
  Quartile3StdOfContinuousAttributes,
  Quartile1KurtosisOfContinuousAttributes,
  Quartile2KurtosisOfContinuousAttributes,
  Quartile3KurtosisOfContinuousAttributes,
  Quartile1SkewnessOfContinuousAttributes,
  Quartile2SkewnessOfContinuousAttributes,
  Quartile3SkewnessOfContinuousAttributes,
  NumberOfCategoricalAttributes,
  NumberOfBinaryAttributes,
  PercentageOfCategoricalAttributes,
  PercentageOfBinaryAttributes,
  MinAttributeEntropy,
  MeanAttributeEntropy,
  MaxAttributeEntropy,
  Quartile1AttributeEntropy,
  Quartile2AttributeEntropy,
  Quartile3AttributeEntropy,
  MinMutualInformation,
  MeanMutualInformation,
  MaxMutualInformation,
  Quartile1MutualInformation,
  Quartile2MutualInformation,
  Quartile3MutualInformation,
  EquivalentNumberOfAttributes,
  NoiseToSignalRatio,
  MinAttributeDistinctValues,
  MeanAttributeDistinctValues,
  MaxAttributeDistinctValues,
  StdAttributeDistinctValues,
  NumberOfInstances,
  NumberOfAttributes,
  Dimensionality,
  NumberOfMissingValues,
  PercentageOfMissingValues,
  NumberOfInstancesWithMissingValues,
  PercentageOfInstancesWithMissingValues,
  NumberOfClasses,
  ClassEntropy,
  MinorityClassSize,
  MajorityClassSize,
  MinorityClassPercentage,
  MajorityClassPercentage,
};

inline constexpr std::size_t kNumMetaFeatures = 61;
// Features up to NumberOfClasses can change under a transformation.
inline constexpr std::size_t kNumModifiable = 55;

inline constexpr std::array<std::string_view, kNumMetaFeatures> kMetaFeatureNames = {
    "NumberOfContinuousAttributes",
    "PercentageOfContinuousAttributes",
    "MinMeansOfContinuousAttributes",
    "MinStdOfContinuousAttributes",
    "MinKurtosisOfContinuousAttributes",
    "MinSkewnessOfContinuousAttributes",
    "MeanMeansOfContinuousAttributes",
    "MeanStdOfContinuousAttributes",
    "MeanKurtosisOfContinuousAttributes",
    "MeanSkewnessOfContinuousAttributes",
    "MaxMeansOfContinuousAttributes",
    "MaxStdOfContinuousAttributes",
    "MaxKurtosisOfContinuousAttributes",
    "MaxSkewnessOfContinuousAttributes",
    "Quartile1MeansOfContinuousAttributes",
    "Quartile2MeansOfContinuousAttributes",
    "Quartile3MeansOfContinuousAttributes",
    "Quartile1StdOfContinuousAttributes",
    "Quartile2StdOfContinuousAttributes",
    "Quartile3StdOfContinuousAttributes",
    "Quartile1KurtosisOfContinuousAttributes",
    "Quartile2KurtosisOfContinuousAttributes",
    "Quartile3KurtosisOfContinuousAttributes",
    "Quartile1SkewnessOfContinuousAttributes",
    "Quartile2SkewnessOfContinuousAttributes",
    "Quartile3SkewnessOfContinuousAttributes",
    "NumberOfCategoricalAttributes",
    "NumberOfBinaryAttributes",
    "PercentageOfCategoricalAttributes",
    "PercentageOfBinaryAttributes",
    "MinAttributeEntropy",
    "MeanAttributeEntropy",
    "MaxAttributeEntropy",
    "Quartile1AttributeEntropy",
    "Quartile2AttributeEntropy",
    "Quartile3AttributeEntropy",
    "MinMutualInformation",
    "MeanMutualInformation",
    "MaxMutualInformation",
    "Quartile1MutualInformation",
    "Quartile2MutualInformation",
    "Quartile3MutualInformation",
    "EquivalentNumberOfAttributes",
    "NoiseToSignalRatio",
    "MinAttributeDistinctValues",
    "MeanAttributeDistinctValues",
    "MaxAttributeDistinctValues",
    "StdAttributeDistinctValues",
    "NumberOfInstances",
    "NumberOfAttributes",
    "Dimensionality",
    "NumberOfMissingValues",
    "PercentageOfMissingValues",
    "NumberOfInstancesWithMissingValues",
    "PercentageOfInstancesWithMissingValues",
    "NumberOfClasses",
    "ClassEntropy",
    "MinorityClassSize",
    "MajorityClassSize",
    "MinorityClassPercentage",
    "MajorityClassPercentage",
};

inline constexpr std::string_view name_of(MetaFeature f) { return kMetaFeatureNames[static_cast<std::size_t>(f)]; }

inline constexpr bool is_modifiable(MetaFeature f) { return static_cast<std::size_t>(f) < kNumModifiable; }

inline std::optional<MetaFeature> meta_feature_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
    if (kMetaFeatureNames[i] == name) return static_cast<MetaFeature>(i);
  }
  return std::nullopt;
}

// nullopt marks a feature that does not apply to the dataset.
using MetaValue = std::optional<double>;

class MetaFeatureVector {
 public:
  MetaFeatureVector() = default;

  MetaValue operator[](MetaFeature f) const { return values_[static_cast<std::size_t>(f)]; }
  MetaValue& operator[](MetaFeature f) { return values_[static_cast<std::size_t>(f)]; }
  MetaValue at(std::size_t i) const { return values_.at(i); }
  MetaValue& at(std::size_t i) { return values_.at(i); }

  static constexpr std::size_t size() { return kNumMetaFeatures; }
  static constexpr bool modifiable(std::size_t i) { return i < kNumModifiable; }

  const std::array<MetaValue, kNumMetaFeatures>& values() const { return values_; }

  friend bool operator==(const MetaFeatureVector&, const MetaFeatureVector&) = default;

 private:
  std::array<MetaValue, kNumMetaFeatures> values_{};
};

// Differences after - before; same key set as MetaFeatureVector.
class DeltaVector {
 public:
  MetaValue operator[](MetaFeature f) const { return deltas_[static_cast<std::size_t>(f)]; }
  MetaValue at(std::size_t i) const { return deltas_.at(i); }
  MetaValue& at(std::size_t i) { return deltas_.at(i); }
  static constexpr std::size_t size() { return kNumMetaFeatures; }
  const std::array<MetaValue, kNumMetaFeatures>& values() const { return deltas_; }

  friend bool operator==(const DeltaVector&, const DeltaVector&) = default;

 private:
  std::array<MetaValue, kNumMetaFeatures> deltas_{};
};

inline DeltaVector delta(const MetaFeatureVector& before, const MetaFeatureVector& after) {
  DeltaVector out;
  for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
    const auto b = before.at(i);
    const auto a = after.at(i);
    if (a && b) out.at(i) = *a - *b;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summary statistics.

namespace stats {

// Type-7 quantile: linear interpolation between order statistics.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1); 0 for fewer than 2 values.
inline double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

inline Moments moments(std::span<const double> v) {
  Moments out;
  const double n = static_cast<double>(v.size());
  if (v.empty()) return out;
  out.mean = mean(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - out.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  out.std = sample_std(v);
  if (m2 <= 0.0) return out;  // constant attribute
  if (v.size() > 2) {
    const double g1 = m3 / std::pow(m2, 1.5);
    out.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  }
  if (v.size() > 3) {
    const double g2 = m4 / (m2 * m2) - 3.0;
    out.kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  }
  return out;
}

inline double entropy_of_counts(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace stats

// ---------------------------------------------------------------------------
// Information-theoretic measures.

inline double class_entropy(const Dataset& ds) {
  std::vector<double> counts(ds.num_classes(), 0.0);
  for (std::size_t r = 0; r < ds.num_rows(); ++r) counts[ds.class_of(r)] += 1.0;
  return stats::entropy_of_counts(counts);
}

// Shannon entropy (bits) of a categorical attribute over non-missing cells.
inline double attribute_entropy(const Dataset& ds, std::size_t attr) {
  const Attribute& a = ds.attribute(attr);
  if (!a.is_categorical()) throw ArgumentError("attribute_entropy: '" + a.name + "' is not categorical");
  std::vector<double> counts(a.num_categories(), 0.0);
  for (double v : ds.column(attr)) {
    if (!is_missing(v)) counts[static_cast<std::size_t>(v)] += 1.0;
  }
  return stats::entropy_of_counts(counts);
}

// I(attr; class) in bits from the joint frequency table, rows with a missing
// attribute cell excluded.
inline double mutual_information(const Dataset& ds, std::size_t attr) {
  const Attribute& a = ds.attribute(attr);
  if (!a.is_categorical()) throw ArgumentError("mutual_information: '" + a.name + "' is not categorical");
  const std::size_t ka = a.num_categories();
  const std::size_t kc = ds.num_classes();
  std::vector<double> joint(ka * kc, 0.0), pa(ka, 0.0), pc(kc, 0.0);
  double total = 0.0;
  const auto col = ds.column(attr);
  for (std::size_t r = 0; r < ds.num_rows(); ++r) {
    if (is_missing(col[r])) continue;
    const auto i = static_cast<std::size_t>(col[r]);
    const std::size_t c = ds.class_of(r);
    joint[i * kc + c] += 1.0;
    pa[i] += 1.0;
    pc[c] += 1.0;
    total += 1.0;
  }
  if (total <= 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < ka; ++i) {
    for (std::size_t c = 0; c < kc; ++c) {
      const double n = joint[i * kc + c];
      if (n <= 0.0) continue;
      mi += (n / total) * std::log2(n * total / (pa[i] * pc[c]));
    }
  }
  return std::max(0.0, mi);
}

struct InformationFeatures {
  MetaValue equivalent_number_of_attributes;
  MetaValue noise_to_signal_ratio;
};

// ENA = H(class) / mean MI and NSR = (mean H(attr) - mean MI) / mean MI over
// the categorical predictors. Both are not applicable when mean MI is zero
// or there is no categorical predictor.
inline InformationFeatures derived_information_features(const Dataset& ds) {
  const auto cats = ds.predictors_of_kind(AttributeKind::Categorical);
  if (cats.empty()) return {};
  double mean_h = 0.0, mean_mi = 0.0;
  for (std::size_t a : cats) {
    mean_h += attribute_entropy(ds, a);
    mean_mi += mutual_information(ds, a);
  }
  mean_h /= static_cast<double>(cats.size());
  mean_mi /= static_cast<double>(cats.size());
  if (mean_mi <= 0.0) return {};
  return {class_entropy(ds) / mean_mi, (mean_h - mean_mi) / mean_mi};
}

// ---------------------------------------------------------------------------

namespace metafeature_detail {

inline void fill_aggregates(MetaFeatureVector& v, const std::vector<double>& values, MetaFeature min_f,
                            MetaFeature mean_f, MetaFeature max_f) {
  v[min_f] = *std::min_element(values.begin(), values.end());
  v[mean_f] = stats::mean(values);
  v[max_f] = *std::max_element(values.begin(), values.end());
}

inline void fill_quartiles(MetaFeatureVector& v, const std::vector<double>& values, MetaFeature q1) {
  const auto base = static_cast<std::size_t>(q1);
  v.at(base) = stats::quantile(values, 0.25);
  v.at(base + 1) = stats::quantile(values, 0.5);
  v.at(base + 2) = stats::quantile(values, 0.75);
}

}  // namespace metafeature_detail

inline MetaFeatureVector compute_meta_features(const Dataset& ds) {
  using MF = MetaFeature;
  using metafeature_detail::fill_aggregates;
  using metafeature_detail::fill_quartiles;

  MetaFeatureVector v;
  const std::size_t n = ds.num_rows();
  const std::size_t m = ds.num_attributes();
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const auto conts = ds.predictors_of_kind(AttributeKind::Continuous);
  const auto cats = ds.predictors_of_kind(AttributeKind::Categorical);

  // Continuous group.
  v[MF::NumberOfContinuousAttributes] = static_cast<double>(conts.size());
  v[MF::PercentageOfContinuousAttributes] = 100.0 * static_cast<double>(conts.size()) / dm;
  if (!conts.empty()) {
    std::vector<double> means, stds, kurts, skews;
    for (std::size_t a : conts) {
      std::vector<double> vals;
      for (double x : ds.column(a)) {
        if (!is_missing(x)) vals.push_back(x);
      }
      const auto mo = stats::moments(vals);
      means.push_back(mo.mean);
      stds.push_back(mo.std);
      kurts.push_back(mo.kurtosis);
      skews.push_back(mo.skewness);
    }
    fill_aggregates(v, means, MF::MinMeansOfContinuousAttributes, MF::MeanMeansOfContinuousAttributes,
                    MF::MaxMeansOfContinuousAttributes);
    fill_aggregates(v, stds, MF::MinStdOfContinuousAttributes, MF::MeanStdOfContinuousAttributes,
                    MF::MaxStdOfContinuousAttributes);
    fill_aggregates(v, kurts, MF::MinKurtosisOfContinuousAttributes, MF::MeanKurtosisOfContinuousAttributes,
                    MF::MaxKurtosisOfContinuousAttributes);
    fill_aggregates(v, skews, MF::MinSkewnessOfContinuousAttributes, MF::MeanSkewnessOfContinuousAttributes,
                    MF::MaxSkewnessOfContinuousAttributes);
    fill_quartiles(v, means, MF::Quartile1MeansOfContinuousAttributes);
    fill_quartiles(v, stds, MF::Quartile1StdOfContinuousAttributes);
    fill_quartiles(v, kurts, MF::Quartile1KurtosisOfContinuousAttributes);
    fill_quartiles(v, skews, MF::Quartile1SkewnessOfContinuousAttributes);
  }

  // Categorical group.
  std::size_t binary = 0;
  for (std::size_t a : cats) {
    if (ds.attribute(a).num_categories() == 2) ++binary;
  }
  v[MF::NumberOfCategoricalAttributes] = static_cast<double>(cats.size());
  v[MF::NumberOfBinaryAttributes] = static_cast<double>(binary);
  v[MF::PercentageOfCategoricalAttributes] = 100.0 * static_cast<double>(cats.size()) / dm;
  v[MF::PercentageOfBinaryAttributes] = 100.0 * static_cast<double>(binary) / dm;
  if (!cats.empty()) {
    std::vector<double> ents, mis, distinct;
    for (std::size_t a : cats) {
      ents.push_back(attribute_entropy(ds, a));
      mis.push_back(mutual_information(ds, a));
      std::vector<bool> seen(ds.attribute(a).num_categories(), false);
      for (double x : ds.column(a)) {
        if (!is_missing(x)) seen[static_cast<std::size_t>(x)] = true;
      }
      distinct.push_back(static_cast<double>(std::count(seen.begin(), seen.end(), true)));
    }
    fill_aggregates(v, ents, MF::MinAttributeEntropy, MF::MeanAttributeEntropy, MF::MaxAttributeEntropy);
    fill_quartiles(v, ents, MF::Quartile1AttributeEntropy);
    fill_aggregates(v, mis, MF::MinMutualInformation, MF::MeanMutualInformation, MF::MaxMutualInformation);
    fill_quartiles(v, mis, MF::Quartile1MutualInformation);
    const auto info = derived_information_features(ds);
    v[MF::EquivalentNumberOfAttributes] = info.equivalent_number_of_attributes;
    v[MF::NoiseToSignalRatio] = info.noise_to_signal_ratio;
    fill_aggregates(v, distinct, MF::MinAttributeDistinctValues, MF::MeanAttributeDistinctValues,
                    MF::MaxAttributeDistinctValues);
    v[MF::StdAttributeDistinctValues] = stats::sample_std(distinct);
  }

  // Generic group.
  std::size_t missing_cells = 0, rows_with_missing = 0;
  for (std::size_t r = 0; r < n; ++r) {
    bool any = false;
    for (std::size_t a = 0; a < m; ++a) {
      if (is_missing(ds.value(r, a))) {
        ++missing_cells;
        any = true;
      }
    }
    if (any) ++rows_with_missing;
  }
  v[MF::NumberOfInstances] = dn;
  v[MF::NumberOfAttributes] = dm;
  v[MF::Dimensionality] = dm / dn;
  v[MF::NumberOfMissingValues] = static_cast<double>(missing_cells);
  v[MF::PercentageOfMissingValues] = 100.0 * static_cast<double>(missing_cells) / (dn * dm);
  v[MF::NumberOfInstancesWithMissingValues] = static_cast<double>(rows_with_missing);
  v[MF::PercentageOfInstancesWithMissingValues] = 100.0 * static_cast<double>(rows_with_missing) / dn;

  // Class group.
  const auto counts = ds.class_counts();
  const auto [mn, mx] = std::minmax_element(counts.begin(), counts.end());
  v[MF::NumberOfClasses] = static_cast<double>(ds.num_classes());
  v[MF::ClassEntropy] = class_entropy(ds);
  v[MF::MinorityClassSize] = static_cast<double>(*mn);
  v[MF::MajorityClassSize] = static_cast<double>(*mx);
  v[MF::MinorityClassPercentage] = 100.0 * static_cast<double>(*mn) / dn;
  v[MF::MajorityClassPercentage] = 100.0 * static_cast<double>(*mx) / dn;
  return v;
}

}  // namespace metaprep

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "metaprep/metafeatures.hpp"
#include "test_util.hpp"

namespace metaprep {
namespace {

using MF = MetaFeature;
using testing::random_dataset;

// Skewness and kurtosis written in the sample-std form, as an independent
// check on the moment-based implementation.
double oracle_skewness(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / (n - 1));
  double sum = 0;
  for (double v : x) sum += std::pow((v - m) / s, 3);
  return n / ((n - 1) * (n - 2)) * sum;
}

double oracle_kurtosis(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / (n - 1));
  double sum = 0;
  for (double v : x) sum += std::pow((v - m) / s, 4);
  return n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * sum - 3 * (n - 1) * (n - 1) / ((n - 2) * (n - 3));
}

Dataset categorical_dataset(const std::vector<std::vector<int>>& attrs, const std::vector<int>& cls,
                            std::size_t categories = 2, std::size_t classes = 2) {
  std::vector<Attribute> a;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < attrs.size(); ++j) {
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < categories; ++v) labels.push_back("v" + std::to_string(v));
    a.push_back(Attribute::categorical("a" + std::to_string(j), labels));
    std::vector<double> col;
    for (int v : attrs[j]) col.push_back(v < 0 ? missing : v);
    cols.push_back(col);
  }
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  a.push_back(Attribute::categorical("class", labels));
  cols.emplace_back(cls.begin(), cls.end());
  const std::size_t ci = a.size() - 1;
  return Dataset("cat", a, ci, cols);
}

TEST(MetaFeatures, NamesAreUniqueAndComplete) {
  EXPECT_EQ(kMetaFeatureNames.size(), 61u);
  for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
    const auto f = meta_feature_from_name(kMetaFeatureNames[i]);
    ASSERT_TRUE(f);
    EXPECT_EQ(static_cast<std::size_t>(*f), i);
    EXPECT_EQ(is_modifiable(*f), i < 55);
  }
  EXPECT_FALSE(is_modifiable(MF::NumberOfClasses));
  EXPECT_TRUE(is_modifiable(MF::NumberOfInstances));
}

TEST(MetaFeatures, CountsOnSmallMixedDataset) {
  std::vector<Attribute> attrs = {Attribute::continuous("x"), Attribute::continuous("y"),
                                  Attribute::categorical("c", {"a", "b"}), Attribute::categorical("class", {"p", "q"})};
  const Dataset ds("m", attrs, 3, {{1, 2, 3, 4}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}});
  const auto v = compute_meta_features(ds);
  EXPECT_EQ(*v[MF::NumberOfAttributes], 4);
  EXPECT_EQ(*v[MF::NumberOfInstances], 4);
  EXPECT_EQ(*v[MF::Dimensionality], 1.0);
  EXPECT_EQ(*v[MF::NumberOfContinuousAttributes], 2);
  EXPECT_EQ(*v[MF::PercentageOfContinuousAttributes], 50);
  EXPECT_EQ(*v[MF::PercentageOfCategoricalAttributes], 25);
  EXPECT_EQ(*v[MF::NumberOfBinaryAttributes], 1);
  EXPECT_EQ(*v[MF::ClassEntropy], 1.0);
  EXPECT_EQ(*v[MF::MajorityClassPercentage], 50);
  EXPECT_EQ(*v[MF::MinorityClassSize], 2);
}

TEST(MetaFeatures, ContinuousStatisticsMatchOracle) {
  const std::vector<double> x = {1.0, 2.0, 2.5, 4.0, 9.0, 3.3};
  const std::vector<double> y = {0.5, -1.0, 2.0, 2.0, 7.0, -3.0};
  const auto ds = testing::continuous_dataset({x, y}, {0, 1, 0, 1, 0, 1});
  const auto v = compute_meta_features(ds);
  const double sx = oracle_skewness(x), sy = oracle_skewness(y);
  const double kx = oracle_kurtosis(x), ky = oracle_kurtosis(y);
  EXPECT_NEAR(*v[MF::MinSkewnessOfContinuousAttributes], std::min(sx, sy), 1e-12);
  EXPECT_NEAR(*v[MF::MaxSkewnessOfContinuousAttributes], std::max(sx, sy), 1e-12);
  EXPECT_NEAR(*v[MF::MeanKurtosisOfContinuousAttributes], (kx + ky) / 2, 1e-12);
  EXPECT_NEAR(*v[MF::MeanMeansOfContinuousAttributes], (std::accumulate(x.begin(), x.end(), 0.0) +
                                                        std::accumulate(y.begin(), y.end(), 0.0)) / 12.0, 1e-12);
}

TEST(MetaFeatures, Type7Quartiles) {
  EXPECT_DOUBLE_EQ(stats::quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(stats::quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile({4, 3, 2, 1}, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(stats::quantile({7}, 0.25), 7);
}

TEST(MetaFeatures, ConstantAttributeHasZeroMoments) {
  const auto ds = testing::continuous_dataset({{3, 3, 3, 3, 3}}, {0, 1, 0, 1, 0});
  const auto v = compute_meta_features(ds);
  EXPECT_EQ(*v[MF::MeanStdOfContinuousAttributes], 0);
  EXPECT_EQ(*v[MF::MeanSkewnessOfContinuousAttributes], 0);
  EXPECT_EQ(*v[MF::MeanKurtosisOfContinuousAttributes], 0);
}

TEST(MetaFeatures, NotApplicableGroups) {
  const auto cont = compute_meta_features(testing::continuous_dataset({{1, 2, 3}}, {0, 1, 0}));
  EXPECT_FALSE(cont[MF::MeanAttributeEntropy]);
  EXPECT_FALSE(cont[MF::EquivalentNumberOfAttributes]);
  EXPECT_EQ(*cont[MF::NumberOfCategoricalAttributes], 0);
  const auto cat = compute_meta_features(categorical_dataset({{0, 1, 0}}, {0, 1, 0}));
  EXPECT_FALSE(cat[MF::MeanSkewnessOfContinuousAttributes]);
  EXPECT_EQ(*cat[MF::NumberOfContinuousAttributes], 0);
  EXPECT_TRUE(cat[MF::MeanAttributeEntropy]);
}

TEST(Entropy, HandValues) {
  EXPECT_DOUBLE_EQ(attribute_entropy(categorical_dataset({{0, 1, 2, 3}}, {0, 1, 0, 1}, 4), 0), 2.0);
  EXPECT_DOUBLE_EQ(attribute_entropy(categorical_dataset({{1, 1, 1}}, {0, 1, 0}), 0), 0.0);
  const double h31 = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
  EXPECT_NEAR(attribute_entropy(categorical_dataset({{0, 0, 0, 1, -1}}, {0, 1, 0, 1, 0}), 0), h31, 1e-12);
  EXPECT_NEAR(h31, 0.8113, 1e-4);
  EXPECT_THROW(attribute_entropy(testing::continuous_dataset({{1, 2}}, {0, 1}), 0), ArgumentError);
}

TEST(MutualInformation, IdentityAndIndependence) {
  const auto same = categorical_dataset({{0, 1, 0, 1}}, {0, 1, 0, 1});
  EXPECT_NEAR(mutual_information(same, 0), class_entropy(same), 1e-12);
  const auto info = derived_information_features(same);
  EXPECT_NEAR(*info.equivalent_number_of_attributes, 1.0, 1e-12);
  EXPECT_NEAR(*info.noise_to_signal_ratio, 0.0, 1e-12);
  const auto indep = categorical_dataset({{0, 0, 1, 1}}, {0, 1, 0, 1});
  EXPECT_NEAR(mutual_information(indep, 0), 0.0, 1e-12);
  const auto none = derived_information_features(indep);
  EXPECT_FALSE(none.equivalent_number_of_attributes);
  EXPECT_FALSE(none.noise_to_signal_ratio);
}

// Brute-force sum over the joint table: sum p(a,c) log2(p(a,c) / (p(a) p(c))).
double oracle_mi(const std::vector<int>& a, const std::vector<int>& c) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] >= 0) pairs.emplace_back(a[i], c[i]);
  const double n = static_cast<double>(pairs.size());
  double mi = 0;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 3; ++y) {
      double nxy = 0, nx = 0, ny = 0;
      for (auto [p, q] : pairs) {
        nxy += p == x && q == y;
        nx += p == x;
        ny += q == y;
      }
      if (nxy > 0) mi += nxy / n * std::log2((nxy / n) / ((nx / n) * (ny / n)));
    }
  }
  return mi;
}

TEST(MutualInformation, SixRowJointTable) {
  const std::vector<int> a = {0, 0, 1, 1, 2, 2}, c = {0, 1, 1, 1, 0, 0};
  EXPECT_NEAR(mutual_information(categorical_dataset({a}, c, 3), 0), oracle_mi(a, c), 1e-12);
}

TEST(MutualInformationProperty, RandomTablesAndBounds) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 6 + rng.index(30);
    std::vector<int> a(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.bernoulli(0.1) ? -1 : static_cast<int>(rng.index(4));
      c[i] = static_cast<int>(i < 3 ? i : rng.index(3));
    }
    const auto ds = categorical_dataset({a}, c, 4, 3);
    const double mi = mutual_information(ds, 0);
    EXPECT_NEAR(mi, oracle_mi(a, c), 1e-9) << seed;
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, attribute_entropy(ds, 0) + 1e-12);
  }
}

TEST(DerivedInformation, CompositionalOracle) {
  const auto ds = categorical_dataset({{0, 1, 1, 0, 1, 0, 0, 1}, {0, 0, 1, 1, 1, 0, 1, 1}}, {0, 1, 1, 0, 1, 0, 1, 1});
  const double mean_h = (attribute_entropy(ds, 0) + attribute_entropy(ds, 1)) / 2;
  const double mean_mi = (mutual_information(ds, 0) + mutual_information(ds, 1)) / 2;
  const auto info = derived_information_features(ds);
  EXPECT_NEAR(*info.equivalent_number_of_attributes, class_entropy(ds) / mean_mi, 1e-12);
  EXPECT_NEAR(*info.noise_to_signal_ratio, (mean_h - mean_mi) / mean_mi, 1e-12);
}

TEST(Delta, DiscretizingOneOfFiveContinuousAttributes) {
  MetaFeatureVector before, after;
  before[MF::NumberOfContinuousAttributes] = 5;
  after[MF::NumberOfContinuousAttributes] = 4;
  before[MF::MeanKurtosisOfContinuousAttributes] = std::nullopt;
  after[MF::MeanKurtosisOfContinuousAttributes] = 1.5;
  const auto d = delta(before, after);
  EXPECT_EQ(*d[MF::NumberOfContinuousAttributes], -1);
  EXPECT_FALSE(d[MF::MeanKurtosisOfContinuousAttributes]);
}

TEST(DeltaProperty, SelfDeltaIsZero) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto v = compute_meta_features(random_dataset(seed, 25));
    const auto d = delta(v, v);
    for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
      EXPECT_EQ(d.at(i).has_value(), v.at(i).has_value());
      if (d.at(i)) EXPECT_EQ(*d.at(i), 0.0);
    }
  }
}

Dataset permute(const Dataset& ds, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& attr_order) {
  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> cols;
  std::size_t ci = 0;
  for (std::size_t a : attr_order) {
    if (a == ds.class_index()) ci = attrs.size();
    attrs.push_back(ds.attribute(a));
    std::vector<double> col;
    for (std::size_t r : rows) col.push_back(ds.value(r, a));
    cols.push_back(col);
  }
  return Dataset(ds.name(), attrs, ci, cols);
}

void expect_same_vector(const MetaFeatureVector& a, const MetaFeatureVector& b) {
  for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
    ASSERT_EQ(a.at(i).has_value(), b.at(i).has_value()) << kMetaFeatureNames[i];
    if (a.at(i)) EXPECT_NEAR(*a.at(i), *b.at(i), 1e-9 * (1 + std::abs(*a.at(i)))) << kMetaFeatureNames[i];
  }
}

TEST(MetaFeaturesProperty, RowAndColumnPermutationInvariance) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto ds = random_dataset(seed, 15 + seed, 3, 2, 0.1, 3);
    Rng rng(seed * 7);
    std::vector<std::size_t> rows(ds.num_rows()), cols(ds.num_attributes());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    rng.shuffle(rows);
    rng.shuffle(cols);
    expect_same_vector(compute_meta_features(ds), compute_meta_features(permute(ds, rows, cols)));
  }
}

TEST(MetaFeaturesProperty, RangesAndOrderings) {
  using MFV = MetaFeatureVector;
  auto check_order = [](const MFV& v, MF lo, MF mid, MF hi) {
    if (!v[lo]) return;
    EXPECT_LE(*v[lo], *v[mid] + 1e-12);
    EXPECT_LE(*v[mid], *v[hi] + 1e-12);
  };
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto v = compute_meta_features(random_dataset(seed, 10 + seed % 40, seed % 4, seed % 3 + 1, 0.1, 2 + seed % 3));
    for (MF p : {MF::PercentageOfContinuousAttributes, MF::PercentageOfCategoricalAttributes,
                 MF::PercentageOfBinaryAttributes, MF::PercentageOfMissingValues,
                 MF::PercentageOfInstancesWithMissingValues, MF::MinorityClassPercentage,
                 MF::MajorityClassPercentage}) {
      EXPECT_GE(*v[p], 0.0);
      EXPECT_LE(*v[p], 100.0);
    }
    EXPECT_GE(*v[MF::ClassEntropy], 0.0);
    for (MF f : {MF::MinMeansOfContinuousAttributes, MF::MinStdOfContinuousAttributes,
                 MF::MinKurtosisOfContinuousAttributes, MF::MinSkewnessOfContinuousAttributes}) {
      const auto i = static_cast<std::size_t>(f);
      check_order(v, f, static_cast<MF>(i + 4), static_cast<MF>(i + 8));
    }
    check_order(v, MF::MinAttributeEntropy, MF::MeanAttributeEntropy, MF::MaxAttributeEntropy);
    check_order(v, MF::MinMutualInformation, MF::MeanMutualInformation, MF::MaxMutualInformation);
    for (MF q1 : {MF::Quartile1MeansOfContinuousAttributes, MF::Quartile1StdOfContinuousAttributes,
                  MF::Quartile1KurtosisOfContinuousAttributes, MF::Quartile1SkewnessOfContinuousAttributes,
                  MF::Quartile1AttributeEntropy, MF::Quartile1MutualInformation}) {
      const auto i = static_cast<std::size_t>(q1);
      check_order(v, q1, static_cast<MF>(i + 1), static_cast<MF>(i + 2));
    }
    if (v[MF::MinAttributeEntropy]) EXPECT_GE(*v[MF::MinAttributeEntropy], 0.0);
  }
}

}  // namespace
}  // namespace metaprep

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "metaprep/evaluation.hpp"
#include "random_picker.hpp"

namespace metaprep {
namespace {

using RC = ResponseClass;

TransformationRecord item(double p, RC predicted, RC actual, double impact = 0.0, std::string spec = "") {
  return {std::move(spec), p, predicted, actual, impact};
}

DatasetEvalRecord record(std::vector<TransformationRecord> items, std::string name = "d") {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].spec.empty()) items[i].spec = "t" + std::to_string(i);
  return {std::move(name), std::move(items)};
}

RC random_class(Rng& rng) { return kClassOrder[rng.index(3)]; }

DatasetEvalRecord random_record(Rng& rng, std::size_t n, std::string name = "r") {
  std::vector<TransformationRecord> items;
  for (std::size_t i = 0; i < n; ++i) {
    const auto actual = random_class(rng);
    const double impact = actual == RC::Positive ? rng.uniform(0.01, 0.2) : actual == RC::Negative ? -rng.uniform(0.01, 0.2) : 0.0;
    items.push_back(item(std::round(rng.uniform() * 10) / 10, random_class(rng), actual, impact));
  }
  return record(std::move(items), std::move(name));
}

// ---------------------------------------------------------------------------

TEST(Confusion, AllPositiveDatasetFillsTruePositives) {
  const auto r = record({item(0.9, RC::Positive, RC::Positive), item(0.8, RC::Positive, RC::Positive),
                         item(0.7, RC::Positive, RC::Positive), item(0.6, RC::Positive, RC::Positive)});
  const auto m = triclass_confusion(r);
  EXPECT_DOUBLE_EQ(m.TP, 1.0);
  EXPECT_DOUBLE_EQ(m.sum(), 1.0);
}

TEST(Confusion, TwoDatasetsSumPerDatasetWeights) {
  const auto a = record({item(0.9, RC::Positive, RC::Positive), item(0.8, RC::Positive, RC::Positive)}, "a");
  const auto b = record({item(0.1, RC::Zero, RC::Zero), item(0.2, RC::Zero, RC::Zero)}, "b");
  const auto m = triclass_confusion(std::vector<DatasetEvalRecord>{a, b});
  EXPECT_DOUBLE_EQ(m.TP, 1.0);
  EXPECT_DOUBLE_EQ(m.T0, 1.0);
  EXPECT_DOUBLE_EQ(m.sum(), 2.0);
}

TEST(ConfusionProperty, MatchesBruteForceTally) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    std::vector<DatasetEvalRecord> recs;
    for (int d = 0; d < 5; ++d) recs.push_back(random_record(rng, 1 + rng.index(9)));
    double cell[3][3] = {};
    for (const auto& r : recs)
      for (const auto& t : r.items) cell[class_slot(t.predicted)][class_slot(t.actual)] += 1.0 / static_cast<double>(r.size());
    const auto m = triclass_confusion(recs);
    const double got[3][3] = {{m.TP, m.FP_N, m.FP_0}, {m.FN_P, m.TN, m.FN_0}, {m.F0_P, m.F0_N, m.T0}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(got[i][j], cell[i][j], 1e-12);
    for (const auto& r : recs) EXPECT_NEAR(triclass_confusion(r).sum(), 1.0, 1e-12);
  }
}

TEST(DatasetMeasures, FormulaExamples) {
  TriClassConfusion m;
  m.TP = 2, m.TN = 1, m.FN_P = 1, m.FP_N = 0;
  auto d = dataset_measures(m);
  EXPECT_DOUBLE_EQ(*d.pa, 0.75);
  EXPECT_DOUBLE_EQ(*d.pr, 0.75);
  EXPECT_DOUBLE_EQ(*d.overall_recall, 1.0);

  m.F0_P = 1, m.F0_N = 1;
  d = dataset_measures(m);
  EXPECT_NEAR(*d.overall_recall, 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(*d.g, 2 * 0.75 * (4.0 / 6) / (0.75 + 4.0 / 6), 1e-12);
  EXPECT_NEAR(*d.g, 0.7059, 1e-4);
}

TEST(DatasetMeasures, UndefinedTermsAreDropped) {
  TriClassConfusion m;
  m.TP = 1;
  m.FN_P = 1;  // no predicted negatives at all: TN / (TN + FN_P) is 0/1, TP / (TP + FP_N) is 1
  auto d = dataset_measures(m);
  EXPECT_EQ(d.pr_terms, 2u);
  TriClassConfusion only_pos;
  only_pos.TP = 1;
  d = dataset_measures(only_pos);
  EXPECT_EQ(d.pr_terms, 1u);
  EXPECT_DOUBLE_EQ(*d.pr, 1.0);
  TriClassConfusion zero;
  zero.T0 = 1;
  d = dataset_measures(zero);
  EXPECT_FALSE(d.pa.has_value());
  EXPECT_FALSE(d.pr.has_value());
}

TEST(CorpusMeasures, AllNeutralDatasetIsExcluded) {
  const auto neutral = record({item(0.1, RC::Zero, RC::Zero), item(0.2, RC::Zero, RC::Zero)}, "n");
  const auto good = record({item(0.9, RC::Positive, RC::Positive), item(0.1, RC::Negative, RC::Negative)}, "g");
  const auto c = corpus_measures({neutral, good});
  EXPECT_EQ(c.relevant, 1u);
  EXPECT_DOUBLE_EQ(c.pa, 1.0);
}

TEST(MeasuresProperty, RangesAndHarmonicBounds) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    const auto d = dataset_measures(random_record(rng, 1 + rng.index(12)));
    for (const auto& v : {d.pa, d.pr, d.overall_recall, d.g}) {
      if (!v) continue;
      EXPECT_GE(*v, 0.0);
      EXPECT_LE(*v, 1.0);
    }
    if (d.g) {
      EXPECT_LE(*d.g, std::max(*d.pa, *d.overall_recall) + 1e-12);
      EXPECT_GE(*d.g, std::min(*d.pa, *d.overall_recall) - 1e-12);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(Ordering, NoPredictedPositivesPutsRealPositivesFirst) {
  const auto r = record({item(0.1, RC::Zero, RC::Positive), item(0.9, RC::Zero, RC::Zero),
                         item(0.3, RC::Negative, RC::Positive), item(0.5, RC::Zero, RC::Negative)});
  EXPECT_EQ(evaluation_ordering(r), (std::vector<std::size_t>{2, 0, 1, 3}));
}

TEST(Ordering, PredictedPositivesFirstThenProbability) {
  const auto r = record({item(0.2, RC::Zero, RC::Positive), item(0.6, RC::Positive, RC::Zero),
                         item(0.7, RC::Positive, RC::Negative), item(0.9, RC::Zero, RC::Zero)});
  // y = 2 >= L = 1: no second segment.
  EXPECT_EQ(evaluation_ordering(r), (std::vector<std::size_t>{2, 1, 3, 0}));
}

TEST(OrderingProperty, SegmentsHoldTheirMembers) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    const auto r = random_record(rng, 1 + rng.index(12));
    const auto order = evaluation_ordering(r);
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
    const std::size_t y = r.predicted_positives(), L = r.real_positives();
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& t = r.items[order[i]];
      if (i < y) EXPECT_EQ(t.predicted, RC::Positive);
      else EXPECT_NE(t.predicted, RC::Positive);
      if (i >= y && i < L) EXPECT_EQ(t.actual, RC::Positive);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(LkMatrix, PerfectOrderingScoresOneEverywhere) {
  std::vector<DatasetEvalRecord> recs;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    auto r = random_record(rng, 2 + rng.index(10));
    for (auto& t : r.items) {
      t.predicted = t.actual;
      t.p_positive = t.actual == RC::Positive ? 0.9 : 0.1;
    }
    recs.push_back(r);
  }
  const auto m = lk_matrix(recs, 10);
  for (std::size_t L = 0; L <= m.max_l; ++L)
    for (std::size_t K = 1; K <= 10; ++K)
      if (m.at(L, K).count) EXPECT_EQ(m.at(L, K).accuracy, 1.0) << L << "," << K;
}

TEST(LkMatrix, InvertedOrderingScoresZeroUpToTheNonPositives) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    auto r = random_record(rng, 2 + rng.index(10));
    for (auto& t : r.items) {
      t.predicted = t.actual == RC::Positive ? RC::Negative : RC::Positive;
      t.p_positive = t.actual == RC::Positive ? 0.1 : 0.9;
    }
    const std::size_t T = r.size(), L = r.real_positives();
    const auto m = lk_matrix({r}, T);
    for (std::size_t K = 1; K <= T - L; ++K) EXPECT_EQ(m.at(L, K).accuracy, 0.0) << L << "," << K;
  }
}

TEST(LkMatrixProperty, CellsMatchPositionCounting) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Rng rng(seed);
    std::vector<DatasetEvalRecord> recs;
    for (int d = 0; d < 12; ++d) recs.push_back(random_record(rng, 1 + rng.index(8)));
    const std::size_t max_k = 6;
    const auto m = lk_matrix(recs, max_k);
    std::map<std::pair<std::size_t, std::size_t>, std::array<double, 3>> tally;  // hits, trials, count
    for (const auto& r : recs) {
      const auto order = evaluation_ordering(r);
      const std::size_t L = r.real_positives();
      for (std::size_t K = 1; K <= std::min(max_k, r.size()); ++K) {
        double hits = 0, trials = 0;
        for (std::size_t pos = 1; pos <= K; ++pos) {
          const auto& t = r.items[order[pos - 1]];
          const bool pp = t.predicted == RC::Positive, ap = t.actual == RC::Positive;
          if (K <= L) hits += pp && ap, trials += 1;
          else if (pos > L) hits += !pp && !ap, trials += 1;
        }
        auto& c = tally[{L, K}];
        c[0] += hits, c[1] += trials, c[2] += 1;
      }
    }
    std::vector<double> col_sum(max_k, 0), col_count(max_k, 0);
    for (const auto& [key, c] : tally) {
      const auto& cell = m.at(key.first, key.second);
      EXPECT_EQ(cell.count, static_cast<std::size_t>(c[2]));
      EXPECT_EQ(cell.hits, static_cast<std::size_t>(c[0]));
      EXPECT_EQ(cell.trials, static_cast<std::size_t>(c[1]));
      EXPECT_DOUBLE_EQ(cell.accuracy, c[0] / c[1]);
      col_sum[key.second - 1] += c[2] * c[0] / c[1];
      col_count[key.second - 1] += c[2];
    }
    for (std::size_t k = 0; k < max_k; ++k)
      if (col_count[k] > 0) EXPECT_NEAR(m.weighted_average[k], col_sum[k] / col_count[k], 1e-12);
  }
}

// ---------------------------------------------------------------------------

TEST(RandomPick, FormulaExamples) {
  EXPECT_NEAR(random_pick_probability(10, 2, 6, 0.4), 0.4, 1e-12);
  EXPECT_NEAR(random_pick_probability(10, 3, 5, 0.1), 0.42, 1e-12);
  const auto rp = random_pick(10, 3, 5, 0.1);
  EXPECT_DOUBLE_EQ(rp.mu_tp, 1.5);
  EXPECT_DOUBLE_EQ(rp.mu_tnp, 3.5);
  EXPECT_THROW(random_pick_probability(5, 6, 1, 0.5), ArgumentError);
  EXPECT_THROW(random_pick_probability(5, 2, 6, 0.5), ArgumentError);
  EXPECT_THROW(random_pick_probability(5, 2, 0, 0.5), ArgumentError);
  EXPECT_THROW(random_pick_probability(5, 2, 1, 1.5), ArgumentError);
}

TEST(RandomPickProperty, RangeAndFirstPosition) {
  for (std::size_t T = 1; T <= 15; ++T)
    for (std::size_t L = 0; L <= T; ++L)
      for (std::size_t K = 1; K <= T; ++K)
        for (double rate : {0.0, 0.05, 0.2, 0.5, 0.77, 1.0}) {
          const double p = random_pick_probability(T, L, K, rate);
          EXPECT_GE(p, -1e-12);
          EXPECT_LE(p, 1.0 + 1e-12);
          if (K == 1 && T * rate >= 1.0) EXPECT_NEAR(p, static_cast<double>(L) / T, 1e-12);
        }
}

TEST(RandomPickProperty, AgreesWithSimulatedPicker) {
  const std::vector<std::array<double, 4>> grid = {
      {10, 2, 6, 0.4}, {10, 3, 5, 0.1}, {8, 0, 4, 0.3}, {6, 6, 3, 0.5}, {12, 4, 9, 0.25}, {5, 1, 5, 0.9}};
  for (const auto& g : grid) {
    const auto T = static_cast<std::size_t>(g[0]), L = static_cast<std::size_t>(g[1]), K = static_cast<std::size_t>(g[2]);
    EXPECT_NEAR(testing::simulate_random_pick(T, L, K, g[3], 20000, 5), random_pick_probability(T, L, K, g[3]), 0.015)
        << T << " " << L << " " << K << " " << g[3];
  }
}

TEST(Binomial, ExactTails) {
  EXPECT_NEAR(binomial_significance(10, 10, 0.5), std::pow(2.0, -10), 1e-15);
  EXPECT_LT(binomial_significance(10, 10, 0.5), kSignificanceLevel);
  EXPECT_EQ(binomial_significance(0, 10, 0.3), 1.0);
  long double sum = 0, c = 1;  // C(50, i) built incrementally
  for (int i = 0; i <= 50; ++i) {
    if (i >= 37) sum += c;
    c = c * (50 - i) / (i + 1);
  }
  const long double expected = sum / std::pow(2.0L, 50);
  EXPECT_NEAR(binomial_significance(37, 50, 0.5), static_cast<double>(expected), 1e-12);
  EXPECT_THROW(binomial_significance(5, 4, 0.5), ArgumentError);
}

// ---------------------------------------------------------------------------

TEST(Dcg, FormulaExamples) {
  EXPECT_NEAR(dcg({1, 0.5, 0}), 1 + 0.5 / std::log2(3.0), 1e-12);
  EXPECT_NEAR(dcg({1, 0.5, 0}), 1.31546, 1e-5);
  EXPECT_EQ(dcg({}), 0.0);
  EXPECT_NEAR(dcg({3, 2, 1}), 4.76186, 1e-5);
}

TEST(DcgProperty, LinearInGains) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    std::vector<double> g(1 + rng.index(10));
    for (double& x : g) x = rng.normal();
    const double a = rng.uniform(-3, 3);
    auto scaled = g;
    for (double& x : scaled) x *= a;
    EXPECT_NEAR(dcg(scaled), a * dcg(g), 1e-9);
  }
}

TEST(Ndcg, BestAndWorstOrderings) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    std::vector<double> g(2 + rng.index(10));
    for (double& x : g) x = std::round(rng.normal() * 4) / 4;
    if (std::all_of(g.begin(), g.end(), [&](double x) { return x == g[0]; })) g[0] += 1;
    std::sort(g.begin(), g.end(), std::greater<>());
    EXPECT_NEAR(*ndcg_of_gains(g), 1.0, 1e-12);
    std::sort(g.begin(), g.end());
    EXPECT_NEAR(*ndcg_of_gains(g), 0.0, 1e-12);
  }
  EXPECT_FALSE(ndcg_of_gains({0.1, 0.1, 0.1}).has_value());
}

TEST(NdcgProperty, NormalizationMatchesExhaustivePermutations) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    std::vector<double> g(5);
    for (double& x : g) x = rng.normal();
    auto perm = g;
    std::sort(perm.begin(), perm.end());
    double lo = INFINITY, hi = -INFINITY;
    int n = 0;
    do {
      lo = std::min(lo, dcg(perm));
      hi = std::max(hi, dcg(perm));
      ++n;
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(n, 120);
    EXPECT_NEAR(*ndcg_of_gains(g), (dcg(g) - lo) / (hi - lo), 1e-12);
  }
}

TEST(Ndcg, ProductionRankingFollowsProbability) {
  const auto r = record({item(0.2, RC::Zero, RC::Positive, 0.3), item(0.9, RC::Positive, RC::Negative, -0.1),
                         item(0.5, RC::Zero, RC::Zero, 0.0)});
  EXPECT_EQ(production_gains(r), (std::vector<double>{-0.1, 0.0, 0.3}));
  EXPECT_NEAR(*ndcg(r), 0.0, 1e-12);
  EXPECT_NEAR(*ndcg(r, 1), 0.0, 1e-12);
  const auto top = gain_scores({0.3, -0.1, 0.0}, 1);
  EXPECT_DOUBLE_EQ(top.best, 0.3);
  EXPECT_DOUBLE_EQ(top.worst, -0.1);
}

// ---------------------------------------------------------------------------

TEST(ImpactDistribution, DistanceFromUniform) {
  EXPECT_NEAR(distance_from_uniform(10, 10, 80), 57.15, 0.01);
  EXPECT_NEAR(distance_from_uniform(45, 25, 30), 14.73, 0.005);
  double last = 0;
  for (double e : {0.5, 1.0, 2.0, 4.0}) {
    const double d = distance_from_uniform(33 + e, 33 - e, 33);
    EXPECT_GT(d, last);
    last = d;
  }
  EXPECT_NEAR(distance_from_uniform(34, 32, 33), std::sqrt(2.0), 1e-12);
}

TEST(ImpactDistribution, GroupsAndColours) {
  MetaDatabase db;
  db.algorithm = "tree";
  auto row = [](const char* t, RC c) { return MetaInstance{.dataset = "d", .transformation = t, .response_class = c}; };
  db.rows = {row("normalize(global)", RC::Zero), row("standardize(global)", RC::Zero),
             row("discretize_sup(attr=0)", RC::Positive), row("discretize_sup(attr=1)", RC::Negative)};
  const auto total = impact_distribution(db, ImpactGrouping::AlgorithmTotal);
  ASSERT_EQ(total.size(), 1u);
  EXPECT_EQ(total[0].group, "tree");
  EXPECT_DOUBLE_EQ(total[0].zero, 50.0);
  EXPECT_EQ(total[0].rgb, (std::array<int, 3>{64, 64, 128}));
  const auto by_kind = impact_distribution(db, ImpactGrouping::TransformationKind);
  ASSERT_EQ(by_kind.size(), 3u);
  for (const auto& d : by_kind) {
    EXPECT_NEAR(d.positive + d.negative + d.zero, 100.0, 1e-9);
    if (d.group == "normalize") EXPECT_DOUBLE_EQ(d.zero, 100.0);
  }
  EXPECT_THROW(impact_distribution(MetaDatabase{}, ImpactGrouping::AlgorithmTotal), ArgumentError);
}

}  // namespace
}  // namespace metaprep

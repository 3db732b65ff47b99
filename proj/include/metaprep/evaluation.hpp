#pragma once

// Measuring recommendation quality: tri-class confusion accounting, the
// per-dataset PA/Pr/OR/G measures, top-K accuracy matrices against a random
// picker baseline with a binomial test, DCG/nDCG and impact distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/transforms.hpp"

namespace metaprep {

struct TransformationRecord {
  std::string spec;  // canonical text
  double p_positive = 0.0;
  ResponseClass predicted = ResponseClass::Zero;
  ResponseClass actual = ResponseClass::Zero;
  double impact = 0.0;  // real response value
};

struct DatasetEvalRecord {
  std::string dataset;
  std::vector<TransformationRecord> items;

  std::size_t size() const { return items.size(); }
  // L: real positives.
  std::size_t real_positives() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const auto& t) {
      return t.actual == ResponseClass::Positive;
    }));
  }
  // y: predicted positives.
  std::size_t predicted_positives() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const auto& t) {
      return t.predicted == ResponseClass::Positive;
    }));
  }
  // At least one transformation really changed performance.
  bool relevant() const {
    return std::any_of(items.begin(), items.end(), [](const auto& t) { return t.actual != ResponseClass::Zero; });
  }
};

inline std::vector<DatasetEvalRecord> records_from(const LoovReport& report) {
  std::vector<DatasetEvalRecord> out;
  for (const auto& fold : report.folds) {
    DatasetEvalRecord rec;
    rec.dataset = fold.dataset;
    for (const auto& p : fold.predictions) {
      rec.items.push_back({p.transformation, p.probabilities.positive, p.predicted, p.actual, p.response_value});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tri-class confusion.

// Cell names: first letter(s) give the prediction, the suffix the reality.
struct TriClassConfusion {
  double TP = 0, FP_N = 0, FP_0 = 0;  // predicted positive
  double FN_P = 0, TN = 0, FN_0 = 0;  // predicted negative
  double F0_P = 0, F0_N = 0, T0 = 0;  // predicted zero

  double& cell(ResponseClass predicted, ResponseClass actual) {
    static constexpr std::array<std::array<double TriClassConfusion::*, 3>, 3> map = {{
        {&TriClassConfusion::TP, &TriClassConfusion::FP_N, &TriClassConfusion::FP_0},
        {&TriClassConfusion::FN_P, &TriClassConfusion::TN, &TriClassConfusion::FN_0},
        {&TriClassConfusion::F0_P, &TriClassConfusion::F0_N, &TriClassConfusion::T0},
    }};
    return this->*map[class_slot(predicted)][class_slot(actual)];
  }

  double sum() const { return TP + FP_N + FP_0 + FN_P + TN + FN_0 + F0_P + F0_N + T0; }

  TriClassConfusion& operator+=(const TriClassConfusion& o) {
    TP += o.TP, FP_N += o.FP_N, FP_0 += o.FP_0;
    FN_P += o.FN_P, TN += o.TN, FN_0 += o.FN_0;
    F0_P += o.F0_P, F0_N += o.F0_N, T0 += o.T0;
    return *this;
  }
};

// Each transformation of dataset d adds w = 1/|T_d| to its cell.
inline TriClassConfusion triclass_confusion(const DatasetEvalRecord& record) {
  TriClassConfusion m;
  if (record.items.empty()) return m;
  const double w = 1.0 / static_cast<double>(record.items.size());
  for (const auto& t : record.items) m.cell(t.predicted, t.actual) += w;
  return m;
}

inline TriClassConfusion triclass_confusion(const std::vector<DatasetEvalRecord>& records) {
  TriClassConfusion m;
  for (const auto& r : records) m += triclass_confusion(r);
  return m;
}

struct DatasetMeasures {
  std::optional<double> pa;  // predictive accuracy
  std::optional<double> pr;  // precision
  std::optional<double> overall_recall;
  std::optional<double> g;
  std::size_t pr_terms = 0;  // how many of Pr's two terms were defined
};

// A term whose denominator is zero is dropped from Pr's average.
inline DatasetMeasures dataset_measures(const TriClassConfusion& m) {
  DatasetMeasures out;
  const double inner = m.TP + m.FN_P + m.FP_N + m.TN;
  if (inner > 0.0) out.pa = (m.TP + m.TN) / inner;
  double pr_sum = 0.0;
  if (m.TP + m.FP_N > 0.0) {
    pr_sum += m.TP / (m.TP + m.FP_N);
    ++out.pr_terms;
  }
  if (m.TN + m.FN_P > 0.0) {
    pr_sum += m.TN / (m.TN + m.FN_P);
    ++out.pr_terms;
  }
  if (out.pr_terms > 0) out.pr = pr_sum / static_cast<double>(out.pr_terms);
  const double outer = inner + m.F0_P + m.F0_N;
  if (outer > 0.0) out.overall_recall = inner / outer;
  if (out.pa && out.overall_recall) {
    const double s = *out.pa + *out.overall_recall;
    out.g = s > 0.0 ? 2.0 * *out.pa * *out.overall_recall / s : 0.0;
  }
  return out;
}

inline DatasetMeasures dataset_measures(const DatasetEvalRecord& record) {
  return dataset_measures(triclass_confusion(record));
}

struct CorpusMeasures {
  double pa = 0.0, pr = 0.0, overall_recall = 0.0, g = 0.0;
  std::size_t pa_count = 0, pr_count = 0, or_count = 0, g_count = 0;
  std::size_t relevant = 0;        // datasets with a real non-zero impact
  std::size_t pr_dropped_terms = 0;
};

// Means over relevant datasets for which each measure is defined.
inline CorpusMeasures corpus_measures(const std::vector<DatasetEvalRecord>& records) {
  CorpusMeasures c;
  for (const auto& r : records) {
    if (!r.relevant()) continue;
    ++c.relevant;
    const auto m = dataset_measures(r);
    if (m.pa) c.pa += *m.pa, ++c.pa_count;
    if (m.pr) c.pr += *m.pr, ++c.pr_count;
    if (m.overall_recall) c.overall_recall += *m.overall_recall, ++c.or_count;
    if (m.g) c.g += *m.g, ++c.g_count;
    c.pr_dropped_terms += 2 - m.pr_terms;
  }
  if (c.pa_count) c.pa /= static_cast<double>(c.pa_count);
  if (c.pr_count) c.pr /= static_cast<double>(c.pr_count);
  if (c.or_count) c.overall_recall /= static_cast<double>(c.or_count);
  if (c.g_count) c.g /= static_cast<double>(c.g_count);
  return c;
}

// ---------------------------------------------------------------------------
// Ordering used for top-K accounting.

// Segment 1: predicted positives. Segment 2: remaining real positives, only
// while the list is shorter than L. Segment 3: everything else. Each segment
// is sorted by p_positive descending, ties by spec text.
inline std::vector<std::size_t> evaluation_ordering(const DatasetEvalRecord& record) {
  const auto& items = record.items;
  auto by_probability = [&](std::vector<std::size_t>& idx) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (items[a].p_positive != items[b].p_positive) return items[a].p_positive > items[b].p_positive;
      return items[a].spec < items[b].spec;
    });
  };
  std::vector<std::size_t> seg1, real_rest, rest;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].predicted == ResponseClass::Positive) seg1.push_back(i);
    else if (items[i].actual == ResponseClass::Positive) real_rest.push_back(i);
    else rest.push_back(i);
  }
  by_probability(seg1);
  by_probability(real_rest);
  const std::size_t L = record.real_positives();
  std::vector<std::size_t> order = seg1;
  std::size_t taken = 0;
  while (order.size() < L && taken < real_rest.size()) order.push_back(real_rest[taken++]);
  rest.insert(rest.end(), real_rest.begin() + static_cast<std::ptrdiff_t>(taken), real_rest.end());
  by_probability(rest);
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

// Hits counted for one dataset at cut-off K: predicted and real positives
// among positions 1..K when K <= L, otherwise predicted and real
// non-positives among positions L+1..K.
inline std::size_t top_k_hits(const DatasetEvalRecord& record, const std::vector<std::size_t>& order, std::size_t K) {
  const std::size_t L = record.real_positives();
  std::size_t hits = 0;
  if (K <= L) {
    for (std::size_t i = 0; i < K; ++i) {
      const auto& t = record.items[order[i]];
      hits += t.predicted == ResponseClass::Positive && t.actual == ResponseClass::Positive;
    }
  } else {
    for (std::size_t i = L; i < K; ++i) {
      const auto& t = record.items[order[i]];
      hits += t.predicted != ResponseClass::Positive && t.actual != ResponseClass::Positive;
    }
  }
  return hits;
}

struct LKCell {
  std::size_t count = 0;       // datasets with exactly L real positives and at least K transformations
  std::size_t hits = 0;
  std::size_t trials = 0;      // count * K, or count * (K - L) above the diagonal
  double accuracy = 0.0;       // hits / trials
  double mean_ratio = 0.0;     // mean of per-dataset ratios
  double random_baseline = 0.0;  // mean random-pick probability of the datasets in the cell
};

struct LKMatrix {
  std::size_t max_l = 0;
  std::size_t max_k = 0;
  std::vector<std::vector<LKCell>> cells;  // [L][K-1]
  std::vector<double> weighted_average;    // per K, cells weighted by count
  std::vector<double> weighted_random;     // per K
  std::vector<std::size_t> column_count;   // per K
  double positive_rate = 0.0;

  const LKCell& at(std::size_t L, std::size_t K) const { return cells.at(L).at(K - 1); }
};

// ---------------------------------------------------------------------------
// Random picker baseline.

struct RandomPick {
  double probability = 0.0;
  double mu_tp = 0.0;   // K L / T
  double mu_tnp = 0.0;  // K (T - L) / T
};

inline RandomPick random_pick(std::size_t T, std::size_t L, std::size_t K, double rate) {
  if (T == 0 || L > T || K < 1 || K > T) throw ArgumentError("random_pick_probability needs 0 <= L <= T and 1 <= K <= T");
  if (!(rate >= 0.0 && rate <= 1.0)) throw ArgumentError("rate must lie in [0, 1]");
  const double t = static_cast<double>(T), l = static_cast<double>(L), k = static_cast<double>(K);
  const double y = t * rate;
  double p = 0.0;
  if (y >= l) {
    p = (std::min(k, y) * l / t + std::max(0.0, k - y) * (t - l) / t) / k;
  } else {
    p = std::min(k, y) * l / t;
    if (K > L) p += (k - l) * ((t - l) - ((t - l) / t) * y) / (t - l);
    p /= k;
  }
  return {p, k * l / t, k * (t - l) / t};
}

inline double random_pick_probability(std::size_t T, std::size_t L, std::size_t K, double rate) {
  return random_pick(T, L, K, rate).probability;
}

// Upper tail P(X >= successes) for X ~ Binomial(trials, p0), summed in log space.
inline double binomial_significance(std::size_t successes, std::size_t trials, double p0) {
  if (successes > trials) throw ArgumentError("successes exceed trials");
  if (successes == 0) return 1.0;
  if (p0 <= 0.0) return 0.0;
  if (p0 >= 1.0) return 1.0;
  const double n = static_cast<double>(trials);
  const double lp = std::log(p0), lq = std::log1p(-p0);
  std::vector<double> terms;
  for (std::size_t i = successes; i <= trials; ++i) {
    const double x = static_cast<double>(i);
    terms.push_back(std::lgamma(n + 1) - std::lgamma(x + 1) - std::lgamma(n - x + 1) + x * lp + (n - x) * lq);
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return std::min(1.0, std::exp(top + std::log(s)));
}

inline constexpr double kSignificanceLevel = 0.001;

// Fraction of all transformations that are real positives.
inline double positive_rate(const std::vector<DatasetEvalRecord>& records) {
  std::size_t pos = 0, total = 0;
  for (const auto& r : records) {
    pos += r.real_positives();
    total += r.size();
  }
  return total ? static_cast<double>(pos) / static_cast<double>(total) : 0.0;
}

inline LKMatrix lk_matrix(const std::vector<DatasetEvalRecord>& records, std::size_t max_k) {
  LKMatrix m;
  m.max_k = max_k;
  m.positive_rate = positive_rate(records);
  for (const auto& r : records) m.max_l = std::max(m.max_l, r.real_positives());
  m.cells.assign(m.max_l + 1, std::vector<LKCell>(max_k));
  std::vector<std::vector<double>> ratio_sum(m.max_l + 1, std::vector<double>(max_k, 0.0));
  std::vector<std::vector<double>> random_sum(m.max_l + 1, std::vector<double>(max_k, 0.0));
  for (const auto& r : records) {
    const std::size_t T = r.size(), L = r.real_positives();
    const auto order = evaluation_ordering(r);
    for (std::size_t K = 1; K <= std::min(max_k, T); ++K) {
      auto& cell = m.cells[L][K - 1];
      const std::size_t hits = top_k_hits(r, order, K);
      const std::size_t trials = K <= L ? K : K - L;
      ++cell.count;
      cell.hits += hits;
      cell.trials += trials;
      ratio_sum[L][K - 1] += static_cast<double>(hits) / static_cast<double>(trials);
      random_sum[L][K - 1] += random_pick_probability(T, L, K, m.positive_rate);
    }
  }
  m.weighted_average.assign(max_k, 0.0);
  m.weighted_random.assign(max_k, 0.0);
  m.column_count.assign(max_k, 0);
  for (std::size_t L = 0; L <= m.max_l; ++L) {
    for (std::size_t k = 0; k < max_k; ++k) {
      auto& cell = m.cells[L][k];
      if (cell.count == 0) continue;
      cell.accuracy = static_cast<double>(cell.hits) / static_cast<double>(cell.trials);
      cell.mean_ratio = ratio_sum[L][k] / static_cast<double>(cell.count);
      cell.random_baseline = random_sum[L][k] / static_cast<double>(cell.count);
      m.weighted_average[k] += static_cast<double>(cell.count) * cell.accuracy;
      m.weighted_random[k] += static_cast<double>(cell.count) * cell.random_baseline;
      m.column_count[k] += cell.count;
    }
  }
  for (std::size_t k = 0; k < max_k; ++k) {
    if (m.column_count[k]) {
      m.weighted_average[k] /= static_cast<double>(m.column_count[k]);
      m.weighted_random[k] /= static_cast<double>(m.column_count[k]);
    }
  }
  return m;
}

// p-value of each populated cell's hit count against its random baseline.
inline std::vector<std::vector<std::optional<double>>> significance_matrix(const LKMatrix& m) {
  std::vector<std::vector<std::optional<double>>> out(m.max_l + 1, std::vector<std::optional<double>>(m.max_k));
  for (std::size_t L = 0; L <= m.max_l; ++L) {
    for (std::size_t k = 0; k < m.max_k; ++k) {
      const auto& cell = m.cells[L][k];
      if (cell.count) out[L][k] = binomial_significance(cell.hits, cell.trials, cell.random_baseline);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discounted cumulative gain.

inline double dcg(const std::vector<double>& gains_in_rank_order) {
  double s = 0.0;
  for (std::size_t i = 0; i < gains_in_rank_order.size(); ++i) {
    s += gains_in_rank_order[i] / std::log2(static_cast<double>(i) + 2.0);
  }
  return s;
}

struct GainScores {
  double recommended = 0.0;
  double best = 0.0;
  double worst = 0.0;
  std::optional<double> ndcg;  // nullopt when best == worst
};

// `gains` in the order being scored; best/worst are the same gains sorted
// descending/ascending. With top_k, every ordering is cut to k positions.
inline GainScores gain_scores(const std::vector<double>& gains, std::optional<std::size_t> top_k = std::nullopt) {
  auto cut = [&](std::vector<double> g) {
    if (top_k && g.size() > *top_k) g.resize(*top_k);
    return g;
  };
  auto best = gains, worst = gains;
  std::sort(best.begin(), best.end(), std::greater<>());
  std::sort(worst.begin(), worst.end());
  GainScores s;
  s.recommended = dcg(cut(gains));
  s.best = dcg(cut(best));
  s.worst = dcg(cut(worst));
  if (s.best > s.worst) s.ndcg = std::clamp((s.recommended - s.worst) / (s.best - s.worst), 0.0, 1.0);
  return s;
}

inline std::optional<double> ndcg_of_gains(const std::vector<double>& gains, std::optional<std::size_t> top_k = std::nullopt) {
  return gain_scores(gains, top_k).ndcg;
}

// Production ranking: p_positive descending, ties by spec text. Gains are the
// real impact values.
inline std::vector<double> production_gains(const DatasetEvalRecord& record) {
  std::vector<std::size_t> idx(record.items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = record.items[a];
    const auto& y = record.items[b];
    if (x.p_positive != y.p_positive) return x.p_positive > y.p_positive;
    return x.spec < y.spec;
  });
  std::vector<double> gains;
  for (std::size_t i : idx) gains.push_back(record.items[i].impact);
  return gains;
}

// nullopt for datasets whose transformations are all neutral or whose gains
// are all equal.
inline std::optional<double> ndcg(const DatasetEvalRecord& record, std::optional<std::size_t> top_k = std::nullopt) {
  if (!record.relevant()) return std::nullopt;
  return ndcg_of_gains(production_gains(record), top_k);
}

struct DatasetGain {
  std::string dataset;
  GainScores all;
  GainScores top1;
};

struct GainReport {
  std::vector<DatasetGain> datasets;  // relevant datasets only
  double mean_ndcg = 0.0;
  double mean_ndcg_top1 = 0.0;
  std::size_t count = 0;
  std::size_t count_top1 = 0;
};

inline GainReport gain_report(const std::vector<DatasetEvalRecord>& records) {
  GainReport g;
  for (const auto& r : records) {
    if (!r.relevant()) continue;
    const auto gains = production_gains(r);
    DatasetGain d{r.dataset, gain_scores(gains), gain_scores(gains, 1)};
    if (d.all.ndcg) g.mean_ndcg += *d.all.ndcg, ++g.count;
    if (d.top1.ndcg) g.mean_ndcg_top1 += *d.top1.ndcg, ++g.count_top1;
    g.datasets.push_back(std::move(d));
  }
  if (g.count) g.mean_ndcg /= static_cast<double>(g.count);
  if (g.count_top1) g.mean_ndcg_top1 /= static_cast<double>(g.count_top1);
  return g;
}

// ---------------------------------------------------------------------------
// Impact distributions.

struct ImpactDistribution {
  std::string group;
  std::size_t count = 0;
  double positive = 0.0;  // percentages
  double negative = 0.0;
  double zero = 0.0;
  double distance = 0.0;  // from the uniform triple (33, 33, 33)
  std::array<int, 3> rgb{};  // red = negative, green = positive, blue = zero
};

inline double distance_from_uniform(double positive, double negative, double zero) {
  const double a = positive - 33.0, b = negative - 33.0, c = zero - 33.0;
  return std::sqrt(a * a + b * b + c * c);
}

inline ImpactDistribution make_distribution(std::string group, std::size_t pos, std::size_t neg, std::size_t zero) {
  ImpactDistribution d;
  d.group = std::move(group);
  d.count = pos + neg + zero;
  if (d.count == 0) throw ArgumentError("empty impact group '" + d.group + "'");
  const double n = static_cast<double>(d.count);
  d.positive = 100.0 * static_cast<double>(pos) / n;
  d.negative = 100.0 * static_cast<double>(neg) / n;
  d.zero = 100.0 * static_cast<double>(zero) / n;
  d.distance = distance_from_uniform(d.positive, d.negative, d.zero);
  auto channel = [](double pct) { return static_cast<int>(std::lround(pct * 255.0 / 100.0)); };
  d.rgb = {channel(d.negative), channel(d.positive), channel(d.zero)};
  return d;
}

enum class ImpactGrouping { AlgorithmTotal, TransformationKind };

inline std::vector<ImpactDistribution> impact_distribution(const MetaDatabase& db, ImpactGrouping grouping) {
  if (db.rows.empty()) throw ArgumentError("empty meta-database");
  std::map<std::size_t, std::array<std::size_t, 3>> counts;
  for (const auto& r : db.rows) {
    std::size_t key = 0;
    if (grouping == ImpactGrouping::TransformationKind) {
      key = static_cast<std::size_t>(TransformationSpec::parse(r.transformation).kind());
    }
    ++counts[key][class_slot(r.response_class)];
  }
  std::vector<ImpactDistribution> out;
  for (const auto& [key, c] : counts) {
    const std::string group = grouping == ImpactGrouping::AlgorithmTotal
                                  ? db.algorithm
                                  : std::string(to_string(static_cast<TransformKind>(key)));
    out.push_back(make_distribution(group, c[0], c[1], c[2]));
  }
  return out;
}

}  // namespace metaprep

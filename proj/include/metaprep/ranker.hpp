#pragma once

// Recommendation at use time: enumerate candidate transformations, drop the
// ones excluded by expert rules, score the rest with a trained forest and
// rank them by the probability of a positive impact.
//
// Rules file: one rule per line,
//
//   exclude <algorithm|any> <transformation-kind>   # optional note
//
// where <algorithm> is tree, nb, knn (every k), knn:k or logistic and
// <transformation-kind> is a kind name such as normalize.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metaprep/classifiers.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/transforms.hpp"

namespace metaprep {

struct ExpertRule {
  std::optional<ClassifierFamily> family;  // nullopt: any algorithm
  std::optional<std::size_t> k;            // KNearest with one k only
  TransformKind kind = TransformKind::Normalize;
  std::string note;

  bool matches(const ClassifierKind& algorithm, TransformKind candidate) const {
    if (candidate != kind) return false;
    if (!family) return true;
    if (*family != algorithm.family) return false;
    return !k || *k == algorithm.k;
  }
};

inline std::vector<ExpertRule> default_rules() {
  const std::string note = "normalization and standardization do not change this learner's performance";
  std::vector<ExpertRule> rules;
  for (auto fam : {ClassifierFamily::KNearest, ClassifierFamily::LogisticRegression, ClassifierFamily::DecisionTree}) {
    for (auto kind : {TransformKind::Standardize, TransformKind::Normalize}) rules.push_back({fam, std::nullopt, kind, note});
  }
  return rules;
}

inline std::vector<ExpertRule> parse_rules(std::istream& in) {
  std::vector<ExpertRule> rules;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string note;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      note = std::string(trim(std::string_view(raw).substr(hash + 1)));
      raw.resize(hash);
    }
    std::istringstream words(raw);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw FormatError("rules line " + std::to_string(line_no) + ": " + what);
    };
    if (tok.size() != 3 || tok[0] != "exclude") fail("expected 'exclude <algorithm|any> <transformation-kind>'");
    ExpertRule rule;
    rule.note = note;
    if (tok[1] != "any") {
      try {
        const auto algo = ClassifierKind::parse(tok[1]);
        rule.family = algo.family;
        if (algo.family == ClassifierFamily::KNearest && tok[1] != "knn") rule.k = algo.k;
      } catch (const ArgumentError& e) {
        fail(e.what());
      }
    }
    const auto kind = transform_kind_from_string(tok[2]);
    if (!kind) fail("unknown transformation kind '" + tok[2] + "'");
    rule.kind = *kind;
    rules.push_back(std::move(rule));
  }
  return rules;
}

inline std::vector<ExpertRule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read rules file '" + path + "'");
  return parse_rules(in);
}

// Candidates matched by no rule, in their original order.
inline std::vector<TransformationSpec> prune(const std::vector<ExpertRule>& rules, const ClassifierKind& algorithm,
                                             const std::vector<TransformationSpec>& candidates) {
  std::vector<TransformationSpec> out;
  for (const auto& c : candidates) {
    const bool excluded =
        std::any_of(rules.begin(), rules.end(), [&](const ExpertRule& r) { return r.matches(algorithm, c.kind()); });
    if (!excluded) out.push_back(c);
  }
  return out;
}

struct Recommendation {
  std::size_t rank = 0;
  TransformationSpec spec;
  ClassProbabilities probabilities;
  ResponseClass predicted = ResponseClass::Zero;
};

struct RankOptions {
  std::uint64_t seed = 42;
  std::size_t folds = kDefaultFolds;
  Measure measure = Measure::Accuracy;
};

// One cross-validation run (the base performance); candidates are scored
// from meta-features alone.
inline std::vector<Recommendation> rank_transformations(const ForestModel& model, const std::vector<ExpertRule>& rules,
                                                        const ClassifierKind& algorithm, const Classifier& clf,
                                                        const Dataset& ds, const RankOptions& options) {
  if (model.algorithm != algorithm.to_string()) {
    throw SchemaError("model was trained for '" + model.algorithm + "', not '" + algorithm.to_string() + "'");
  }
  auto ids = learner_feature_ids();
  {
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != model.feature_ids) throw SchemaError("model feature set does not match this version's meta-features");
  }
  const auto base_features = compute_meta_features(ds);
  const std::size_t k = std::min(options.folds, ds.num_rows());
  const double base_perf = cross_validate(clf, ds, k, options.seed).measures.get(options.measure);
  const auto candidates = prune(rules, algorithm, enumerate_applicable(ds));

  std::vector<Recommendation> recs;
  recs.reserve(candidates.size());
  const auto base_part = modifiable_part(base_features);
  for (const auto& spec : candidates) {
    const auto transformed = apply(spec, ds);
    const auto deltas = modifiable_part(delta(base_features, compute_meta_features(transformed.dataset)));
    const auto p = model.predict_proba(ids, learner_features(base_part, deltas, base_perf));
    recs.push_back({0, spec, p, p.predicted()});
  }
  std::vector<std::string> text(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) text[i] = recs[i].spec.to_string();
  std::vector<std::size_t> order(recs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (recs[a].probabilities.positive != recs[b].probabilities.positive) {
      return recs[a].probabilities.positive > recs[b].probabilities.positive;
    }
    return text[a] < text[b];
  });
  std::vector<Recommendation> out;
  out.reserve(recs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.push_back(recs[order[i]]);
    out.back().rank = i + 1;
  }
  return out;
}

// Tab-separated table: rank, spec, p_pos, p_neg, p_zero, predicted_class.
inline std::string format_recommendations(const std::vector<Recommendation>& recs, std::size_t top = 0) {
  std::ostringstream out;
  out << "rank\tspec\tp_pos\tp_neg\tp_zero\tpredicted_class\n";
  const std::size_t n = top == 0 ? recs.size() : std::min(top, recs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = recs[i];
    out << r.rank << '\t' << r.spec.to_string() << '\t' << format_double(r.probabilities.positive) << '\t'
        << format_double(r.probabilities.negative) << '\t' << format_double(r.probabilities.zero) << '\t'
        << to_string(r.predicted) << '\n';
  }
  return out.str();
}

}  // namespace metaprep

#pragma once

// Command implementations behind the metaprep executable. Each command takes
// fully resolved options, writes its files, prints to the given streams and
// returns the process exit code. Library errors propagate as exceptions.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "metaprep/classifiers.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/openml.hpp"
#include "metaprep/ranker.hpp"
#include "metaprep/report.hpp"

namespace metaprep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 3;  // finished, but some datasets failed

struct Options {
  std::string datasets;                 // manifest path
  std::vector<std::string> algorithms = {"tree"};
  std::string measure = "acc";
  std::uint64_t seed = 42;
  std::size_t jobs = 1;                 // never part of the run config
  std::size_t top = 0;                  // 0: all
  std::string rules;                    // empty: built-in rules
  std::string out;
  std::optional<std::string> cache;
  bool allow_partial = false;
  std::string metadb;
  std::string model;
  std::size_t trees = 100;
  std::string dataset;
  std::size_t folds = kDefaultFolds;
  std::size_t max_k = 10;
};

inline void print_seed(std::ostream& err, std::uint64_t seed) { err << "seed: " << seed << '\n'; }

inline int report_failures(const std::vector<std::pair<std::string, std::string>>& failures, bool allow_partial,
                           std::ostream& err) {
  for (const auto& [what, why] : failures) err << "failed: " << what << ": " << why << '\n';
  if (failures.empty()) return kExitOk;
  err << failures.size() << " dataset failure(s)" << (allow_partial ? " (allowed)" : "") << '\n';
  return allow_partial ? kExitOk : kExitPartial;
}

// `featurize`: one "name<TAB>value" line per meta-feature; NA when the
// feature does not apply.
inline int cmd_featurize(const std::string& path, std::ostream& out) {
  const auto ds = load_local_dataset(path);
  const auto v = compute_meta_features(ds);
  for (std::size_t i = 0; i < kNumMetaFeatures; ++i) {
    const auto x = v.at(i);
    out << kMetaFeatureNames[i] << '\t' << (x ? format_double(*x) : "NA") << '\n';
  }
  return kExitOk;
}

inline Corpus load_corpus_for(const Options& o, HttpClient& http) {
  if (o.datasets.empty()) throw ArgumentError("--datasets <manifest> is required");
  return load_corpus(load_manifest(o.datasets), resolve_cache_dir(o.cache), http, o.jobs);
}

inline RunConfig corpus_config(const std::string& command, const Options& o, const std::string& algorithm) {
  RunConfig c;
  c.set("command", command);
  c.set("datasets", o.datasets);
  c.set("cache", resolve_cache_dir(o.cache).string());
  c.set("algorithm", algorithm);
  c.set("measure", std::string(to_string(measure_from_string(o.measure))));
  c.set("seed", std::to_string(o.seed));
  c.set("folds", std::to_string(o.folds));
  return c;
}

struct BuiltDb {
  MetaDatabase db;
  std::vector<std::pair<std::string, std::string>> failures;
};

inline BuiltDb build_for(const Corpus& corpus, const ClassifierKind& algo, const Options& o, const RunConfig& config) {
  BuildOptions bo;
  bo.measure = measure_from_string(o.measure);
  bo.seed = o.seed;
  bo.folds = o.folds;
  bo.jobs = o.jobs;
  const auto clf = make_classifier(algo);
  auto result = build_metadb(corpus.datasets, *clf, bo);
  BuiltDb out{std::move(result.db), {}};
  out.db.config = config.to_string();
  for (const auto& f : corpus.failures) out.failures.emplace_back(f.entry, f.reason);
  for (const auto& f : result.failures) out.failures.emplace_back(f.dataset, f.reason);
  return out;
}

// `impact-scan`: one meta-database and distribution tables per algorithm.
inline int cmd_impact_scan(const Options& o, HttpClient& http, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ArgumentError("--out <dir> is required");
  print_seed(err, o.seed);
  const auto corpus = load_corpus_for(o, http);
  std::vector<std::pair<std::string, std::string>> failures;
  ReportFiles files;
  for (const auto& name : o.algorithms) {
    const auto algo = ClassifierKind::parse(name);
    const auto config = corpus_config("impact-scan", o, algo.to_string());
    auto built = build_for(corpus, algo, o, config);
    for (auto& [what, why] : built.failures) failures.emplace_back(algo.to_string() + " " + what, why);
    files["metadb_" + file_tag(algo.to_string()) + ".tsv"] = serialize(built.db);
    for (auto& [file, content] : impact_reports(built.db, config)) files[file] = std::move(content);
    out << algo.to_string() << ": " << built.db.rows.size() << " rows from " << built.db.datasets().size()
        << " datasets\n";
    for (const auto& d : impact_distribution(built.db, ImpactGrouping::TransformationKind)) {
      out << "  " << d.group << "\tpositive=" << format_double(d.positive) << "%\tnegative=" << format_double(d.negative)
          << "%\tzero=" << format_double(d.zero) << "%\n";
    }
  }
  write_reports(files, o.out);
  return report_failures(failures, o.allow_partial, err);
}

// `build-metadb`: writes one meta-database file.
inline int cmd_build_metadb(const Options& o, HttpClient& http, std::ostream& out, std::ostream& err) {
  if (o.out.empty()) throw ArgumentError("--out <file> is required");
  if (o.algorithms.size() != 1) throw ArgumentError("build-metadb takes exactly one --algorithm");
  print_seed(err, o.seed);
  const auto corpus = load_corpus_for(o, http);
  const auto algo = ClassifierKind::parse(o.algorithms.front());
  const auto built = build_for(corpus, algo, o, corpus_config("build-metadb", o, algo.to_string()));
  save(built.db, o.out);
  out << "wrote " << built.db.rows.size() << " rows from " << built.db.datasets().size() << " datasets to " << o.out
      << '\n';
  return report_failures(built.failures, o.allow_partial, err);
}

// `train`: fits the forest on a meta-database.
inline int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.metadb.empty()) throw ArgumentError("--metadb <file> is required");
  if (o.out.empty()) throw ArgumentError("--out <file> is required");
  print_seed(err, o.seed);
  const auto db = load_metadb(o.metadb);
  RunConfig c;
  c.set("command", "train");
  c.set("metadb", o.metadb);
  c.set("algorithm", db.algorithm);
  c.set("measure", std::string(to_string(db.measure)));
  c.set("seed", std::to_string(o.seed));
  c.set("trees", std::to_string(o.trees));
  ForestOptions fo;
  fo.n_trees = o.trees;
  fo.seed = o.seed;
  fo.jobs = o.jobs;
  auto model = train_forest(db, fo);
  model.config = c.to_string();
  save(model, o.out);
  out << "trained " << model.trees.size() << " trees on " << db.rows.size() << " rows for " << db.algorithm << '\n';
  return kExitOk;
}

inline Dataset load_dataset_arg(const Options& o, HttpClient& http) {
  if (o.dataset.empty()) throw ArgumentError("--dataset <file|openml id> is required");
  const bool digits = std::all_of(o.dataset.begin(), o.dataset.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  if (digits) return fetch_dataset(*parse_int(o.dataset), resolve_cache_dir(o.cache), http);
  return load_local_dataset(o.dataset);
}

// `recommend`: ranked table on standard output, preceded by the config line.
inline int cmd_recommend(const Options& o, HttpClient& http, std::ostream& out, std::ostream& err) {
  if (o.model.empty()) throw ArgumentError("--model <file> is required");
  if (o.algorithms.size() != 1) throw ArgumentError("recommend takes exactly one --algorithm");
  print_seed(err, o.seed);
  const auto model = load_forest(o.model);
  const auto algo = ClassifierKind::parse(o.algorithms.front());
  const auto ds = load_dataset_arg(o, http);
  const auto rules = o.rules.empty() ? default_rules() : load_rules(o.rules);
  RankOptions ro;
  ro.seed = o.seed;
  ro.folds = o.folds;
  ro.measure = model.measure.empty() ? measure_from_string(o.measure) : measure_from_string(model.measure);
  const auto clf = make_classifier(algo);
  const auto recs = rank_transformations(model, rules, algo, *clf, ds, ro);
  RunConfig c;
  c.set("command", "recommend");
  c.set("dataset", o.dataset);
  c.set("model", o.model);
  c.set("algorithm", algo.to_string());
  c.set("measure", std::string(to_string(ro.measure)));
  c.set("rules", o.rules.empty() ? "default" : o.rules);
  c.set("seed", std::to_string(o.seed));
  c.set("top", std::to_string(o.top));
  out << c.header_line() << format_recommendations(recs, o.top);
  return kExitOk;
}

// `evaluate`: leave-one-dataset-out run and the report suite.
inline int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.metadb.empty()) throw ArgumentError("--metadb <file> is required");
  if (o.out.empty()) throw ArgumentError("--out <dir> is required");
  print_seed(err, o.seed);
  const auto db = load_metadb(o.metadb);
  RunConfig c;
  c.set("command", "evaluate");
  c.set("metadb", o.metadb);
  c.set("algorithm", db.algorithm);
  c.set("measure", std::string(to_string(db.measure)));
  c.set("seed", std::to_string(o.seed));
  c.set("trees", std::to_string(o.trees));
  c.set("max_k", std::to_string(o.max_k));
  ForestOptions fo;
  fo.n_trees = o.trees;
  fo.seed = o.seed;
  fo.jobs = o.jobs;
  const auto loov = loov_evaluate(db, fo);
  const auto files = evaluation_reports(loov, c, o.max_k);
  write_reports(files, o.out);
  const auto records = records_from(loov);
  const auto m = corpus_measures(records);
  const auto g = gain_report(records);
  out << "datasets: " << records.size() << " (relevant " << m.relevant << ")\n"
      << "PA=" << format_double(m.pa) << " Pr=" << format_double(m.pr) << " OR=" << format_double(m.overall_recall)
      << " G=" << format_double(m.g) << '\n'
      << "nDCG=" << format_double(g.mean_ndcg) << " nDCG@1=" << format_double(g.mean_ndcg_top1) << '\n'
      << "reports written to " << o.out << '\n';
  return kExitOk;
}

}  // namespace metaprep::cli

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "metaprep/cli.hpp"

int main(int argc, char** argv) {
  using metaprep::cli::Options;
  CLI::App app{"metaprep: recommend data pre-processing transformations for a classifier"};
  app.require_subcommand(1);
  Options o;
  std::string featurize_path;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed")->capture_default_str(); };
  auto add_jobs = [&](CLI::App* c) { c->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str(); };
  auto add_corpus = [&](CLI::App* c) {
    c->add_option("--datasets", o.datasets, "Corpus manifest (OpenML ids or local paths)")->required();
    c->add_option("--cache", o.cache, "OpenML cache directory (default $METAPREP_CACHE_DIR or .metaprep-cache)");
    c->add_option("--measure", o.measure, "acc, prec, rec or auc")->capture_default_str();
    c->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
    c->add_flag("--allow-partial", o.allow_partial, "Exit 0 even when some datasets fail");
  };

  auto* featurize = app.add_subcommand("featurize", "Print the meta-features of a dataset");
  featurize->add_option("path", featurize_path, "ARFF or CSV file")->required();

  auto* scan = app.add_subcommand("impact-scan", "Measure transformation impact and write distribution tables");
  add_corpus(scan);
  scan->add_option("--algorithm", o.algorithms, "tree, nb, knn:k or logistic (repeatable)")->delimiter(',');
  scan->add_option("--out", o.out, "Output directory")->required();
  add_seed(scan);
  add_jobs(scan);

  auto* build = app.add_subcommand("build-metadb", "Build a meta-database for one algorithm");
  add_corpus(build);
  build->add_option("--algorithm", o.algorithms, "tree, nb, knn:k or logistic")->expected(1);
  build->add_option("--out", o.out, "Meta-database file")->required();
  add_seed(build);
  add_jobs(build);

  auto* train = app.add_subcommand("train", "Train the forest on a meta-database");
  train->add_option("--metadb", o.metadb, "Meta-database file")->required();
  train->add_option("--out", o.out, "Model file")->required();
  train->add_option("--trees", o.trees, "Number of trees")->capture_default_str();
  add_seed(train);
  add_jobs(train);

  auto* recommend = app.add_subcommand("recommend", "Rank transformations for a dataset");
  recommend->add_option("--dataset", o.dataset, "ARFF/CSV file or OpenML id")->required();
  recommend->add_option("--algorithm", o.algorithms, "tree, nb, knn:k or logistic")->expected(1);
  recommend->add_option("--model", o.model, "Model file")->required();
  recommend->add_option("--rules", o.rules, "Expert rules file (default: built-in rules)");
  recommend->add_option("--top", o.top, "Print only the first K rows (0: all)")->capture_default_str();
  recommend->add_option("--cache", o.cache, "OpenML cache directory");
  recommend->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
  add_seed(recommend);

  auto* evaluate = app.add_subcommand("evaluate", "Leave-one-dataset-out evaluation and reports");
  evaluate->add_option("--metadb", o.metadb, "Meta-database file")->required();
  evaluate->add_option("--out", o.out, "Output directory")->required();
  evaluate->add_option("--trees", o.trees, "Number of trees")->capture_default_str();
  evaluate->add_option("--max-k", o.max_k, "Largest K in the L x K tables")->capture_default_str();
  add_seed(evaluate);
  add_jobs(evaluate);

  CLI11_PARSE(app, argc, argv);
  if (o.jobs == 0) o.jobs = 1;

  try {
    metaprep::HttplibClient http;
    if (featurize->parsed()) return metaprep::cli::cmd_featurize(featurize_path, std::cout);
    if (scan->parsed()) return metaprep::cli::cmd_impact_scan(o, http, std::cout, std::cerr);
    if (build->parsed()) return metaprep::cli::cmd_build_metadb(o, http, std::cout, std::cerr);
    if (train->parsed()) return metaprep::cli::cmd_train(o, std::cout, std::cerr);
    if (recommend->parsed()) return metaprep::cli::cmd_recommend(o, http, std::cout, std::cerr);
    if (evaluate->parsed()) return metaprep::cli::cmd_evaluate(o, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return metaprep::cli::kExitError;
  }
  return metaprep::cli::kExitError;
}

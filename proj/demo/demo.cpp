// Library walk-through on generated data: build a meta-database for the
// decision tree, train the forest and rank transformations for a new dataset.

#include <iostream>
#include <vector>

#include "metaprep/classifiers.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/ranker.hpp"
#include "metaprep/synthetic.hpp"

int main() {
  using namespace metaprep;
  std::vector<Dataset> corpus;
  const auto specs = mini_corpus_specs();
  for (std::size_t i = 0; i < 8; ++i) corpus.push_back(make_synthetic(specs[i]));

  const auto algorithm = ClassifierKind::parse("tree");
  const auto clf = make_classifier(algorithm);
  BuildOptions build;
  build.folds = 5;
  const auto built = build_metadb(corpus, *clf, build);
  std::cout << "meta-database: " << built.db.rows.size() << " rows, " << built.failures.size() << " failures\n";

  ForestOptions forest;
  forest.n_trees = 50;
  const auto model = train_forest(built.db, forest);

  SyntheticSpec fresh;
  fresh.name = "fresh";
  fresh.skewed = true;
  fresh.categorical = 1;
  fresh.informative_categorical = 1;
  fresh.seed = 99;
  RankOptions rank;
  rank.folds = 5;
  const auto recs = rank_transformations(model, default_rules(), algorithm, *clf, make_synthetic(fresh), rank);
  std::cout << format_recommendations(recs, 5);
}

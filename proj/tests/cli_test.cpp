#include <gtest/gtest.h>

#include <sstream>

#include "fake_http.hpp"
#include "metaprep/cli.hpp"

namespace metaprep::cli {
namespace {

using metaprep::testing::data_dir;
using metaprep::testing::FakeHttpClient;
using metaprep::testing::scratch_dir;

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

// Manifest of the first `n` bundled datasets.
std::string small_manifest(const std::filesystem::path& dir, std::size_t n) {
  std::string text;
  const auto files = metaprep::testing::mini_corpus_files();
  for (std::size_t i = 0; i < n; ++i) text += files[i].string() + "\n";
  const auto path = dir / "small.manifest";
  write_file_atomic(path, text);
  return path.string();
}

TEST(Featurize, PrintsEveryMetaFeature) {
  std::ostringstream a, b;
  const auto file = (data_dir() / "mini_corpus" / "mixed_missing.arff").string();
  EXPECT_EQ(cmd_featurize(file, a), kExitOk);
  cmd_featurize(file, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(lines(a.str()), kNumMetaFeatures);
  std::istringstream in(a.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(in, line)) EXPECT_EQ(line.substr(0, line.find('\t')), kMetaFeatureNames[i++]);
}

TEST(Featurize, MissingFileThrows) {
  std::ostringstream out;
  EXPECT_THROW(cmd_featurize("/nonexistent/file.arff", out), Error);
}

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = scratch_dir("cli_pipeline");
    options_.datasets = small_manifest(dir_, 8);
    options_.cache = (dir_ / "cache").string();
    options_.out = (dir_ / "scan").string();
    options_.algorithms = {"tree", "knn:1"};
    std::ostringstream out, err;
    ASSERT_EQ(cmd_impact_scan(options_, http_, out, err), kExitOk);
    scan_out_ = out.str();
    scan_err_ = err.str();

    Options train = options_;
    train.metadb = (dir_ / "scan" / "metadb_tree.tsv").string();
    train.out = (dir_ / "model.json").string();
    train.trees = 20;
    ASSERT_EQ(cmd_train(train, out, err), kExitOk);
  }

  static inline std::filesystem::path dir_;
  static inline Options options_;
  static inline FakeHttpClient http_;
  static inline std::string scan_out_, scan_err_;
};

TEST_F(Pipeline, ImpactScanWritesTablesAndSeed) {
  for (const char* f : {"metadb_tree.tsv", "metadb_knn-1.tsv", "impact_tree_total.tsv", "impact_tree_by_kind.tsv",
                        "impact_knn-1_by_kind.tsv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "scan" / f)) << f;
  }
  EXPECT_NE(scan_err_.find("seed: 42"), std::string::npos);
  const auto by_kind = read_file(dir_ / "scan" / "impact_tree_by_kind.tsv");
  EXPECT_EQ(by_kind.rfind("# config: command=impact-scan;", 0), 0u);
  std::istringstream in(by_kind);
  std::string line;
  bool seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("normalize\t", 0) != 0) continue;
    seen = true;
    EXPECT_NE(line.find("\t0\t0\t100\t"), std::string::npos) << line;
  }
  EXPECT_TRUE(seen);
}

TEST_F(Pipeline, RecommendHonoursTop) {
  Options o = options_;
  o.model = (dir_ / "model.json").string();
  o.dataset = (data_dir() / "mini_corpus" / "skewed_b.arff").string();
  o.algorithms = {"tree"};
  o.top = 1;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_recommend(o, http_, out, err), kExitOk);
  const auto text = out.str();
  EXPECT_EQ(lines(text), 3u);
  EXPECT_EQ(text.rfind("# config: command=recommend;", 0), 0u);
  EXPECT_EQ(text.find("normalize(global)"), std::string::npos);

  o.algorithms = {"nb"};
  EXPECT_THROW(cmd_recommend(o, http_, out, err), SchemaError);
}

TEST_F(Pipeline, RecommendFetchesNumericDatasetArgument) {
  FakeHttpClient http;
  metaprep::testing::register_mini_corpus(http);
  Options o = options_;
  o.model = (dir_ / "model.json").string();
  o.dataset = "5";
  o.algorithms = {"tree"};
  o.cache = (dir_ / "fetch_cache").string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_recommend(o, http, out, err), kExitOk);
  EXPECT_EQ(http.requests(), 2u);
}

TEST_F(Pipeline, EvaluateIsReproducible) {
  Options o = options_;
  o.metadb = (dir_ / "scan" / "metadb_tree.tsv").string();
  o.trees = 20;
  o.out = (dir_ / "eval_a").string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_evaluate(o, out, err), kExitOk);
  o.out = (dir_ / "eval_b").string();
  EXPECT_EQ(cmd_evaluate(o, out, err), kExitOk);
  for (const char* f : {"predictions.tsv", "loov_audit.tsv", "lk_matrix.tsv", "random_pick.tsv", "ndcg.tsv",
                        "confusion.tsv", "dataset_measures.tsv", "summary.json"}) {
    EXPECT_EQ(read_file(dir_ / "eval_a" / f), read_file(dir_ / "eval_b" / f)) << f;
  }
  const auto summary = nlohmann::json::parse(read_file(dir_ / "eval_a" / "summary.json"));
  EXPECT_EQ(summary["datasets"], 8);
  EXPECT_EQ(summary["config"]["command"], "evaluate");
}

TEST(Failures, PartialCorpusExitsWithDistinctCode) {
  const auto dir = scratch_dir("cli_partial");
  write_file_atomic(dir / "m.manifest", metaprep::testing::mini_corpus_files()[0].string() + "\n424242\n");
  Options o;
  o.datasets = (dir / "m.manifest").string();
  o.cache = (dir / "cache").string();
  o.out = (dir / "db.tsv").string();
  FakeHttpClient http;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_build_metadb(o, http, out, err), kExitPartial);
  EXPECT_NE(err.str().find("openml:424242"), std::string::npos);
  o.allow_partial = true;
  EXPECT_EQ(cmd_build_metadb(o, http, out, err), kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "db.tsv"));
}

TEST(Failures, MissingRequiredOptions) {
  FakeHttpClient http;
  std::ostringstream out, err;
  Options o;
  EXPECT_THROW(cmd_impact_scan(o, http, out, err), ArgumentError);
  o.out = "x";
  EXPECT_THROW(cmd_impact_scan(o, http, out, err), ArgumentError);
  EXPECT_THROW(cmd_train(Options{}, out, err), ArgumentError);
  EXPECT_THROW(cmd_evaluate(Options{}, out, err), ArgumentError);
  EXPECT_THROW(cmd_recommend(Options{}, http, out, err), ArgumentError);
}

}  // namespace
}  // namespace metaprep::cli

#include <gtest/gtest.h>

#include <map>
#include <string>

#include "metaprep/arff.hpp"
#include "metaprep/csv.hpp"
#include "metaprep/folds.hpp"
#include "test_util.hpp"

namespace metaprep {
namespace {

using testing::random_dataset;

ParseErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_arff(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseErrorKind::EmptyInput;
}

TEST(Dataset, RejectsBrokenInvariants) {
  const auto cls = Attribute::categorical("class", {"a", "b"});
  const auto x = Attribute::continuous("x");
  EXPECT_THROW(Dataset("d", {cls}, 0, {{0}}), DatasetError);  // no predictor
  EXPECT_THROW(Dataset("d", {x, cls}, 1, {{1, 2}, {0, missing}}), DatasetError);  // missing class
  EXPECT_THROW(Dataset("d", {x, cls}, 1, {{1, 2}, {0, 2}}), DatasetError);  // class index out of range
  EXPECT_THROW(Dataset("d", {x, x, cls}, 2, {{1}, {1}, {0}}), DatasetError);  // duplicate names
  EXPECT_THROW(Dataset("d", {x, Attribute::categorical("class", {"a"})}, 1, {{1}, {0}}), DatasetError);
  EXPECT_THROW(Dataset("d", {x, cls}, 1, {{std::numeric_limits<double>::infinity()}, {0}}), DatasetError);
  EXPECT_NO_THROW(Dataset("d", {x, cls}, 1, {{missing}, {0}}));
}

TEST(Arff, ParsesMissingCell) {
  const auto ds = parse_arff(
      "@relation toy\n"
      "@attribute x numeric\n"
      "@attribute colour {red,green}\n"
      "@attribute class {yes,no}\n"
      "@data\n"
      "1.5,red,yes\n"
      "?,green,no\n"
      "3,red,no\n"
      "4,green,yes\n");
  EXPECT_EQ(ds.name(), "toy");
  EXPECT_EQ(ds.num_rows(), 4u);
  EXPECT_EQ(ds.class_index(), 2u);
  std::size_t missing_cells = 0;
  for (const auto& col : ds.columns())
    for (double v : col) missing_cells += is_missing(v);
  EXPECT_EQ(missing_cells, 1u);
  EXPECT_EQ(ds.value(1, 1), 1.0);
}

TEST(Arff, UndeclaredNominalReportsLine) {
  const std::string text =
      "@relation t\n@attribute a {a,b}\n@attribute class {x,y}\n@data\na,x\nc,y\n";
  try {
    parse_arff(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::UndeclaredNominal);
    EXPECT_EQ(e.line(), 6u);
  }
}

TEST(Arff, DistinctErrorKinds) {
  EXPECT_EQ(parse_error_kind(""), ParseErrorKind::EmptyInput);
  EXPECT_EQ(parse_error_kind("@relation t\n@attribute x date\n@attribute class {a,b}\n@data\n"),
            ParseErrorKind::UnknownAttributeType);
  EXPECT_EQ(parse_error_kind("@relation t\n@attribute x numeric\n@attribute class {a,b}\n@data\n1,a,3\n"),
            ParseErrorKind::RowArity);
  EXPECT_EQ(parse_error_kind("@relation t\n@attribute x numeric\n@attribute class {a,b}\n@data\n{0 1}\n"),
            ParseErrorKind::SparseUnsupported);
  EXPECT_EQ(parse_error_kind("@relation t\n@attribute x numeric\n@attribute class {a,b}\n@data\nabc,a\n"),
            ParseErrorKind::InvalidNumber);
  EXPECT_EQ(parse_error_kind("@relation t\n@attribute x numeric\n@attribute y numeric\n@data\n1,2\n"),
            ParseErrorKind::NoClassAttribute);
}

TEST(Arff, ClassNamedAttributeWinsOverLastNominal) {
  const auto ds = parse_arff(
      "@relation t\n@attribute Class {p,q}\n@attribute other {a,b}\n@data\np,a\nq,b\n");
  EXPECT_EQ(ds.class_index(), 0u);
  const auto ds2 = parse_arff("@relation t\n@attribute k {p,q}\n@attribute other {a,b}\n@attribute x real\n@data\np,a,1\nq,b,2\n");
  EXPECT_EQ(ds2.class_index(), 1u);
}

TEST(Arff, QuotedNamesAndValues) {
  const auto ds = parse_arff(
      "@relation 'my data'\n@attribute 'a b' {'x y',z}\n@attribute class {c1,c2}\n@data\n'x y',c1\nz,c2\n");
  EXPECT_EQ(ds.name(), "my data");
  EXPECT_EQ(ds.attribute(0).name, "a b");
  EXPECT_EQ(ds.attribute(0).categories[0], "x y");
  EXPECT_EQ(parse_arff(write_arff(ds)), ds);
}

TEST(ArffProperty, RoundTripOnRandomDatasets) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto ds = random_dataset(seed, 5 + seed % 17, seed % 4, seed % 3 + (seed % 4 == 0), 0.15, 2 + seed % 3);
    EXPECT_EQ(parse_arff(write_arff(ds)), ds) << "seed " << seed;
  }
}

TEST(Csv, InfersKinds) {
  CsvOptions opt;
  opt.class_column = std::string("class");
  const auto ds = parse_csv("x,y,class\n1,a,yes\n2,b,no\n", opt);
  EXPECT_TRUE(ds.attribute(0).is_continuous());
  EXPECT_TRUE(ds.attribute(1).is_categorical());
  EXPECT_EQ(ds.class_attribute().categories, (std::vector<std::string>{"yes", "no"}));
}

TEST(Csv, MixedColumnBecomesCategorical) {
  const auto ds = parse_csv("v,class\n1,a\n2,b\nthree,a\n");
  EXPECT_TRUE(ds.attribute(0).is_categorical());
  EXPECT_EQ(ds.attribute(0).num_categories(), 3u);
}

TEST(Csv, MissingTokensAndErrors) {
  const auto ds = parse_csv("v,class\n,a\nNA,b\n?,a\n4,b\n");
  EXPECT_TRUE(ds.attribute(0).is_continuous());
  EXPECT_TRUE(is_missing(ds.value(0, 0)));
  EXPECT_TRUE(is_missing(ds.value(2, 0)));
  EXPECT_THROW(parse_csv("v,class\n1,a\n2,\n"), ParseError);
  EXPECT_THROW(parse_csv("v,label\n1,a\n"), ParseError);
  EXPECT_THROW(parse_csv(""), ParseError);
}

TEST(Csv, TypeHintsAndIndexClass) {
  CsvOptions opt;
  opt.class_column = std::size_t{0};
  opt.type_hints["code"] = AttributeKind::Categorical;
  const auto ds = parse_csv("label,code\nx,1\ny,2\n", opt);
  EXPECT_EQ(ds.class_index(), 0u);
  EXPECT_TRUE(ds.attribute(1).is_categorical());
}

TEST(CsvProperty, RoundTripOnRandomDatasets) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto ds = random_dataset(seed, 6 + seed % 9, 1 + seed % 3, seed % 3, 0.1);
    CsvOptions opt;
    opt.name = ds.name();
    std::map<std::string, AttributeKind> hints;
    for (const auto& a : ds.attributes()) hints[a.name] = a.kind;
    opt.type_hints = hints;
    const auto back = parse_csv(write_csv(ds), opt);
    ASSERT_EQ(back.num_rows(), ds.num_rows());
    ASSERT_EQ(back.num_attributes(), ds.num_attributes());
    for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
      for (std::size_t r = 0; r < ds.num_rows(); ++r) {
        const double x = ds.value(r, a), y = back.value(r, a);
        ASSERT_EQ(is_missing(x), is_missing(y));
        if (ds.attribute(a).is_continuous() && !is_missing(x)) {
          EXPECT_EQ(x, y);
        } else if (!is_missing(x)) {
          EXPECT_EQ(ds.attribute(a).categories[static_cast<std::size_t>(x)],
                    back.attribute(a).categories[static_cast<std::size_t>(y)]);
        }
      }
    }
  }
}

TEST(Folds, ForcedStratification) {
  const auto ds = testing::continuous_dataset({{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  const auto f = stratified_folds(ds, 5, 11);
  for (std::size_t fold = 0; fold < 5; ++fold) {
    std::size_t c0 = 0, c1 = 0;
    for (std::size_t r : f.test_rows(fold)) (ds.class_of(r) == 0 ? c0 : c1)++;
    EXPECT_EQ(c0, 1u);
    EXPECT_EQ(c1, 1u);
  }
}

TEST(Folds, DeterministicAndBounded) {
  const auto ds = random_dataset(4, 30);
  EXPECT_EQ(stratified_folds(ds, 2, 5).fold_of_row, stratified_folds(ds, 2, 5).fold_of_row);
  EXPECT_THROW(stratified_folds(ds, 31, 1), ArgumentError);
  EXPECT_THROW(stratified_folds(ds, 1, 1), ArgumentError);
}

// Counting oracle: per class, fold counts differ by at most one.
TEST(FoldsProperty, StratificationBound) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 10 + rng.index(150);
    const std::size_t classes = 2 + rng.index(4);
    const auto ds = random_dataset(seed, n, 1, 0, 0.0, classes);
    const std::size_t k = 2 + rng.index(std::min<std::size_t>(n - 1, 12));
    const auto f = stratified_folds(ds, k, seed);
    std::vector<std::vector<std::size_t>> counts(classes, std::vector<std::size_t>(k, 0));
    for (std::size_t r = 0; r < n; ++r) {
      ASSERT_LT(f.fold_of_row[r], k);
      ++counts[ds.class_of(r)][f.fold_of_row[r]];
    }
    for (const auto& per_fold : counts) {
      const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
      EXPECT_LE(*hi - *lo, 1u) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace metaprep

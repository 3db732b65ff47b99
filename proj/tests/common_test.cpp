#include <gtest/gtest.h>

#include <atomic>
#include <limits>
#include <stdexcept>
#include <vector>

#include "metaprep/common.hpp"

namespace metaprep {
namespace {

TEST(FormatDouble, RoundTripsExactly) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.index(20)) - 10.0);
    const auto parsed = parse_double(format_double(v));
    ASSERT_TRUE(parsed);
    EXPECT_EQ(*parsed, v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(2.0), "2");
}

TEST(ParseNumbers, RejectTrailingGarbage) {
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double(""));
  EXPECT_EQ(*parse_double("+2.5"), 2.5);
  EXPECT_FALSE(parse_int("12a"));
  EXPECT_EQ(*parse_int("-7"), -7);
}

TEST(Split, KeepsEmptyFields) {
  const auto parts = split("a,,b,", ',');
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(parts[3], "");
}

TEST(Rng, SameSeedSameStream) {
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng rng(1);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(ParallelFor, FillsEverySlotForAnyJobCount) {
  for (std::size_t jobs : {1u, 2u, 7u}) {
    std::vector<int> out(50, 0);
    parallel_for(out.size(), jobs, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i) * 2);
  }
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  try {
    parallel_for(10, 3, [](std::size_t i) {
      if (i == 4 || i == 8) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 4");
  }
}

}  // namespace
}  // namespace metaprep

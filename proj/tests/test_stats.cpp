#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mfe/rng.hpp"
#include "mfe/shapiro_wilk.hpp"
#include "mfe/stats.hpp"
#include "oracles.hpp"

namespace {

std::vector<double> normals(std::uint64_t seed, std::size_t n) {
  mfe::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::vector<double> uniforms(std::uint64_t seed, std::size_t n) {
  mfe::Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  mfe::Rng a(99);
  mfe::Rng b(99);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  mfe::Rng c(100);
  EXPECT_NE(mfe::Rng(99).next(), c.next());
}

TEST(Rng, BelowStaysInRangeAndShuffleIsPermutation) {
  mfe::Rng rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(7), 7u);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  rng.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(Stats, BasicMoments) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(mfe::stats::mean(x), 2.0);
  EXPECT_DOUBLE_EQ(mfe::stats::variance(x), 1.0);
  EXPECT_DOUBLE_EQ(mfe::stats::sd(x), 1.0);
  EXPECT_DOUBLE_EQ(mfe::stats::median(std::vector<double>{4, 1, 3, 2}), 2.5);
}

TEST(Stats, QuartilesUseLinearInterpolation) {
  const std::vector<double> x{1, 2, 3, 4};
  const double expected[] = {1, 1.75, 2.5, 3.25, 4};
  const double probs[] = {0, 0.25, 0.5, 0.75, 1};
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(mfe::stats::quantile(x, probs[i]), expected[i]);
    EXPECT_DOUBLE_EQ(oracle::quantile(x, probs[i]), expected[i]);
  }
}

TEST(Stats, SkewnessKurtosisMatchOracleAndNormalSample) {
  const auto x = normals(2024, 10000);
  EXPECT_NEAR(mfe::stats::skewness(x), oracle::skewness(x), 1e-9);
  EXPECT_NEAR(mfe::stats::kurtosis(x), oracle::kurtosis(x), 1e-9);
  EXPECT_NEAR(mfe::stats::kurtosis(x), 0.0, 0.3);
  EXPECT_NEAR(mfe::stats::skewness(x), 0.0, 0.15);
}

TEST(Stats, ConstantVectorHasUndefinedShape) {
  const std::vector<double> c{4, 4, 4};
  EXPECT_TRUE(std::isnan(mfe::stats::skewness(c)));
  EXPECT_TRUE(std::isnan(mfe::stats::kurtosis(c)));
  EXPECT_TRUE(std::isnan(mfe::stats::pearson(c, std::vector<double>{1, 2, 3})));
}

TEST(Stats, SpearmanMatchesRankThenPearsonOracle) {
  mfe::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(20);
    std::vector<double> y(20);
    for (std::size_t i = 0; i < 20; ++i) {
      // Coarse values so that ties occur.
      x[i] = static_cast<double>(rng.below(8));
      y[i] = x[i] * 0.5 + static_cast<double>(rng.below(6));
    }
    EXPECT_NEAR(mfe::stats::spearman(x, y), oracle::spearman(x, y), 1e-12);
  }
}

TEST(Stats, AverageRanksTies) {
  const auto r = mfe::stats::average_ranks(std::vector<double>{10, 20, 10, 30});
  EXPECT_EQ(r, (std::vector<double>{1.5, 3, 1.5, 4}));
}

TEST(Stats, KendallPerfectAndReversed) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(mfe::stats::kendall(x, x), 1.0);
  EXPECT_DOUBLE_EQ(mfe::stats::kendall(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
}

// Reference statistics and p-values for these seeded samples were computed
// once with an independent Shapiro-Wilk implementation and frozen here.
struct ShapiroCase {
  std::uint64_t seed;
  std::size_t n;
  bool normal;
  double w;
  double p;
};

class ShapiroWilkReference : public ::testing::TestWithParam<ShapiroCase> {};

TEST_P(ShapiroWilkReference, MatchesFrozenValues) {
  const auto c = GetParam();
  const auto x = c.normal ? normals(c.seed, c.n) : uniforms(c.seed, c.n);
  const auto r = mfe::shapiro_wilk(x);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->w, c.w, 1e-7);
  EXPECT_NEAR(r->p_value, c.p, 1e-6 * std::max(c.p, 1e-30) + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Samples, ShapiroWilkReference,
                         ::testing::Values(ShapiroCase{42, 500, true, 0.9969099266165392, 0.4629245857433337},
                                           ShapiroCase{42, 20, true, 0.960324769021548, 0.5503577978020915},
                                           ShapiroCase{42, 11, true, 0.9404810434743806, 0.526169956767226},
                                           ShapiroCase{42, 3, true, 0.8406899618355463, 0.2158594913379105},
                                           ShapiroCase{42, 5000, true, 0.9997518843504304, 0.8512716924995087},
                                           ShapiroCase{7, 500, false, 0.9576496072188023, 8.524838671839942e-11},
                                           ShapiroCase{7, 20, false, 0.8831581864388693, 0.02017363859465526},
                                           ShapiroCase{7, 11, false, 0.8135171018658824, 0.014170723303871443},
                                           ShapiroCase{7, 3, false, 0.9139727105864112, 0.4314709655866884}));

TEST(ShapiroWilk, DegenerateInputs) {
  EXPECT_FALSE(mfe::shapiro_wilk(std::vector<double>{1, 2}).has_value());
  EXPECT_FALSE(mfe::shapiro_wilk(std::vector<double>{3, 3, 3, 3}).has_value());
}

TEST(ShapiroWilk, NormalQuantileInvertsTail) {
  for (double p : {0.001, 0.025, 0.3, 0.5, 0.9, 0.999}) {
    const double z = mfe::normal_quantile(p);
    EXPECT_NEAR(mfe::normal_upper_tail(z, 0.0, 1.0), 1.0 - p, 1e-12);
  }
}

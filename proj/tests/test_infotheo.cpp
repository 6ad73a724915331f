#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mfe/infotheo.hpp"
#include "mfe/transform.hpp"
#include "oracles.hpp"

namespace {

mfe::MeasureResult find(const std::vector<mfe::MeasureResult>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("no measure " + name);
}

mfe::Column cat(const std::vector<std::string>& v, const std::string& name = "c") { return mfe::Column::categorical(name, v); }

}  // namespace

TEST(Entropy, HandValues) {
  EXPECT_DOUBLE_EQ(mfe::entropy(cat({"a", "b", "a", "b"})), 1.0);
  EXPECT_DOUBLE_EQ(mfe::entropy(cat({"a", "a", "a"})), 0.0);
  EXPECT_DOUBLE_EQ(mfe::entropy(cat({"a", "a", "b", "c"})), 1.5);
}

TEST(Concentration, IdenticalIndependentAndOracle) {
  const auto x = cat({"a", "b", "c", "a", "b", "c"});
  EXPECT_NEAR(mfe::concentration(x, x), 1.0, 1e-12);
  const auto u = cat({"p", "p", "q", "q"});
  const auto v = cat({"r", "s", "r", "s"});
  EXPECT_NEAR(mfe::concentration(u, v), 0.0, 1e-12);
  EXPECT_TRUE(std::isnan(mfe::concentration(u, cat({"k", "k", "k", "k"}))));

  // 3x2 table.
  const std::vector<std::string> a{"x", "x", "x", "y", "y", "z", "z", "z", "z"};
  const std::vector<std::string> b{"0", "0", "1", "1", "1", "0", "1", "1", "0"};
  EXPECT_NEAR(mfe::concentration(cat(a), cat(b)), oracle::concentration(a, b), 1e-12);
  EXPECT_NEAR(mfe::concentration(cat(b), cat(a)), oracle::concentration(b, a), 1e-12);
}

TEST(Infotheo, PerfectAttribute) {
  const std::vector<std::string> y{"p", "q", "p", "q", "r", "r"};
  const auto d = mfe::Dataset("d", {cat(y, "copy")}, cat(y, "y"));
  const auto rs = mfe::extract_infotheo(d);
  const double h = oracle::entropy(y);
  EXPECT_NEAR(find(rs, "mutInf").values[0], h, 1e-12);
  EXPECT_NEAR(find(rs, "classEnt").values[0], h, 1e-12);
  EXPECT_NEAR(find(rs, "eqNumAttr").values[0], 1.0, 1e-12);
  EXPECT_NEAR(find(rs, "nsRatio").values[0], 0.0, 1e-12);
  EXPECT_EQ(find(rs, "attrConc").exception, mfe::ExceptionKind::insufficient_data);
}

TEST(Infotheo, IndependentAttributeHasNoInformation) {
  const auto d = mfe::Dataset("d", {cat({"a", "a", "b", "b"})}, cat({"p", "q", "p", "q"}, "y"));
  const auto rs = mfe::extract_infotheo(d);
  EXPECT_NEAR(find(rs, "mutInf").values[0], 0.0, 1e-12);
  EXPECT_EQ(find(rs, "eqNumAttr").exception, mfe::ExceptionKind::division_by_zero);
  EXPECT_EQ(find(rs, "nsRatio").exception, mfe::ExceptionKind::division_by_zero);
}

TEST(Infotheo, MatchesOracleOnMixedDataset) {
  const auto rs = mfe::extract_infotheo(fixture::mixed8());
  const std::vector<std::vector<std::string>> cols{fixture::kC1, fixture::kC2};
  const auto& y = fixture::kY;
  double mean_h = 0.0;
  double mean_mi = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(find(rs, "attrEnt").values[j], oracle::entropy(cols[j]), 1e-12);
    EXPECT_NEAR(find(rs, "jointEnt").values[j], oracle::joint_entropy(cols[j], y), 1e-12);
    EXPECT_NEAR(find(rs, "mutInf").values[j], oracle::mutual_information(cols[j], y), 1e-12);
    EXPECT_NEAR(find(rs, "classConc").values[j], oracle::concentration(cols[j], y), 1e-12);
    mean_h += oracle::entropy(cols[j]) / 2.0;
    mean_mi += oracle::mutual_information(cols[j], y) / 2.0;
  }
  const auto& ac = find(rs, "attrConc").values;
  ASSERT_EQ(ac.size(), 2u);
  EXPECT_NEAR(ac[0], oracle::concentration(cols[0], cols[1]), 1e-12);
  EXPECT_NEAR(ac[1], oracle::concentration(cols[1], cols[0]), 1e-12);
  EXPECT_NEAR(find(rs, "classEnt").values[0], oracle::entropy(y), 1e-12);
  EXPECT_NEAR(find(rs, "eqNumAttr").values[0], oracle::entropy(y) / mean_mi, 1e-9);
  EXPECT_NEAR(find(rs, "nsRatio").values[0], (mean_h - mean_mi) / mean_mi, 1e-9);
}

TEST(Infotheo, NoCategoricalColumns) {
  const auto d = mfe::Dataset("d", {mfe::Column::numeric("x", {1, 2, 3})}, cat({"p", "q", "p"}, "y"));
  const auto rs = mfe::extract_infotheo(d);
  ASSERT_EQ(rs.size(), 8u);
  for (const auto& r : rs) EXPECT_EQ(r.exception, mfe::ExceptionKind::domain) << r.name;
  EXPECT_FALSE(find(rs, "classEnt").multi_valued);
  EXPECT_TRUE(find(rs, "mutInf").multi_valued);
}

TEST(Infotheo, IdentitiesAndRanges) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto d = mfe::discretize(fixture::synthetic(seed, {50 + 3 * seed, 3, 3, 2 + seed % 4, 1.0}));
    const auto rs = mfe::extract_infotheo(d);
    const double hy = find(rs, "classEnt").values[0];
    EXPECT_LE(hy, std::log2(static_cast<double>(d.q())) + 1e-12);
    const auto h = find(rs, "attrEnt").values;
    const auto j = find(rs, "jointEnt").values;
    const auto mi = find(rs, "mutInf").values;
    for (std::size_t i = 0; i < h.size(); ++i) {
      EXPECT_NEAR(j[i], h[i] + hy - mi[i], 1e-12);
      EXPECT_GE(mi[i], 0.0);
      EXPECT_LE(mi[i], std::min(h[i], hy) + 1e-12);
      EXPECT_LE(h[i], std::log2(static_cast<double>(d.n())) + 1e-12);
      // Independent joint entropy.
      std::vector<std::string> a;
      std::vector<std::string> b;
      for (std::size_t r = 0; r < d.n(); ++r) {
        a.push_back(std::to_string(d.column(i).codes()[r]));
        b.push_back(std::to_string(d.labels()[r]));
      }
      EXPECT_NEAR(j[i], oracle::joint_entropy(a, b), 1e-12);
    }
    for (const char* name : {"attrConc", "classConc"}) {
      for (double c : find(rs, name).values) {
        if (std::isnan(c)) continue;
        EXPECT_GE(c, -1e-12);
        EXPECT_LE(c, 1.0 + 1e-12);
      }
    }
  }
}

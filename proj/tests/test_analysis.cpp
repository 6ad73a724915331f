#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "mfe/analysis.hpp"
#include "mfe/engine.hpp"
#include "oracles.hpp"

namespace {

/// Metabase with the given feature columns, rows named r0, r1, ...
mfe::Metabase metabase_of(const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns) {
  mfe::Metabase mb;
  mb.features = names;
  mb.timing_columns = {"time.simple", "time.total"};
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    mfe::Metabase::Row r;
    r.dataset = "r" + std::to_string(i);
    r.n = 10.0 * static_cast<double>(i + 1);
    r.d = 3;
    r.q = 2;
    for (const auto& c : columns) r.features.push_back(c[i]);
    r.timing = {0.01, 0.02};
    mb.rows.push_back(r);
  }
  return mb;
}

std::vector<double> noise(mfe::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

/// Random metabase with clusters of perfectly rank-correlated columns,
/// some noisy near-copies, and independent columns.
mfe::Metabase clustered(std::uint64_t seed, std::size_t rows) {
  mfe::Rng rng(seed);
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  const std::size_t bases = 3 + seed % 4;
  for (std::size_t b = 0; b < bases; ++b) {
    const auto base = noise(rng, rows);
    names.push_back("f" + std::to_string(b));
    cols.push_back(base);
    const std::size_t copies = rng.below(3);
    for (std::size_t k = 0; k < copies; ++k) {
      std::vector<double> v = base;
      const double kind = rng.uniform();
      for (auto& x : v) x = kind < 0.5 ? std::exp(x) : -3.0 * x + 1.0;
      names.push_back("f" + std::to_string(b) + "_copy" + std::to_string(k));
      cols.push_back(v);
    }
    if (rng.uniform() < 0.5) {
      std::vector<double> v = base;
      for (auto& x : v) x += 0.3 * rng.normal();
      names.push_back("f" + std::to_string(b) + "_near");
      cols.push_back(v);
    }
  }
  return metabase_of(names, cols);
}

/// Features minus equivalence classes under |rho| = 1, by brute-force scan.
std::size_t perfectly_redundant(const mfe::Metabase& mb) {
  const std::size_t k = mb.features.size();
  std::vector<std::size_t> cls(k);
  std::iota(cls.begin(), cls.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(std::abs(oracle::spearman(mb.column(i), mb.column(j))) - 1.0) < 1e-12) {
        cls[i] = cls[j];
        break;
      }
    }
  }
  std::size_t classes = 0;
  for (std::size_t i = 0; i < k; ++i) classes += cls[i] == i;
  return k - classes;
}

}  // namespace

TEST(Spearman, PairwiseComplete) {
  const double nan = std::nan("");
  const std::vector<double> x{1, 2, 3, nan, 5};
  const std::vector<double> y{2, 4, 6, 8, nan};
  EXPECT_NEAR(mfe::pairwise_abs_spearman(x, y), 1.0, 1e-12);
  EXPECT_EQ(mfe::pairwise_abs_spearman(std::vector<double>{1, nan}, std::vector<double>{nan, 2}), 0.0);
  EXPECT_EQ(mfe::pairwise_abs_spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), 0.0);
  mfe::Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto a = noise(rng, 15);
    const auto b = noise(rng, 15);
    EXPECT_NEAR(mfe::pairwise_abs_spearman(a, b), std::abs(oracle::spearman(a, b)), 1e-12);
  }
}

TEST(Redundancy, DuplicateRemovedAtOne) {
  mfe::Rng rng(1);
  const auto a = noise(rng, 20);
  const auto mb = metabase_of({"a", "b", "dup_a"}, {a, noise(rng, 20), a});
  const auto r = mfe::redundancy_filter(mb, 1.0);
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_EQ(r.removed[0].first, "dup_a");
  EXPECT_EQ(r.removed[0].second, "a");
  EXPECT_EQ(r.kept.size(), 2u);
  EXPECT_NEAR(r.proportion_removed(), 1.0 / 3.0, 1e-15);
}

TEST(Redundancy, OrthogonalColumnsSurvive) {
  // Rows of a 16-point two-level factorial design, columns mutually orthogonal.
  std::vector<std::vector<double>> cols(4, std::vector<double>(16));
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t b = 0; b < 4; ++b) cols[b][i] = static_cast<double>((i >> b) & 1U) + 0.001 * static_cast<double>(i);
  }
  const auto mb = metabase_of({"w", "x", "y", "z"}, cols);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_LT(std::abs(oracle::spearman(cols[i], cols[j])), 0.95);
  }
  const auto r = mfe::redundancy_filter(mb, 0.95);
  EXPECT_TRUE(r.removed.empty());
  EXPECT_EQ(r.kept.size(), 4u);
}

TEST(Redundancy, ConstantFeaturesExcluded) {
  mfe::Rng rng(3);
  const auto mb = metabase_of({"k", "v"}, {std::vector<double>(6, 2.0), noise(rng, 6)});
  const auto r = mfe::redundancy_filter(mb, 0.9);
  EXPECT_EQ(r.constant, std::vector<std::string>{"k"});
  EXPECT_EQ(r.total, 1u);
  EXPECT_TRUE(r.removed.empty());
}

TEST(Redundancy, PreconditionsAndDeterminism) {
  mfe::Rng rng(4);
  const auto one_row = metabase_of({"a"}, {{1.0}});
  EXPECT_THROW(mfe::redundancy_filter(one_row, 0.9), mfe::InvalidDatasetError);
  const auto mb = clustered(5, 12);
  EXPECT_THROW(mfe::redundancy_filter(mb, 0.0), mfe::ConfigError);
  EXPECT_THROW(mfe::redundancy_filter(mb, 1.5), mfe::ConfigError);
  const auto a = mfe::redundancy_filter(mb, 0.9);
  const auto b = mfe::redundancy_filter(mb, 0.9);
  EXPECT_EQ(a.kept, b.kept);
  EXPECT_EQ(a.removed, b.removed);
}

TEST(Redundancy, ThresholdOneMatchesPerfectCorrelationCount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto mb = clustered(seed, 10 + seed % 15);
    const auto r = mfe::redundancy_filter(mb, 1.0);
    EXPECT_EQ(r.removed.size(), perfectly_redundant(mb)) << "seed " << seed;
  }
}

TEST(Redundancy, ProportionGrowsAsThresholdDrops) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto mb = clustered(100 + seed, 20);
    double last = -1.0;
    for (double t : {1.0, 0.99, 0.95, 0.9, 0.8, 0.7, 0.5}) {
      const double p = mfe::redundancy_filter(mb, t).proportion_removed();
      EXPECT_GE(p, last) << "seed " << seed << " threshold " << t;
      last = p;
    }
  }
}

TEST(Redundancy, KeptAndRemovedPartitionFeatures) {
  const auto mb = clustered(7, 15);
  const auto r = mfe::redundancy_filter(mb, 0.8);
  EXPECT_EQ(r.kept.size() + r.removed.size() + r.constant.size(), mb.features.size());
  const auto corr = mfe::correlation_matrix(mb, [&] {
    std::vector<std::size_t> all(mb.features.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }());
  auto index = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(corr.features.begin(), corr.features.end(), name) - corr.features.begin());
  };
  for (const auto& [gone, keeper] : r.removed) EXPECT_GE(corr.at(index(gone), index(keeper)), 0.8 - 1e-12);
  for (std::size_t i = 0; i < r.kept.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_LT(corr.at(index(r.kept[i]), index(r.kept[j])), 0.8 - 1e-12);
  }
  const auto json = mfe::to_json(r);
  EXPECT_EQ(json["removed"].size(), r.removed.size());
  std::ostringstream text;
  mfe::write_text(r, text);
  EXPECT_NE(text.str().find("removed"), std::string::npos);
}

TEST(Missing, CountsBySlice) {
  const double nan = std::nan("");
  auto mb = metabase_of({"simple.nrInst", "statistical.cor.mean", "statistical.cor.sd", "landmarking.oneNN.3"},
                        {{1, 2, 3}, {nan, 0.5, nan}, {0.1, nan, 0.2}, {nan, 1, 1}});
  mb.rows[2].error = "failed";
  const auto r = mfe::missing_report(mb);
  EXPECT_EQ(r.error_rows, 1u);
  EXPECT_EQ(r.total.cells, 8u);
  EXPECT_EQ(r.total.missing, 3u);
  EXPECT_EQ(r.by_group.at("statistical").cells, 4u);
  EXPECT_EQ(r.by_group.at("statistical").missing, 2u);
  EXPECT_EQ(r.by_group.at("simple").missing, 0u);
  EXPECT_EQ(r.by_summarizer.at("identity").cells, 2u);
  EXPECT_EQ(r.by_summarizer.at("mean").missing, 1u);
  EXPECT_EQ(r.by_summarizer.at("raw").missing, 1u);
  EXPECT_DOUBLE_EQ(r.total.percent(), 37.5);
  EXPECT_EQ(mfe::to_json(r)["by_group"]["landmarking"]["missing"], 1);
}

TEST(Missing, KeyParts) {
  EXPECT_EQ(mfe::summarizer_of("simple.nrInst"), "identity");
  EXPECT_EQ(mfe::summarizer_of("statistical.cor.histogram.3"), "histogram");
  EXPECT_EQ(mfe::summarizer_of("landmarking.oneNN.0"), "raw");
  EXPECT_EQ(mfe::group_of("infotheo.mutInf.mean"), "infotheo");
}

TEST(Missing, IgnoreScenarioHasMoreMissingCells) {
  std::vector<mfe::MetaFeatureRecord> ignore;
  std::vector<mfe::MetaFeatureRecord> transform;
  mfe::ExtractionConfig ci;
  ci.scenario = mfe::Scenario::ignore;
  ci.groups = {mfe::Group::simple, mfe::Group::statistical, mfe::Group::infotheo};
  mfe::ExtractionConfig ct = ci;
  ct.scenario = mfe::Scenario::transform;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto d = fixture::synthetic(seed, {50, seed % 3 == 0 ? 0u : 2u, seed % 3 == 1 ? 0u : 2u, 2, 1.0});
    ignore.push_back(mfe::run_extraction(d, ci));
    transform.push_back(mfe::run_extraction(d, ct));
  }
  const auto mi = mfe::missing_report(mfe::build_metabase(ignore));
  const auto mt = mfe::missing_report(mfe::build_metabase(transform));
  EXPECT_EQ(mi.total.cells, mt.total.cells);
  EXPECT_GT(mi.total.missing, mt.total.missing);
}

TEST(Timing, SortedAndFlagged) {
  auto mb = metabase_of({"simple.nrInst"}, {{1, 2, 3}});
  mb.rows[0].n = 300;
  mb.rows[1].n = 100;
  mb.rows[2].n = 200;
  mb.rows[2].timing = {std::nan(""), 0.5};
  const auto r = mfe::timing_report(mb);
  EXPECT_EQ(r.columns, (std::vector<std::string>{"simple", "total"}));
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].dataset, "r1");
  EXPECT_EQ(r.rows[1].dataset, "r2");
  EXPECT_TRUE(r.rows[1].flagged);
  EXPECT_FALSE(r.rows[0].flagged);
  EXPECT_DOUBLE_EQ(r.mean[0], 0.01);
  EXPECT_NEAR(r.mean[1], (0.02 + 0.02 + 0.5) / 3.0, 1e-15);
  EXPECT_TRUE(mfe::to_json(r)["rows"][1]["seconds"]["simple"].is_null());
  std::ostringstream text;
  mfe::write_text(r, text);
  EXPECT_NE(text.str().find("r2"), std::string::npos);
}

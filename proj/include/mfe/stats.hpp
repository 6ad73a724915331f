#ifndef MFE_STATS_HPP
#define MFE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace mfe::stats {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double mean(std::span<const double> x) {
  if (x.empty()) return kNaN;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample variance with the n-1 denominator; NaN for fewer than two values.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) return kNaN;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size() - 1);
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

/// Central moment m_j = (1/n) sum (x - mean)^j.
inline double central_moment(std::span<const double> x, int order) {
  if (x.empty()) return kNaN;
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += std::pow(v - m, order);
  return acc / static_cast<double>(x.size());
}

inline std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

/// Quantile by linear interpolation between order statistics
/// (h = (n-1)p, the "type 7" rule). Input must be sorted ascending.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) return kNaN;
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> x, double p) {
  const auto s = sorted_copy(x);
  return quantile_sorted(s, p);
}

inline double median(std::span<const double> x) {
  if (x.empty()) return kNaN;
  auto s = sorted_copy(x);
  const std::size_t r = s.size() / 2;
  return s.size() % 2 == 0 ? 0.5 * (s[r - 1] + s[r]) : s[r];
}

inline bool is_constant(std::span<const double> x) {
  return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
}

/// Skewness m3 / sd^3 (sd with n-1); NaN on constant input.
inline double skewness(std::span<const double> x) {
  if (x.size() < 2 || is_constant(x)) return kNaN;
  return central_moment(x, 3) / std::pow(sd(x), 3);
}

/// Excess kurtosis m4 / sd^4 - 3 (sd with n-1); NaN on constant input.
inline double kurtosis(std::span<const double> x) {
  if (x.size() < 2 || is_constant(x)) return kNaN;
  return central_moment(x, 4) / std::pow(sd(x), 4) - 3.0;
}

inline double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || x.size() != y.size()) return kNaN;
  const double mx = mean(x);
  const double my = mean(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - mx) * (y[i] - my);
  return acc / static_cast<double>(x.size() - 1);
}

/// Pearson correlation; NaN when either side is constant.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || x.size() != y.size()) return kNaN;
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

/// 1-based ranks, ties receive their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) return kNaN;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

/// Kendall tau-b (tie corrected), O(n^2).
inline double kendall(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || x.size() != y.size()) return kNaN;
  double concordant_minus_discordant = 0.0;
  double pairs_x = 0.0;  // pairs not tied in x
  double pairs_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const int sx = (dx > 0) - (dx < 0);
      const int sy = (dy > 0) - (dy < 0);
      concordant_minus_discordant += sx * sy;
      pairs_x += sx != 0;
      pairs_y += sy != 0;
    }
  }
  if (pairs_x == 0.0 || pairs_y == 0.0) return kNaN;
  return std::clamp(concordant_minus_discordant / std::sqrt(pairs_x * pairs_y), -1.0, 1.0);
}

inline std::size_t distinct_count(std::span<const double> x) {
  auto s = sorted_copy(x);
  return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

}  // namespace mfe::stats

#endif  // MFE_STATS_HPP

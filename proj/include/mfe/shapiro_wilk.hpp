#ifndef MFE_SHAPIRO_WILK_HPP
#define MFE_SHAPIRO_WILK_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace mfe {

/// Standard normal quantile, Wichura's AS 241 (PPND16, ~1e-16 accuracy).
inline double normal_quantile(double p) {
  if (p <= 0.0) return -HUGE_VAL;
  if (p >= 1.0) return HUGE_VAL;
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

/// P(Z > z) for a normal with the given mean and standard deviation.
inline double normal_upper_tail(double z, double mean = 0.0, double sd = 1.0) {
  return 0.5 * std::erfc((z - mean) / (sd * std::sqrt(2.0)));
}

struct ShapiroWilkResult {
  double w = 1.0;
  double p_value = 1.0;
};

namespace detail {

inline double poly(std::span<const double> coef, double x) {
  double result = coef[0];
  if (coef.size() > 1) {
    double p = x * coef[coef.size() - 1];
    for (std::size_t j = coef.size() - 2; j > 0; --j) p = (p + coef[j]) * x;
    result += p;
  }
  return result;
}

}  // namespace detail

/// Shapiro-Wilk W test with Royston's (1995) coefficient and p-value
/// approximations (algorithm AS R94). Valid for 3 <= n <= 5000; returns
/// nullopt for fewer than three values or a zero range.
inline std::optional<ShapiroWilkResult> shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3) return std::nullopt;
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (range < 1e-19 * std::max(1.0, std::abs(x.back()))) return std::nullopt;

  static constexpr double g[] = {-2.273, 0.459};
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  std::vector<double> a(half);  // coefficients for the upper half, a[0] largest
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // Full antisymmetric coefficient vector aligned with the sorted sample.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }

  // W as the squared correlation between coefficients and the scaled data.
  double mean_coef = 0.0;
  double mean_x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_coef += coef[i];
    mean_x += x[i] / range;
  }
  mean_coef /= an;
  mean_x /= an;
  double ssa = 0.0;
  double ssx = 0.0;
  double sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - mean_coef;
    const double dx = x[i] / range - mean_x;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double root = std::sqrt(ssa * ssx);
  const double w1 = (root - sax) * (root + sax) / (ssa * ssx);  // 1 - W without cancellation
  ShapiroWilkResult result;
  result.w = 1.0 - w1;

  if (n == 3) {
    constexpr double six_over_pi = 1.90985931710274;
    constexpr double pi_over_three = 1.04719755119660;
    result.p_value = std::max(0.0, six_over_pi * (std::asin(std::sqrt(result.w)) - pi_over_three));
    return result;
  }
  double y = std::log(w1);
  const double log_n = std::log(an);
  double mu = 0.0;
  double sigma = 0.0;
  if (n <= 11) {
    const double gamma = detail::poly(g, an);
    if (y >= gamma) {
      result.p_value = 1e-99;
      return result;
    }
    y = -std::log(gamma - y);
    mu = detail::poly(c3, an);
    sigma = std::exp(detail::poly(c4, an));
  } else {
    mu = detail::poly(c5, log_n);
    sigma = std::exp(detail::poly(c6, log_n));
  }
  result.p_value = normal_upper_tail(y, mu, sigma);
  return result;
}

}  // namespace mfe

#endif  // MFE_SHAPIRO_WILK_HPP

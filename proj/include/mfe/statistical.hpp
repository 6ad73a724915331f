#ifndef MFE_STATISTICAL_HPP
#define MFE_STATISTICAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"
#include "mfe/measure.hpp"
#include "mfe/rng.hpp"
#include "mfe/shapiro_wilk.hpp"
#include "mfe/stats.hpp"

namespace mfe {

enum class CorrelationMethod { pearson, spearman, kendall };

inline std::string_view to_string(CorrelationMethod m) {
  switch (m) {
    case CorrelationMethod::pearson: return "pearson";
    case CorrelationMethod::spearman: return "spearman";
    case CorrelationMethod::kendall: return "kendall";
  }
  return "pearson";
}

namespace detail {

inline std::vector<std::span<const double>> numeric_columns(const Dataset& data) {
  std::vector<std::span<const double>> out;
  for (const auto& c : data.columns()) {
    if (c.is_numeric()) out.push_back(c.values());
  }
  return out;
}

inline Eigen::MatrixXd numeric_matrix(const Dataset& data) {
  const auto cols = numeric_columns(data);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(data.n()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < data.n(); ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  }
  return x;
}

/// Sample covariance (n-1) of the rows of x.
inline Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

/// log|S| for a symmetric positive definite S; nullopt when (numerically) singular.
inline std::optional<double> log_determinant(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return std::nullopt;
  const auto& ev = eig.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  if (!(largest > 0.0) || ev.minCoeff() <= 1e-12 * largest) return std::nullopt;
  return ev.array().log().sum();
}

/// Trimmed mean dropping i = ceil(n*alpha) order statistics at each end.
/// Falls back to the plain mean when nothing would be left.
inline double trimmed_mean(std::span<const double> x, double alpha) {
  auto s = stats::sorted_copy(x);
  const auto n = s.size();
  const auto trim = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * alpha - 1e-9));
  if (2 * trim >= n) return stats::mean(s);
  return stats::mean(std::span<const double>(s).subspan(trim, n - 2 * trim));
}

inline double geometric_mean(std::span<const double> x) {
  double logs = 0.0;
  for (double v : x) {
    if (v <= 0.0) return stats::kNaN;
    logs += std::log(v);
  }
  return std::exp(logs / static_cast<double>(x.size()));
}

/// n / sum(1/x) in IEEE arithmetic: a zero value drives the result to 0,
/// a non-finite outcome is reported as NaN.
inline double harmonic_mean(std::span<const double> x) {
  double inv = 0.0;
  for (double v : x) inv += 1.0 / v;
  const double h = static_cast<double>(x.size()) / inv;
  return std::isfinite(h) ? h : stats::kNaN;
}

inline double median_absolute_deviation(std::span<const double> x) {
  const double med = stats::median(x);
  std::vector<double> dev(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
  return stats::median(dev);
}

/// (1/(n-1)) * (n/phi - 1): 1 for a constant column, 0 when all values differ.
inline double sparsity(std::size_t n, std::size_t distinct) {
  if (n < 2) return stats::kNaN;
  return (static_cast<double>(n) / static_cast<double>(distinct) - 1.0) / static_cast<double>(n - 1);
}

inline bool has_tukey_outlier(std::span<const double> x) {
  const auto s = stats::sorted_copy(x);
  const double q1 = stats::quantile_sorted(s, 0.25);
  const double q3 = stats::quantile_sorted(s, 0.75);
  const double iqr = q3 - q1;
  return s.front() < q1 - 1.5 * iqr || s.back() > q3 + 1.5 * iqr;
}

}  // namespace detail

/// Per-attribute descriptive measures over the numeric columns, plus
/// sparsity over every column. `trim` is the trimmed-mean fraction.
inline std::vector<MeasureResult> extract_descriptive(const Dataset& data, double trim = 0.2) {
  const auto cols = detail::numeric_columns(data);
  std::vector<MeasureResult> out;

  auto per_attribute = [&](const std::string& name, auto&& fn, ExceptionKind kind) {
    if (cols.empty()) {
      out.push_back(MeasureResult::failure(name, ExceptionKind::domain, true));
      return;
    }
    std::vector<double> v;
    v.reserve(cols.size());
    for (auto c : cols) v.push_back(fn(c));
    out.push_back(MeasureResult::multi(name, std::move(v), kind));
  };
  using Span = std::span<const double>;

  per_attribute("gMean", [](Span c) { return detail::geometric_mean(c); }, ExceptionKind::invalid_log);
  if (!cols.empty()) {
    auto& g = out.back();
    for (auto c : cols) g.substitutes.push_back(stats::mean(c));
  }
  per_attribute("hMean", [](Span c) { return detail::harmonic_mean(c); }, ExceptionKind::division_by_zero);
  per_attribute("iqRange", [](Span c) {
    const auto s = stats::sorted_copy(c);
    return stats::quantile_sorted(s, 0.75) - stats::quantile_sorted(s, 0.25);
  }, ExceptionKind::insufficient_data);
  per_attribute("kurtosis", [](Span c) { return stats::kurtosis(c); }, ExceptionKind::constant_values);
  per_attribute("mad", [](Span c) { return detail::median_absolute_deviation(c); }, ExceptionKind::insufficient_data);
  per_attribute("max", [](Span c) { return *std::max_element(c.begin(), c.end()); }, ExceptionKind::insufficient_data);
  per_attribute("mean", [](Span c) { return stats::mean(c); }, ExceptionKind::insufficient_data);
  per_attribute("median", [](Span c) { return stats::median(c); }, ExceptionKind::insufficient_data);
  per_attribute("min", [](Span c) { return *std::min_element(c.begin(), c.end()); }, ExceptionKind::insufficient_data);
  per_attribute("range", [](Span c) {
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    return *hi - *lo;
  }, ExceptionKind::insufficient_data);
  per_attribute("sd", [](Span c) { return stats::sd(c); }, ExceptionKind::insufficient_data);
  per_attribute("skewness", [](Span c) { return stats::skewness(c); }, ExceptionKind::constant_values);
  per_attribute("tMean", [trim](Span c) { return detail::trimmed_mean(c, trim); }, ExceptionKind::insufficient_data);
  per_attribute("var", [](Span c) { return stats::variance(c); }, ExceptionKind::insufficient_data);

  if (data.d() == 0) {
    out.push_back(MeasureResult::failure("sparsity", ExceptionKind::domain, true));
  } else {
    std::vector<double> sp;
    for (const auto& c : data.columns()) sp.push_back(detail::sparsity(data.n(), c.distinct_count()));
    out.push_back(MeasureResult::multi("sparsity", std::move(sp), ExceptionKind::insufficient_data));
  }
  return out;
}

inline double correlation(std::span<const double> x, std::span<const double> y, CorrelationMethod method) {
  switch (method) {
    case CorrelationMethod::pearson: return stats::pearson(x, y);
    case CorrelationMethod::spearman: return stats::spearman(x, y);
    case CorrelationMethod::kendall: return stats::kendall(x, y);
  }
  return stats::kNaN;
}

/// cor and cov (absolute values over unordered numeric pairs, in the order
/// (1,2),(1,3),...,(d-1,d)) and nrCorAttr, the fraction of pairs with
/// |cor| >= tau.
inline std::vector<MeasureResult> extract_correlation(const Dataset& data,
                                                      CorrelationMethod method = CorrelationMethod::pearson,
                                                      double tau = 0.5) {
  const auto cols = detail::numeric_columns(data);
  std::vector<MeasureResult> out;
  if (cols.size() < 2 || data.n() < 2) {
    out.push_back(MeasureResult::failure("cor", ExceptionKind::domain, true));
    out.push_back(MeasureResult::failure("cov", ExceptionKind::domain, true));
    out.push_back(MeasureResult::failure("nrCorAttr", ExceptionKind::domain, false));
    return out;
  }
  std::vector<double> cor;
  std::vector<double> cov;
  double high = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      const double r = std::abs(correlation(cols[i], cols[j], method));
      cor.push_back(r);
      cov.push_back(std::abs(stats::covariance(cols[i], cols[j])));
      if (r >= tau) high += 1.0;
    }
  }
  const auto pairs = static_cast<double>(cor.size());
  out.push_back(MeasureResult::multi("cor", std::move(cor), ExceptionKind::constant_values));
  out.push_back(MeasureResult::multi("cov", std::move(cov)));
  out.push_back(MeasureResult::single("nrCorAttr", high / pairs));
  return out;
}

/// Columns longer than this are subsampled before the normality test.
inline constexpr std::size_t kShapiroWilkMaxSample = 5000;

/// nrNorm (attributes passing Shapiro-Wilk at alpha = 0.05) and nrOutliers
/// (attributes with a value beyond the Tukey fences). With `proportions`,
/// also propNorm and propOutliers (counts divided by the numeric count).
inline std::vector<MeasureResult> extract_distribution_counts(const Dataset& data, std::uint64_t seed = 0,
                                                              bool proportions = false) {
  const auto cols = detail::numeric_columns(data);
  std::vector<MeasureResult> out;
  if (cols.empty()) {
    out.push_back(MeasureResult::failure("nrNorm", ExceptionKind::domain, false));
    out.push_back(MeasureResult::failure("nrOutliers", ExceptionKind::domain, false));
    if (proportions) {
      out.push_back(MeasureResult::failure("propNorm", ExceptionKind::domain, false));
      out.push_back(MeasureResult::failure("propOutliers", ExceptionKind::domain, false));
    }
    return out;
  }
  double normal = 0.0;
  double outliers = 0.0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    auto col = cols[j];
    std::optional<ShapiroWilkResult> sw;
    if (col.size() > kShapiroWilkMaxSample) {
      std::vector<std::size_t> idx(col.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      Rng rng(seed + j);
      rng.shuffle(idx);
      std::vector<double> sample;
      sample.reserve(kShapiroWilkMaxSample);
      for (std::size_t i = 0; i < kShapiroWilkMaxSample; ++i) sample.push_back(col[idx[i]]);
      sw = shapiro_wilk(sample);
    } else {
      sw = shapiro_wilk(col);
    }
    if (sw && sw->p_value > 0.05) normal += 1.0;
    if (detail::has_tukey_outlier(col)) outliers += 1.0;
  }
  out.push_back(MeasureResult::single("nrNorm", normal));
  out.push_back(MeasureResult::single("nrOutliers", outliers));
  if (proportions) {
    const auto d = static_cast<double>(cols.size());
    out.push_back(MeasureResult::single("propNorm", normal / d));
    out.push_back(MeasureResult::single("propOutliers", outliers / d));
  }
  return out;
}

/// Eigenvalues of W^{-1}B (within-class and between-class scatter),
/// descending, restricted to the z discriminant functions found.
struct DiscriminantBasis {
  std::vector<double> eigenvalues;
  std::size_t rank() const { return eigenvalues.size(); }
  /// rho_i = sqrt(lambda_i / (1 + lambda_i))
  std::vector<double> canonical_correlations() const {
    std::vector<double> rho;
    for (double l : eigenvalues) rho.push_back(std::sqrt(l / (1.0 + l)));
    return rho;
  }
  double wilks_lambda() const {
    double w = 1.0;
    for (double l : eigenvalues) w *= 1.0 / (1.0 + l);
    return w;
  }
};

/// Eigenvalues below this count as absent discriminant functions.
inline constexpr double kDiscriminantTolerance = 1e-9;

inline std::optional<DiscriminantBasis> discriminant_basis(const Dataset& data) {
  const Eigen::MatrixXd x = detail::numeric_matrix(data);
  const Eigen::Index p = x.cols();
  if (p == 0) return std::nullopt;
  const auto counts = data.class_counts();
  const std::size_t present = static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
  if (present < 2) return std::nullopt;

  const Eigen::RowVectorXd grand = x.colwise().mean();
  Eigen::MatrixXd class_means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.q()), p);
  const auto labels = data.labels();
  for (std::size_t i = 0; i < data.n(); ++i) class_means.row(labels[i]) += x.row(static_cast<Eigen::Index>(i));
  for (std::size_t c = 0; c < data.q(); ++c) {
    if (counts[c] > 0) class_means.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const Eigen::RowVectorXd dev = x.row(static_cast<Eigen::Index>(i)) - class_means.row(labels[i]);
    within.noalias() += dev.transpose() * dev;
  }
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t c = 0; c < data.q(); ++c) {
    if (counts[c] == 0) continue;
    const Eigen::RowVectorXd dev = class_means.row(static_cast<Eigen::Index>(c)) - grand;
    between.noalias() += static_cast<double>(counts[c]) * dev.transpose() * dev;
  }

  // Ridge the within-class scatter when it is not safely positive definite.
  const double trace = within.trace();
  Eigen::LLT<Eigen::MatrixXd> llt(within);
  bool singular = llt.info() != Eigen::Success;
  if (!singular) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> wev(within, Eigen::EigenvaluesOnly);
    singular = wev.eigenvalues().minCoeff() <= 1e-12 * std::max(trace, 1e-300);
  }
  if (singular) {
    const double ridge = trace > 0.0 ? 1e-10 * trace / static_cast<double>(p) : 1e-10;
    within.diagonal().array() += ridge;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, within, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return std::nullopt;

  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + p);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  const std::size_t max_rank = std::min<std::size_t>(present - 1, static_cast<std::size_t>(p));
  DiscriminantBasis basis;
  for (double l : ev) {
    if (basis.eigenvalues.size() >= max_rank || !(l > kDiscriminantTolerance)) break;
    basis.eigenvalues.push_back(l);
  }
  return basis;
}

/// Eigenvalues of the covariance matrix of the numeric columns, descending.
inline MeasureResult covariance_eigenvalues(const Dataset& data) {
  const Eigen::MatrixXd x = detail::numeric_matrix(data);
  if (x.cols() == 0) return MeasureResult::failure("eigenvalues", ExceptionKind::domain, true);
  if (x.rows() < 2) return MeasureResult::failure("eigenvalues", ExceptionKind::insufficient_data, true);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(detail::covariance_matrix(x), Eigen::EigenvaluesOnly);
  std::vector<double> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + x.cols());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return MeasureResult::multi("eigenvalues", std::move(ev));
}

/// Box's M based statistic exp(M / (d * sum(n_i - 1))) for homogeneity of
/// the per-class covariance matrices. Fails when any covariance is singular.
inline MeasureResult sd_ratio(const Dataset& data) {
  const Eigen::MatrixXd x = detail::numeric_matrix(data);
  const Eigen::Index p = x.cols();
  if (p == 0) return MeasureResult::failure("sdRatio", ExceptionKind::domain, false);
  const auto counts = data.class_counts();
  const auto labels = data.labels();
  std::vector<Eigen::MatrixXd> class_cov;
  std::vector<double> dof;
  for (std::size_t c = 0; c < data.q(); ++c) {
    if (counts[c] == 0) continue;
    if (counts[c] < 2) return MeasureResult::failure("sdRatio", ExceptionKind::singular_matrix, false);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(counts[c]), p);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      if (static_cast<std::size_t>(labels[i]) == c) rows.row(r++) = x.row(static_cast<Eigen::Index>(i));
    }
    class_cov.push_back(detail::covariance_matrix(rows));
    dof.push_back(static_cast<double>(counts[c] - 1));
  }
  const auto q = static_cast<double>(class_cov.size());
  const auto n = static_cast<double>(data.n());
  if (q < 2) return MeasureResult::failure("sdRatio", ExceptionKind::insufficient_data, false);

  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < class_cov.size(); ++i) pooled += dof[i] * class_cov[i];
  pooled /= (n - q);
  const auto log_pooled = detail::log_determinant(pooled);
  if (!log_pooled) return MeasureResult::failure("sdRatio", ExceptionKind::singular_matrix, false);

  const auto d = static_cast<double>(p);
  double inv_dof = 0.0;
  double total_dof = 0.0;
  double log_ratio = 0.0;
  for (std::size_t i = 0; i < class_cov.size(); ++i) {
    const auto log_class = detail::log_determinant(class_cov[i]);
    if (!log_class) return MeasureResult::failure("sdRatio", ExceptionKind::singular_matrix, false);
    // log|S_i^{-1} S| = log|S| - log|S_i|
    log_ratio += dof[i] * (*log_pooled - *log_class);
    inv_dof += 1.0 / dof[i];
    total_dof += dof[i];
  }
  const double gamma = 1.0 - (2.0 * d * d + 3.0 * d - 1.0) / (6.0 * (d + 1.0) * (q - 1.0)) * (inv_dof - 1.0 / (n - q));
  const double m = gamma * log_ratio;
  const double value = std::exp(m / (d * total_dof));
  if (!std::isfinite(value)) return MeasureResult::failure("sdRatio", ExceptionKind::invalid_log, false);
  return MeasureResult::single("sdRatio", value);
}

/// Euclidean distance between the majority-class and minority-class
/// centroids. The minority class is picked among the remaining classes;
/// ties go to the lowest class index.
inline MeasureResult gravity(const Dataset& data) {
  const Eigen::MatrixXd x = detail::numeric_matrix(data);
  if (x.cols() == 0) return MeasureResult::failure("gravity", ExceptionKind::domain, false);
  const auto counts = data.class_counts();
  std::optional<std::size_t> major;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0 && (!major || counts[c] > counts[*major])) major = c;
  }
  std::optional<std::size_t> minor;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (c == major || counts[c] == 0) continue;
    if (!minor || counts[c] < counts[*minor]) minor = c;
  }
  if (!major || !minor) return MeasureResult::failure("gravity", ExceptionKind::insufficient_data, false);
  Eigen::RowVectorXd ma = Eigen::RowVectorXd::Zero(x.cols());
  Eigen::RowVectorXd mi = Eigen::RowVectorXd::Zero(x.cols());
  const auto labels = data.labels();
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    if (y == *major) ma += x.row(static_cast<Eigen::Index>(i));
    if (y == *minor) mi += x.row(static_cast<Eigen::Index>(i));
  }
  ma /= static_cast<double>(counts[*major]);
  mi /= static_cast<double>(counts[*minor]);
  return MeasureResult::single("gravity", (ma - mi).norm());
}

/// canCor, gravity, nrDisc, sdRatio, wLambda and the covariance eigenvalues.
inline std::vector<MeasureResult> extract_discriminant(const Dataset& data) {
  std::vector<MeasureResult> out;
  const auto basis = discriminant_basis(data);
  const ExceptionKind why = detail::numeric_columns(data).empty() ? ExceptionKind::domain : ExceptionKind::insufficient_data;
  if (basis && basis->rank() > 0) {
    out.push_back(MeasureResult::multi("canCor", basis->canonical_correlations()));
  } else {
    out.push_back(MeasureResult::failure("canCor", why, true));
  }
  out.push_back(gravity(data));
  if (basis) {
    out.push_back(MeasureResult::single("nrDisc", static_cast<double>(basis->rank())));
  } else {
    out.push_back(MeasureResult::failure("nrDisc", why, false));
  }
  out.push_back(sd_ratio(data));
  if (basis) {
    out.push_back(MeasureResult::single("wLambda", basis->wilks_lambda()));
  } else {
    out.push_back(MeasureResult::failure("wLambda", why, false));
  }
  out.push_back(covariance_eigenvalues(data));
  return out;
}

}  // namespace mfe

#endif  // MFE_STATISTICAL_HPP

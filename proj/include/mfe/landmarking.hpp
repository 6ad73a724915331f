#ifndef MFE_LANDMARKING_HPP
#define MFE_LANDMARKING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"
#include "mfe/measure.hpp"
#include "mfe/rng.hpp"
#include "mfe/stats.hpp"
#include "mfe/tree.hpp"

namespace mfe {

enum class ScoreMetric { accuracy, balanced_accuracy, kappa };

inline std::string_view to_string(ScoreMetric m) {
  switch (m) {
    case ScoreMetric::accuracy: return "accuracy";
    case ScoreMetric::balanced_accuracy: return "balanced_accuracy";
    case ScoreMetric::kappa: return "kappa";
  }
  return "accuracy";
}

/// Stratified assignment of instances to cross-validation folds.
struct FoldPlan {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fold_of;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] == fold) rows.push_back(i);
    }
    return rows;
  }

  std::vector<std::size_t> train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != fold) rows.push_back(i);
    }
    return rows;
  }
};

/// Each class's instances are shuffled with the seed and dealt round-robin
/// into the folds; the dealing position carries over from one class to the
/// next so fold sizes stay balanced too.
inline FoldPlan make_folds(const Dataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (k > data.n()) {
    throw ConfigError("cannot make " + std::to_string(k) + " folds from " + std::to_string(data.n()) + " instances");
  }
  FoldPlan plan;
  plan.folds = k;
  plan.seed = seed;
  plan.fold_of.assign(data.n(), 0);
  std::vector<std::vector<std::size_t>> by_class(data.q());
  for (std::size_t i = 0; i < data.n(); ++i) by_class[static_cast<std::size_t>(data.labels()[i])].push_back(i);
  Rng rng(seed);
  std::size_t position = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < k) {
      plan.warnings.push_back("class '" + data.target().levels()[c] + "' has " + std::to_string(rows.size()) +
                              " instances, fewer than " + std::to_string(k) + " folds");
    }
    rng.shuffle(rows);
    for (auto r : rows) plan.fold_of[r] = position++ % k;
  }
  return plan;
}

/// accuracy, balanced accuracy (mean recall over the classes present in
/// `truths`) or Cohen's kappa. Kappa is 0 when chance agreement is 1.
inline double score(std::span<const int> predictions, std::span<const int> truths, ScoreMetric metric) {
  if (predictions.size() != truths.size() || truths.empty()) {
    throw ConfigError("score needs equally sized, non-empty prediction and truth vectors");
  }
  const auto n = static_cast<double>(truths.size());
  int classes = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) classes = std::max({classes, truths[i] + 1, predictions[i] + 1});
  std::vector<double> hit(static_cast<std::size_t>(classes), 0.0);
  std::vector<double> truth_count(static_cast<std::size_t>(classes), 0.0);
  std::vector<double> pred_count(static_cast<std::size_t>(classes), 0.0);
  double correct = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    truth_count[static_cast<std::size_t>(truths[i])] += 1.0;
    pred_count[static_cast<std::size_t>(predictions[i])] += 1.0;
    if (predictions[i] == truths[i]) {
      correct += 1.0;
      hit[static_cast<std::size_t>(truths[i])] += 1.0;
    }
  }
  switch (metric) {
    case ScoreMetric::accuracy: return correct / n;
    case ScoreMetric::balanced_accuracy: {
      double recall = 0.0;
      double present = 0.0;
      for (std::size_t c = 0; c < hit.size(); ++c) {
        if (truth_count[c] > 0.0) {
          recall += hit[c] / truth_count[c];
          present += 1.0;
        }
      }
      return recall / present;
    }
    case ScoreMetric::kappa: {
      const double observed = correct / n;
      double chance = 0.0;
      for (std::size_t c = 0; c < hit.size(); ++c) chance += (truth_count[c] / n) * (pred_count[c] / n);
      if (chance >= 1.0) return 0.0;
      return (observed - chance) / (1.0 - chance);
    }
  }
  return stats::kNaN;
}

struct LandmarkingConfig {
  std::size_t folds = 10;
  ScoreMetric metric = ScoreMetric::accuracy;
  std::uint64_t seed = 0;
};

namespace detail {

/// Row-major feature matrix plus, per original attribute, its column range.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::pair<std::size_t, std::size_t>> attribute_columns;  // [begin, end)

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// One-hot (present levels) plus min-max scaling over the whole dataset.
inline FeatureMatrix scaled_one_hot(const Dataset& data) {
  std::vector<std::vector<double>> columns;
  FeatureMatrix m;
  for (const auto& col : data.columns()) {
    const std::size_t begin = columns.size();
    if (col.is_numeric()) {
      const auto v = col.values();
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      const double span = *hi - *lo;
      std::vector<double> scaled(v.size(), 0.0);
      if (span > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = (v[i] - *lo) / span;
      }
      columns.push_back(std::move(scaled));
    } else {
      std::vector<char> present(col.level_count(), 0);
      for (int c : col.codes()) present[static_cast<std::size_t>(c)] = 1;
      for (std::size_t level = 0; level < col.level_count(); ++level) {
        if (!present[level]) continue;
        std::vector<double> ind(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) ind[i] = col.codes()[i] == static_cast<int>(level) ? 1.0 : 0.0;
        columns.push_back(std::move(ind));
      }
    }
    m.attribute_columns.emplace_back(begin, columns.size());
  }
  m.rows = data.n();
  m.cols = columns.size();
  m.values.resize(m.rows * m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    for (std::size_t r = 0; r < m.rows; ++r) m.values[r * m.cols + c] = columns[c][r];
  }
  return m;
}

/// Numeric view for the linear discriminant: numeric columns as-is and
/// treatment coding (first present level dropped) for categorical columns.
inline Eigen::MatrixXd dummy_coded(const Dataset& data) {
  std::vector<std::vector<double>> columns;
  for (const auto& col : data.columns()) {
    if (col.is_numeric()) {
      columns.emplace_back(col.values().begin(), col.values().end());
      continue;
    }
    std::vector<char> present(col.level_count(), 0);
    for (int c : col.codes()) present[static_cast<std::size_t>(c)] = 1;
    bool first = true;
    for (std::size_t level = 0; level < col.level_count(); ++level) {
      if (!present[level]) continue;
      if (first) {
        first = false;
        continue;
      }
      std::vector<double> ind(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) ind[i] = col.codes()[i] == static_cast<int>(level) ? 1.0 : 0.0;
      columns.push_back(std::move(ind));
    }
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(data.n()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < data.n(); ++r) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = columns[c][r];
  }
  return x;
}

/// 1-nearest-neighbour over the selected feature columns; ties go to the
/// lowest training index.
inline std::vector<int> predict_one_nn(const FeatureMatrix& m, std::span<const int> labels,
                                       std::span<const std::size_t> train, std::span<const std::size_t> test,
                                       std::span<const std::size_t> features) {
  std::vector<int> out;
  out.reserve(test.size());
  for (auto t : test) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_row = train.front();
    for (auto r : train) {
      double dist = 0.0;
      for (auto c : features) {
        const double diff = m.at(t, c) - m.at(r, c);
        dist += diff * diff;
      }
      if (dist < best || (dist == best && r < best_row)) {
        best = dist;
        best_row = r;
      }
    }
    out.push_back(labels[best_row]);
  }
  return out;
}

/// Gaussian likelihoods for numeric attributes (variance floored at 1e-9
/// times the largest variance), Laplace-smoothed (alpha = 1) frequencies for
/// categorical ones, priors from the training rows.
inline std::vector<int> predict_naive_bayes(const Dataset& data, std::span<const std::size_t> train,
                                            std::span<const std::size_t> test) {
  const std::size_t q = data.q();
  const auto labels = data.labels();
  std::vector<double> class_n(q, 0.0);
  for (auto r : train) class_n[static_cast<std::size_t>(labels[r])] += 1.0;

  struct Gaussian {
    std::vector<double> mean, var;
  };
  std::vector<Gaussian> gauss(data.d());
  std::vector<std::vector<double>> log_freq(data.d());  // [class * levels + level]
  double max_var = 0.0;
  for (std::size_t a = 0; a < data.d(); ++a) {
    const Column& col = data.column(a);
    if (col.is_numeric()) {
      auto& g = gauss[a];
      g.mean.assign(q, 0.0);
      g.var.assign(q, 0.0);
      for (auto r : train) g.mean[static_cast<std::size_t>(labels[r])] += col.values()[r];
      for (std::size_t c = 0; c < q; ++c) {
        if (class_n[c] > 0) g.mean[c] /= class_n[c];
      }
      for (auto r : train) {
        const auto c = static_cast<std::size_t>(labels[r]);
        const double dev = col.values()[r] - g.mean[c];
        g.var[c] += dev * dev;
      }
      for (std::size_t c = 0; c < q; ++c) {
        if (class_n[c] > 0) g.var[c] /= class_n[c];
        max_var = std::max(max_var, g.var[c]);
      }
    } else {
      const std::size_t levels = col.level_count();
      std::vector<double> counts(q * levels, 0.0);
      for (auto r : train) {
        counts[static_cast<std::size_t>(labels[r]) * levels + static_cast<std::size_t>(col.codes()[r])] += 1.0;
      }
      auto& lf = log_freq[a];
      lf.resize(q * levels);
      for (std::size_t c = 0; c < q; ++c) {
        for (std::size_t l = 0; l < levels; ++l) {
          lf[c * levels + l] = std::log((counts[c * levels + l] + 1.0) / (class_n[c] + static_cast<double>(levels)));
        }
      }
    }
  }
  const double floor = max_var > 0.0 ? 1e-9 * max_var : 1e-9;
  const auto n_train = static_cast<double>(train.size());

  std::vector<int> out;
  out.reserve(test.size());
  for (auto t : test) {
    double best = -std::numeric_limits<double>::infinity();
    int best_class = -1;
    for (std::size_t c = 0; c < q; ++c) {
      if (class_n[c] == 0) continue;
      double ll = std::log(class_n[c] / n_train);
      for (std::size_t a = 0; a < data.d(); ++a) {
        const Column& col = data.column(a);
        if (col.is_numeric()) {
          const double var = gauss[a].var[c] + floor;
          const double dev = col.values()[t] - gauss[a].mean[c];
          ll += -0.5 * std::log(2.0 * 3.14159265358979323846 * var) - dev * dev / (2.0 * var);
        } else {
          ll += log_freq[a][c * col.level_count() + static_cast<std::size_t>(col.codes()[t])];
        }
      }
      if (ll > best) {
        best = ll;
        best_class = static_cast<int>(c);
      }
    }
    out.push_back(best_class);
  }
  return out;
}

/// Pooled-covariance linear discriminant. nullopt when the pooled
/// covariance (checked in correlation scale) is singular.
inline std::optional<std::vector<int>> predict_linear_discriminant(const Eigen::MatrixXd& x, std::span<const int> labels,
                                                                   std::size_t q, std::span<const std::size_t> train,
                                                                   std::span<const std::size_t> test) {
  const Eigen::Index p = x.cols();
  if (p == 0) return std::nullopt;
  std::vector<double> class_n(q, 0.0);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q), p);
  for (auto r : train) {
    const auto c = static_cast<std::size_t>(labels[r]);
    class_n[c] += 1.0;
    means.row(static_cast<Eigen::Index>(c)) += x.row(static_cast<Eigen::Index>(r));
  }
  std::size_t present = 0;
  for (std::size_t c = 0; c < q; ++c) {
    if (class_n[c] > 0) {
      means.row(static_cast<Eigen::Index>(c)) /= class_n[c];
      ++present;
    }
  }
  const double dof = static_cast<double>(train.size()) - static_cast<double>(present);
  if (dof <= 0.0) return std::nullopt;
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(p, p);
  for (auto r : train) {
    const Eigen::RowVectorXd dev = x.row(static_cast<Eigen::Index>(r)) - means.row(labels[r]);
    pooled.noalias() += dev.transpose() * dev;
  }
  pooled /= dof;

  const Eigen::VectorXd diag = pooled.diagonal();
  if ((diag.array() <= 0.0).any()) return std::nullopt;
  const Eigen::VectorXd inv_sd = diag.array().sqrt().inverse();
  const Eigen::MatrixXd corr = inv_sd.asDiagonal() * pooled * inv_sd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-10) return std::nullopt;

  const Eigen::LDLT<Eigen::MatrixXd> solver(pooled);
  const Eigen::MatrixXd weights = solver.solve(means.transpose());  // p x q
  const auto n_train = static_cast<double>(train.size());
  std::vector<double> bias(q, 0.0);
  for (std::size_t c = 0; c < q; ++c) {
    if (class_n[c] == 0) continue;
    bias[c] = -0.5 * means.row(static_cast<Eigen::Index>(c)).dot(weights.col(static_cast<Eigen::Index>(c))) +
              std::log(class_n[c] / n_train);
  }
  std::vector<int> out;
  out.reserve(test.size());
  for (auto t : test) {
    double best = -std::numeric_limits<double>::infinity();
    int best_class = -1;
    for (std::size_t c = 0; c < q; ++c) {
      if (class_n[c] == 0) continue;
      const double s = x.row(static_cast<Eigen::Index>(t)).dot(weights.col(static_cast<Eigen::Index>(c))) + bias[c];
      if (s > best) {
        best = s;
        best_class = static_cast<int>(c);
      }
    }
    out.push_back(best_class);
  }
  return out;
}

inline std::vector<int> truths_of(const Dataset& data, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(data.labels()[r]);
  return out;
}

}  // namespace detail

/// Indices of the attributes used by bestNode, worstNode and eliteNN.
struct LandmarkAttributes {
  std::size_t best = 0;
  std::size_t worst = 0;
  std::size_t random = 0;
  std::vector<std::size_t> elite;
};

/// best/worst: max/min importance, lowest index on ties. elite: importance
/// strictly above the mean, or the best attribute when none is.
inline LandmarkAttributes choose_landmark_attributes(std::span<const double> importance, std::uint64_t seed) {
  LandmarkAttributes out;
  const std::size_t d = importance.size();
  for (std::size_t a = 1; a < d; ++a) {
    if (importance[a] > importance[out.best]) out.best = a;
    if (importance[a] < importance[out.worst]) out.worst = a;
  }
  const double mean = stats::mean(importance);
  for (std::size_t a = 0; a < d; ++a) {
    if (importance[a] > mean) out.elite.push_back(a);
  }
  if (out.elite.empty()) out.elite.push_back(out.best);
  Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
  out.random = static_cast<std::size_t>(rng.below(d));
  return out;
}

/// Cross-validated scores of seven simple learners, one value per fold.
/// `importance` is the per-attribute varImportance used to choose the
/// landmark attributes; when absent it comes from a CART tree on `data`.
inline std::vector<MeasureResult> extract_landmarking(const Dataset& data, const LandmarkingConfig& config,
                                                      std::optional<std::vector<double>> importance = std::nullopt) {
  static constexpr const char* kNames[] = {"bestNode", "eliteNN", "linearDiscr", "naiveBayes",
                                           "oneNN",    "randomNode", "worstNode"};
  std::vector<MeasureResult> out;
  if (data.d() == 0) {
    for (const char* name : kNames) out.push_back(MeasureResult::failure(name, ExceptionKind::domain, true));
    return out;
  }
  if (!importance) importance = induce_cart(data, config.seed).importance();
  const auto chosen = choose_landmark_attributes(*importance, config.seed);
  const auto plan = make_folds(data, config.folds, config.seed);
  const auto features = detail::scaled_one_hot(data);
  const Eigen::MatrixXd numeric_view = detail::dummy_coded(data);

  std::vector<std::size_t> all_features(features.cols);
  std::iota(all_features.begin(), all_features.end(), std::size_t{0});
  std::vector<std::size_t> elite_features;
  for (auto a : chosen.elite) {
    for (auto c = features.attribute_columns[a].first; c < features.attribute_columns[a].second; ++c) {
      elite_features.push_back(c);
    }
  }

  std::vector<std::vector<double>> scores(std::size(kNames));
  for (std::size_t fold = 0; fold < plan.folds; ++fold) {
    const auto train = plan.train_rows(fold);
    const auto test = plan.test_rows(fold);
    const auto truth = detail::truths_of(data, test);
    auto stump_score = [&](std::size_t attribute) {
      const std::size_t attrs[] = {attribute};
      const auto stump = induce_cart(data, train, attrs, TreeParams::stump());
      std::vector<int> pred;
      pred.reserve(test.size());
      for (auto t : test) pred.push_back(stump.predict(data, t));
      return score(pred, truth, config.metric);
    };
    scores[0].push_back(stump_score(chosen.best));
    scores[1].push_back(score(detail::predict_one_nn(features, data.labels(), train, test, elite_features), truth, config.metric));
    const auto lda = detail::predict_linear_discriminant(numeric_view, data.labels(), data.q(), train, test);
    if (lda) {
      scores[2].push_back(score(*lda, truth, config.metric));
    } else {
      scores[2].push_back(stats::kNaN);
    }
    scores[3].push_back(score(detail::predict_naive_bayes(data, train, test), truth, config.metric));
    scores[4].push_back(score(detail::predict_one_nn(features, data.labels(), train, test, all_features), truth, config.metric));
    scores[5].push_back(stump_score(chosen.random));
    scores[6].push_back(stump_score(chosen.worst));
  }
  for (std::size_t m = 0; m < std::size(kNames); ++m) {
    out.push_back(MeasureResult::multi(kNames[m], std::move(scores[m]), ExceptionKind::singular_matrix));
  }
  return out;
}

}  // namespace mfe

#endif  // MFE_LANDMARKING_HPP

#ifndef MFE_INFOTHEO_HPP
#define MFE_INFOTHEO_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/measure.hpp"
#include "mfe/stats.hpp"

namespace mfe {

namespace detail {

inline double entropy_of_counts(std::span<const double> counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

/// Joint frequency table of two code vectors, row-major [x][y].
struct Contingency {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> counts;
  double total = 0.0;

  Contingency(std::span<const int> x, std::size_t x_levels, std::span<const int> y, std::size_t y_levels)
      : rows(x_levels), cols(y_levels), counts(x_levels * y_levels, 0.0), total(static_cast<double>(x.size())) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      counts[static_cast<std::size_t>(x[i]) * cols + static_cast<std::size_t>(y[i])] += 1.0;
    }
  }
  double at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

}  // namespace detail

/// Shannon entropy (bits) of a categorical column.
inline double entropy(std::span<const int> codes, std::size_t levels) {
  std::vector<double> counts(levels, 0.0);
  for (int c : codes) counts[static_cast<std::size_t>(c)] += 1.0;
  return detail::entropy_of_counts(counts, static_cast<double>(codes.size()));
}

inline double entropy(const Column& column) { return entropy(column.codes(), column.level_count()); }

inline double joint_entropy(const Column& x, const Column& y) {
  const detail::Contingency table(x.codes(), x.level_count(), y.codes(), y.level_count());
  return detail::entropy_of_counts(table.counts, table.total);
}

inline double mutual_information(const Column& x, const Column& y) {
  return entropy(x) + entropy(y) - joint_entropy(x, y);
}

/// Goodman-Kruskal tau of predicting y from x. Asymmetric. NaN when y is
/// constant (zero denominator).
inline double concentration(std::span<const int> x, std::size_t x_levels, std::span<const int> y,
                            std::size_t y_levels) {
  const detail::Contingency table(x, x_levels, y, y_levels);
  std::vector<double> row(table.rows, 0.0);
  std::vector<double> col(table.cols, 0.0);
  for (std::size_t i = 0; i < table.rows; ++i) {
    for (std::size_t j = 0; j < table.cols; ++j) {
      const double pij = table.at(i, j) / table.total;
      row[i] += pij;
      col[j] += pij;
    }
  }
  double explained = 0.0;
  for (std::size_t i = 0; i < table.rows; ++i) {
    if (row[i] <= 0.0) continue;
    for (std::size_t j = 0; j < table.cols; ++j) {
      const double pij = table.at(i, j) / table.total;
      explained += pij * pij / row[i];
    }
  }
  double col_sq = 0.0;
  for (double p : col) col_sq += p * p;
  const double denom = 1.0 - col_sq;
  if (denom <= 1e-15) return stats::kNaN;
  return (explained - col_sq) / denom;
}

inline double concentration(const Column& x, const Column& y) {
  return concentration(x.codes(), x.level_count(), y.codes(), y.level_count());
}

/// Mean mutual information at or below this is treated as zero.
inline constexpr double kInformationTolerance = 1e-12;

/// Information-theoretic measures over the categorical columns.
inline std::vector<MeasureResult> extract_infotheo(const Dataset& data) {
  std::vector<const Column*> cols;
  for (const auto& c : data.columns()) {
    if (c.is_categorical()) cols.push_back(&c);
  }
  std::vector<MeasureResult> out;
  if (cols.empty()) {
    for (const char* name : {"attrConc", "attrEnt", "classConc", "classEnt", "eqNumAttr", "jointEnt", "mutInf", "nsRatio"}) {
      const bool multi = std::string_view(name) != "classEnt" && std::string_view(name) != "eqNumAttr" &&
                         std::string_view(name) != "nsRatio";
      out.push_back(MeasureResult::failure(name, ExceptionKind::domain, multi));
    }
    return out;
  }
  const Column& y = data.target();
  const double class_ent = entropy(y);

  std::vector<double> attr_ent;
  std::vector<double> joint_ent;
  std::vector<double> mut_inf;
  std::vector<double> class_conc;
  for (const Column* c : cols) {
    const double h = entropy(*c);
    const double hj = joint_entropy(*c, y);
    attr_ent.push_back(h);
    joint_ent.push_back(hj);
    mut_inf.push_back(std::max(0.0, h + class_ent - hj));
    class_conc.push_back(concentration(*c, y));
  }

  std::vector<double> attr_conc;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      attr_conc.push_back(concentration(*cols[i], *cols[j]));
      attr_conc.push_back(concentration(*cols[j], *cols[i]));
    }
  }

  const double mean_ent = stats::mean(attr_ent);
  const double mean_mi = stats::mean(mut_inf);

  if (attr_conc.empty()) {
    out.push_back(MeasureResult::failure("attrConc", ExceptionKind::insufficient_data, true));
  } else {
    out.push_back(MeasureResult::multi("attrConc", std::move(attr_conc), ExceptionKind::constant_values));
  }
  out.push_back(MeasureResult::multi("attrEnt", std::move(attr_ent)));
  out.push_back(MeasureResult::multi("classConc", std::move(class_conc), ExceptionKind::constant_values));
  out.push_back(MeasureResult::single("classEnt", class_ent));
  if (mean_mi > kInformationTolerance) {
    out.push_back(MeasureResult::single("eqNumAttr", class_ent / mean_mi));
  } else {
    out.push_back(MeasureResult::failure("eqNumAttr", ExceptionKind::division_by_zero, false));
  }
  out.push_back(MeasureResult::multi("jointEnt", std::move(joint_ent)));
  out.push_back(MeasureResult::multi("mutInf", std::move(mut_inf)));
  if (mean_mi > kInformationTolerance) {
    out.push_back(MeasureResult::single("nsRatio", (mean_ent - mean_mi) / mean_mi));
  } else {
    out.push_back(MeasureResult::failure("nsRatio", ExceptionKind::division_by_zero, false));
  }
  return out;
}

}  // namespace mfe

#endif  // MFE_INFOTHEO_HPP

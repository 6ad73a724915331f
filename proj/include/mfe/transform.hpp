#ifndef MFE_TRANSFORM_HPP
#define MFE_TRANSFORM_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"

namespace mfe {

/// One-hot encodes every categorical predictive column in place: a column
/// with levels {l_1..l_k} becomes k numeric 0/1 columns named "<name>_<l_i>".
/// Only levels present in the data are expanded.
inline Dataset binarize(const Dataset& data) {
  std::vector<Column> out;
  out.reserve(data.d());
  for (const auto& col : data.columns()) {
    if (col.is_numeric()) {
      out.push_back(col);
      continue;
    }
    std::vector<char> present(col.level_count(), 0);
    for (int code : col.codes()) present[static_cast<std::size_t>(code)] = 1;
    for (std::size_t level = 0; level < col.level_count(); ++level) {
      if (!present[level]) continue;
      std::vector<double> indicator(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) indicator[i] = col.codes()[i] == static_cast<int>(level) ? 1.0 : 0.0;
      out.push_back(Column::numeric(col.name() + "_" + col.levels()[level], std::move(indicator)));
    }
  }
  return data.with_columns(std::move(out));
}

enum class BinningMethod { equal_frequency, equal_width };

/// Number of bins used when discretizing n values with the automatic rule.
inline std::size_t auto_bin_count(std::size_t n) {
  const auto bins = static_cast<std::size_t>(std::llround(std::cbrt(static_cast<double>(n))));
  return std::max<std::size_t>(2, bins);
}

namespace detail {

/// Bin index per value. Equal-frequency cut k is the value at sorted
/// position ceil(k*n/b)-1; a value falls in the first bin whose cut is >= it,
/// so ties at a boundary land in the lower bin.
inline std::vector<int> bin_values(std::span<const double> values, std::size_t bins, BinningMethod method) {
  const std::size_t n = values.size();
  std::vector<double> cuts;
  if (method == BinningMethod::equal_frequency) {
    auto sorted = stats::sorted_copy(values);
    for (std::size_t k = 1; k < bins; ++k) {
      const std::size_t pos = (k * n + bins - 1) / bins;
      cuts.push_back(sorted[pos == 0 ? 0 : pos - 1]);
    }
  } else {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double width = (*hi - *lo) / static_cast<double>(bins);
    for (std::size_t k = 1; k < bins; ++k) cuts.push_back(*lo + width * static_cast<double>(k));
  }
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), values[i]);
    out[i] = static_cast<int>(it - cuts.begin());
  }
  return out;
}

}  // namespace detail

/// Turns every numeric predictive column into a categorical one whose labels
/// are bin indices ("0", "1", ...). bins == nullopt selects max(2, round(n^(1/3))).
inline Dataset discretize(const Dataset& data, std::optional<std::size_t> bins = std::nullopt,
                          BinningMethod method = BinningMethod::equal_frequency) {
  if (bins && *bins < 2) throw ConfigError("discretize needs at least 2 bins");
  const std::size_t b = bins.value_or(auto_bin_count(data.n()));
  std::vector<Column> out;
  out.reserve(data.d());
  for (const auto& col : data.columns()) {
    if (col.is_categorical()) {
      out.push_back(col);
      continue;
    }
    const auto raw = detail::bin_values(col.values(), b, method);
    // Keep only occupied bins in the level list, ordered by bin index.
    std::vector<int> remap(b, -1);
    for (int v : raw) remap[static_cast<std::size_t>(v)] = 0;
    std::vector<std::string> levels;
    for (std::size_t k = 0; k < b; ++k) {
      if (remap[k] == 0) {
        remap[k] = static_cast<int>(levels.size());
        levels.push_back(std::to_string(k));
      }
    }
    std::vector<int> codes(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) codes[i] = remap[static_cast<std::size_t>(raw[i])];
    out.push_back(Column::from_codes(col.name(), std::move(codes), std::move(levels)));
  }
  return data.with_columns(std::move(out));
}

/// Maps each numeric column to (x - min) / (max - min); constant columns
/// become all zeros.
inline Dataset rescale_minmax(const Dataset& data) {
  std::vector<Column> out;
  out.reserve(data.d());
  for (const auto& col : data.columns()) {
    if (col.is_categorical()) {
      out.push_back(col);
      continue;
    }
    const auto values = col.values();
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    std::vector<double> scaled(values.size(), 0.0);
    if (span > 0.0) {
      for (std::size_t i = 0; i < values.size(); ++i) scaled[i] = std::clamp((values[i] - *lo) / span, 0.0, 1.0);
    }
    out.push_back(Column::numeric(col.name(), std::move(scaled)));
  }
  return data.with_columns(std::move(out));
}

/// Partition by class label, in class order. Each part keeps every
/// predictive column and a constant target; q >= 2 is not enforced on parts.
inline std::vector<Dataset> split_by_class(const Dataset& data) {
  std::vector<std::vector<std::size_t>> rows(data.q());
  const auto labels = data.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) rows[static_cast<std::size_t>(labels[i])].push_back(i);
  std::vector<Dataset> parts;
  for (const auto& r : rows) {
    if (!r.empty()) parts.push_back(data.subset_rows(r));
  }
  return parts;
}

}  // namespace mfe

#endif  // MFE_TRANSFORM_HPP

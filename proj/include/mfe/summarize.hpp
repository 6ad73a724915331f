#ifndef MFE_SUMMARIZE_HPP
#define MFE_SUMMARIZE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfe/error.hpp"
#include "mfe/measure.hpp"
#include "mfe/stats.hpp"

namespace mfe {

enum class Summarizer { mean, sd, min, max, median, quartiles, iq_range, range, kurtosis, skewness, count, histogram };

inline std::string_view to_string(Summarizer s) {
  switch (s) {
    case Summarizer::mean: return "mean";
    case Summarizer::sd: return "sd";
    case Summarizer::min: return "min";
    case Summarizer::max: return "max";
    case Summarizer::median: return "median";
    case Summarizer::quartiles: return "quartiles";
    case Summarizer::iq_range: return "iqRange";
    case Summarizer::range: return "range";
    case Summarizer::kurtosis: return "kurtosis";
    case Summarizer::skewness: return "skewness";
    case Summarizer::count: return "count";
    case Summarizer::histogram: return "histogram";
  }
  return "unknown";
}

inline std::optional<Summarizer> parse_summarizer(std::string_view name) {
  for (auto s : {Summarizer::mean, Summarizer::sd, Summarizer::min, Summarizer::max, Summarizer::median,
                 Summarizer::quartiles, Summarizer::iq_range, Summarizer::range, Summarizer::kurtosis,
                 Summarizer::skewness, Summarizer::count, Summarizer::histogram}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

/// Ordered list of summarization functions; `identity` marks the
/// pass-through used for single-valued measures.
struct SummarizerSpec {
  std::vector<Summarizer> functions{Summarizer::mean,     Summarizer::sd,       Summarizer::min,
                                    Summarizer::max,      Summarizer::median,   Summarizer::kurtosis,
                                    Summarizer::skewness, Summarizer::histogram};
  std::size_t histogram_bins = 10;
  bool identity = false;

  static SummarizerSpec identity_marker() {
    SummarizerSpec spec;
    spec.functions.clear();
    spec.identity = true;
    return spec;
  }

  void validate() const {
    if (identity) return;
    if (functions.empty()) throw ConfigError("summarizer list is empty");
    if (histogram_bins < 2) throw ConfigError("histogram needs at least 2 bins");
  }
};

/// Input with no values and no exception tag.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Measure has no tabulated default value.
class NoDefaultError : public Error {
 public:
  using Error::Error;
};

using SummaryEntries = std::vector<std::pair<std::string, double>>;

/// Keys summarize() emits for a measure, in order. Independent of data.
inline std::vector<std::string> summary_keys(const std::string& measure, const SummarizerSpec& spec) {
  if (spec.identity) return {measure};
  std::vector<std::string> keys;
  for (auto fn : spec.functions) {
    const std::string base = measure + "." + std::string(to_string(fn));
    if (fn == Summarizer::quartiles) {
      for (int i = 0; i < 5; ++i) keys.push_back(base + "." + std::to_string(i));
    } else if (fn == Summarizer::histogram) {
      for (std::size_t i = 0; i < spec.histogram_bins; ++i) keys.push_back(base + "." + std::to_string(i));
    } else {
      keys.push_back(base);
    }
  }
  return keys;
}

namespace detail {

/// Equal-width proportions over [min, max]; the top edge is closed and a
/// constant vector puts everything in the first bin.
inline std::vector<double> histogram(std::span<const double> values, std::size_t bins) {
  std::vector<double> out(bins, 0.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double width = *hi - *lo;
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = static_cast<std::size_t>(std::floor((v - *lo) / width * static_cast<double>(bins)));
      idx = std::min(idx, bins - 1);
    }
    out[idx] += 1.0;
  }
  for (double& p : out) p /= static_cast<double>(values.size());
  return out;
}

}  // namespace detail

/// Applies every function of `spec` to the measure's values. Failed elements
/// (NaN) are dropped first. A failed measure yields NaN under every key.
/// sd of a single value and skewness/kurtosis of a constant vector yield 0.
inline SummaryEntries summarize(const MeasureResult& result, const SummarizerSpec& spec) {
  spec.validate();
  const auto keys = summary_keys(result.name, spec);
  SummaryEntries out;
  out.reserve(keys.size());

  if (!result.failed() && result.values.empty()) {
    throw EmptyInputError("measure '" + result.name + "' produced no values and no exception");
  }
  std::vector<double> values;
  for (double v : result.values) {
    if (!std::isnan(v)) values.push_back(v);
  }
  if (values.empty()) {
    for (const auto& k : keys) out.emplace_back(k, stats::kNaN);
    return out;
  }

  if (spec.identity) {
    if (values.size() != 1) throw ConfigError("identity summarizer applied to multi-valued measure '" + result.name + "'");
    out.emplace_back(keys.front(), values.front());
    return out;
  }

  const auto sorted = stats::sorted_copy(values);
  std::size_t key = 0;
  auto emit = [&](double v) { out.emplace_back(keys[key++], v); };
  for (auto fn : spec.functions) {
    switch (fn) {
      case Summarizer::mean: emit(stats::mean(values)); break;
      case Summarizer::sd: emit(values.size() < 2 ? 0.0 : stats::sd(values)); break;
      case Summarizer::min: emit(sorted.front()); break;
      case Summarizer::max: emit(sorted.back()); break;
      case Summarizer::median: emit(stats::median(values)); break;
      case Summarizer::quartiles:
        for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) emit(stats::quantile_sorted(sorted, p));
        break;
      case Summarizer::iq_range:
        emit(stats::quantile_sorted(sorted, 0.75) - stats::quantile_sorted(sorted, 0.25));
        break;
      case Summarizer::range: emit(sorted.back() - sorted.front()); break;
      case Summarizer::kurtosis: {
        const double k = stats::kurtosis(values);
        emit(std::isnan(k) ? 0.0 : k);
        break;
      }
      case Summarizer::skewness: {
        const double s = stats::skewness(values);
        emit(std::isnan(s) ? 0.0 : s);
        break;
      }
      case Summarizer::count: emit(static_cast<double>(values.size())); break;
      case Summarizer::histogram:
        for (double p : detail::histogram(values, spec.histogram_bins)) emit(p);
        break;
    }
  }
  return out;
}

/// True when the measure has a tabulated default for exceptional results.
inline bool has_measure_default(std::string_view measure) {
  for (std::string_view m : {"catToNum", "numToCat", "nrCorAttr", "sdRatio", "cor", "gMean", "kurtosis", "skewness",
                             "linearDiscr"}) {
    if (m == measure) return true;
  }
  return false;
}

/// Replaces exceptional values with the tabulated defaults:
/// catToNum and numToCat -> d, nrCorAttr -> 0, sdRatio -> -1, and per failed
/// element cor -> 0, gMean -> arithmetic mean, kurtosis/skewness -> 0,
/// linearDiscr fold -> 0. Healthy elements are kept.
inline MeasureResult apply_measure_default(const MeasureResult& result) {
  if (!has_measure_default(result.name)) {
    throw NoDefaultError("no default value for measure '" + result.name + "'");
  }
  MeasureResult out = result;
  const std::string& m = result.name;
  auto fill = [&](auto&& value_for) {
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (std::isnan(out.values[i])) out.values[i] = value_for(i);
    }
  };

  if (!result.failed()) {
    if (m == "gMean") {
      fill([&](std::size_t i) { return i < result.substitutes.size() ? result.substitutes[i] : stats::kNaN; });
    } else {
      fill([](std::size_t) { return 0.0; });
    }
    out.element_exception.reset();
    return out;
  }

  // Whole-measure failure: only the single-valued entries have a defined default.
  double value = stats::kNaN;
  if (m == "catToNum" || m == "numToCat") {
    if (result.substitutes.empty()) throw NoDefaultError("default for '" + m + "' needs the attribute count");
    value = result.substitutes.front();
  } else if (m == "nrCorAttr") {
    value = 0.0;
  } else if (m == "sdRatio") {
    value = -1.0;
  } else {
    throw NoDefaultError("measure '" + m + "' failed as a whole; its default is element-wise only");
  }
  out.values = {value};
  out.exception.reset();
  return out;
}

}  // namespace mfe

#endif  // MFE_SUMMARIZE_HPP

#ifndef MFE_MEASURE_HPP
#define MFE_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mfe {

enum class ExceptionKind {
  domain,            // no attribute of the type the measure needs
  division_by_zero,
  constant_values,
  singular_matrix,
  invalid_log,
  insufficient_data,
};

inline std::string_view to_string(ExceptionKind kind) {
  switch (kind) {
    case ExceptionKind::domain: return "domain";
    case ExceptionKind::division_by_zero: return "division_by_zero";
    case ExceptionKind::constant_values: return "constant_values";
    case ExceptionKind::singular_matrix: return "singular_matrix";
    case ExceptionKind::invalid_log: return "invalid_log";
    case ExceptionKind::insufficient_data: return "insufficient_data";
  }
  return "unknown";
}

/// Raw output of one characterization measure (k' values).
///
/// A whole-measure failure sets `exception` and leaves `values` empty.
/// A failure of individual elements of a multi-valued measure is marked by
/// NaN at that position, with `element_exception` naming the cause.
/// `substitutes` carries per-element (or, for single values, one) fallback
/// values that the default policy may need: the arithmetic means for gMean,
/// the attribute count d for catToNum/numToCat.
struct MeasureResult {
  std::string name;
  std::vector<double> values;
  std::optional<ExceptionKind> exception;
  std::optional<ExceptionKind> element_exception;
  bool multi_valued = false;
  std::vector<double> substitutes;

  static MeasureResult single(std::string name, double value) {
    MeasureResult r;
    r.name = std::move(name);
    r.values = {value};
    return r;
  }

  static MeasureResult multi(std::string name, std::vector<double> values,
                             std::optional<ExceptionKind> element_kind = std::nullopt) {
    MeasureResult r;
    r.name = std::move(name);
    r.values = std::move(values);
    r.multi_valued = true;
    if (r.failed_elements() > 0) r.element_exception = element_kind.value_or(ExceptionKind::division_by_zero);
    return r;
  }

  static MeasureResult failure(std::string name, ExceptionKind kind, bool multi_valued) {
    MeasureResult r;
    r.name = std::move(name);
    r.exception = kind;
    r.multi_valued = multi_valued;
    return r;
  }

  bool failed() const { return exception.has_value(); }

  std::size_t failed_elements() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }));
  }

  bool clean() const { return !failed() && failed_elements() == 0; }
};

}  // namespace mfe

#endif  // MFE_MEASURE_HPP

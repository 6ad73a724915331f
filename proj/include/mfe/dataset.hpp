#ifndef MFE_DATASET_HPP
#define MFE_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mfe/error.hpp"
#include "mfe/stats.hpp"

namespace mfe {

enum class ColumnKind { numeric, categorical };

/// One attribute vector. Numeric columns hold finite doubles; categorical
/// columns hold integer codes into a list of level labels, where the level
/// list is ordered by first appearance.
class Column {
 public:
  static Column numeric(std::string name, std::vector<double> values) {
    for (double v : values) {
      if (!std::isfinite(v)) throw InvalidDatasetError("column '" + name + "' holds a non-finite value");
    }
    Column c;
    c.name_ = std::move(name);
    c.kind_ = ColumnKind::numeric;
    c.values_ = std::move(values);
    c.distinct_ = stats::distinct_count(c.values_);
    return c;
  }

  static Column categorical(std::string name, const std::vector<std::string>& labels) {
    std::vector<std::string> levels;
    std::unordered_map<std::string, int> index;
    std::vector<int> codes;
    codes.reserve(labels.size());
    for (const auto& label : labels) {
      auto [it, inserted] = index.try_emplace(label, static_cast<int>(levels.size()));
      if (inserted) levels.push_back(label);
      codes.push_back(it->second);
    }
    return from_codes(std::move(name), std::move(codes), std::move(levels));
  }

  /// Codes must index into levels. Levels that never occur are allowed
  /// (split_by_class keeps the parent's level list).
  static Column from_codes(std::string name, std::vector<int> codes, std::vector<std::string> levels) {
    std::vector<char> seen(levels.size(), 0);
    for (int code : codes) {
      if (code < 0 || static_cast<std::size_t>(code) >= levels.size()) {
        throw InvalidDatasetError("column '" + name + "' has a code outside its level list");
      }
      seen[static_cast<std::size_t>(code)] = 1;
    }
    Column c;
    c.name_ = std::move(name);
    c.kind_ = ColumnKind::categorical;
    c.codes_ = std::move(codes);
    c.levels_ = std::move(levels);
    c.distinct_ = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
    c.values_.assign(c.codes_.begin(), c.codes_.end());
    return c;
  }

  const std::string& name() const { return name_; }
  ColumnKind kind() const { return kind_; }
  bool is_numeric() const { return kind_ == ColumnKind::numeric; }
  bool is_categorical() const { return kind_ == ColumnKind::categorical; }
  std::size_t size() const { return values_.size(); }

  /// Numeric values; for categorical columns, the codes as doubles.
  std::span<const double> values() const { return values_; }
  std::span<const int> codes() const { return codes_; }
  const std::vector<std::string>& levels() const { return levels_; }
  std::size_t level_count() const { return levels_.size(); }

  /// Number of distinct values actually present.
  std::size_t distinct_count() const { return distinct_; }

  Column subset(std::span<const std::size_t> rows) const {
    if (is_numeric()) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (auto r : rows) v.push_back(values_[r]);
      return numeric(name_, std::move(v));
    }
    std::vector<int> c;
    c.reserve(rows.size());
    for (auto r : rows) c.push_back(codes_[r]);
    return from_codes(name_, std::move(c), levels_);
  }

 private:
  Column() = default;

  std::string name_;
  ColumnKind kind_ = ColumnKind::numeric;
  std::vector<double> values_;
  std::vector<int> codes_;
  std::vector<std::string> levels_;
  std::size_t distinct_ = 0;
};

/// Immutable tabular classification dataset: ordered predictive columns
/// plus a categorical target whose class order is first appearance.
class Dataset {
 public:
  /// Validates the invariants. Pass allow_single_class for per-class
  /// partitions and other internal sub-datasets.
  Dataset(std::string name, std::vector<Column> columns, Column target, bool allow_single_class = false)
      : name_(std::move(name)), columns_(std::move(columns)), target_(std::move(target)) {
    if (!target_.is_categorical()) throw InvalidDatasetError("target column must be categorical");
    const std::size_t n = target_.size();
    if (n == 0) throw InvalidDatasetError("dataset has no instances");
    for (const auto& c : columns_) {
      if (c.size() != n) throw InvalidDatasetError("column '" + c.name() + "' length differs from target length");
    }
    if (!allow_single_class && target_.distinct_count() < 2) {
      throw InvalidDatasetError("dataset needs at least two classes");
    }
  }

  const std::string& name() const { return name_; }
  std::size_t n() const { return target_.size(); }
  std::size_t d() const { return columns_.size(); }
  /// Number of classes in the level list (q). Sub-datasets keep the parent's q.
  std::size_t q() const { return target_.level_count(); }

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  const Column& target() const { return target_; }
  std::span<const int> labels() const { return target_.codes(); }

  std::size_t numeric_count() const {
    return static_cast<std::size_t>(std::count_if(columns_.begin(), columns_.end(),
                                                  [](const Column& c) { return c.is_numeric(); }));
  }
  std::size_t categorical_count() const { return d() - numeric_count(); }

  /// Per-class instance counts in class order.
  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(q(), 0);
    for (int y : labels()) ++counts[static_cast<std::size_t>(y)];
    return counts;
  }

  Dataset subset_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& c : columns_) cols.push_back(c.subset(rows));
    return Dataset(name_, std::move(cols), target_.subset(rows), true);
  }

  Dataset with_columns(std::vector<Column> columns) const {
    return Dataset(name_, std::move(columns), target_, true);
  }

  /// Keeps only columns of one kind, order preserved.
  Dataset only(ColumnKind kind) const {
    std::vector<Column> cols;
    for (const auto& c : columns_) {
      if (c.kind() == kind) cols.push_back(c);
    }
    return with_columns(std::move(cols));
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  Column target_;
};

}  // namespace mfe

#endif  // MFE_DATASET_HPP

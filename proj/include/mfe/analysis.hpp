#ifndef MFE_ANALYSIS_HPP
#define MFE_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfe/error.hpp"
#include "mfe/metabase.hpp"
#include "mfe/stats.hpp"

namespace mfe {

/// |Spearman| over the rows where both columns are present. 0 when fewer
/// than two such rows remain or either side is constant on them.
inline double pairwise_abs_spearman(std::span<const double> x, std::span<const double> y) {
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isnan(x[i]) && !std::isnan(y[i])) {
      a.push_back(x[i]);
      b.push_back(y[i]);
    }
  }
  if (a.size() < 2) return 0.0;
  const double r = stats::spearman(a, b);
  return std::isnan(r) ? 0.0 : std::abs(r);
}

struct CorrelationMatrix {
  std::vector<std::string> features;
  std::vector<double> values;  // row-major, symmetric, unit diagonal

  double at(std::size_t i, std::size_t j) const { return values[i * features.size() + j]; }
};

/// Features whose present values are all equal (or that have fewer than
/// two present values).
inline std::vector<std::size_t> constant_features(const Metabase& mb) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < mb.features.size(); ++j) {
    std::vector<double> present;
    for (double v : mb.column(j)) {
      if (!std::isnan(v)) present.push_back(v);
    }
    if (present.size() < 2 || stats::is_constant(present)) out.push_back(j);
  }
  return out;
}

inline CorrelationMatrix correlation_matrix(const Metabase& mb, const std::vector<std::size_t>& columns) {
  CorrelationMatrix m;
  const std::size_t k = columns.size();
  std::vector<std::vector<double>> data;
  for (auto c : columns) {
    m.features.push_back(mb.features[c]);
    data.push_back(mb.column(c));
  }
  m.values.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    m.values[i * k + i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = pairwise_abs_spearman(data[i], data[j]);
      m.values[i * k + j] = r;
      m.values[j * k + i] = r;
    }
  }
  return m;
}

inline void write_correlation_csv(const CorrelationMatrix& m, std::ostream& os) {
  os << "feature";
  for (const auto& f : m.features) os << ',' << detail::csv_escape(f);
  os << '\n';
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    os << detail::csv_escape(m.features[i]);
    for (std::size_t j = 0; j < m.features.size(); ++j) os << ',' << detail::format_number(m.at(i, j));
    os << '\n';
  }
}

struct RedundancyReport {
  double threshold = 1.0;
  std::vector<std::string> kept;
  std::vector<std::pair<std::string, std::string>> removed;  // (removed, keeper)
  std::vector<std::string> constant;                         // excluded up front
  std::size_t total = 0;                                     // non-constant features

  double proportion_removed() const {
    return total == 0 ? 0.0 : static_cast<double>(removed.size()) / static_cast<double>(total);
  }
};

/// Correlation below this distance from the threshold counts as reaching it.
inline constexpr double kRedundancyTolerance = 1e-12;

/// Repeatedly keeps the remaining feature with the highest mean |Spearman|
/// to all others and removes every remaining feature correlated with it at
/// or above `threshold`. Ties in the mean go to the lexicographically
/// smaller name.
inline RedundancyReport redundancy_filter(const Metabase& mb, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("threshold must lie in (0, 1]");
  if (mb.rows.size() < 2) throw InvalidDatasetError("redundancy analysis needs at least 2 metabase rows");

  RedundancyReport report;
  report.threshold = threshold;
  const auto constant = constant_features(mb);
  std::vector<std::size_t> columns;
  for (std::size_t j = 0; j < mb.features.size(); ++j) {
    if (std::binary_search(constant.begin(), constant.end(), j)) {
      report.constant.push_back(mb.features[j]);
    } else {
      columns.push_back(j);
    }
  }
  report.total = columns.size();
  const auto corr = correlation_matrix(mb, columns);
  const std::size_t k = columns.size();

  // Means are compared on a 1e-12 grid so that identical columns, whose sums
  // differ only in rounding, tie and fall back to name order.
  std::vector<long long> score(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) sum += corr.at(i, j);
    }
    const double mean = k > 1 ? sum / static_cast<double>(k - 1) : 0.0;
    score[i] = std::llround(mean * 1e12);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return corr.features[a] < corr.features[b];
  });

  std::vector<char> gone(k, 0);
  for (auto keeper : order) {
    if (gone[keeper]) continue;
    report.kept.push_back(corr.features[keeper]);
    gone[keeper] = 1;
    for (auto other : order) {
      if (gone[other]) continue;
      if (corr.at(keeper, other) >= threshold - kRedundancyTolerance) {
        gone[other] = 1;
        report.removed.emplace_back(corr.features[other], corr.features[keeper]);
      }
    }
  }
  return report;
}

inline nlohmann::json to_json(const RedundancyReport& r) {
  nlohmann::json j;
  j["threshold"] = r.threshold;
  j["total"] = r.total;
  j["kept"] = r.kept;
  j["removed"] = nlohmann::json::array();
  for (const auto& [feature, keeper] : r.removed) j["removed"].push_back({{"feature", feature}, {"keeper", keeper}});
  j["constant_excluded"] = r.constant;
  j["proportion_removed"] = r.proportion_removed();
  return j;
}

inline void write_text(const RedundancyReport& r, std::ostream& os) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "threshold %.4g: removed %zu of %zu features (%.2f%%)\n", r.threshold, r.removed.size(),
                r.total, 100.0 * r.proportion_removed());
  os << buf;
  if (!r.constant.empty()) os << "constant features excluded: " << r.constant.size() << '\n';
  for (const auto& [feature, keeper] : r.removed) os << "  - " << feature << "  (kept " << keeper << ")\n";
}

/// Missing-cell tally for one slice of the metabase.
struct MissingCount {
  std::size_t cells = 0;
  std::size_t missing = 0;

  double percent() const { return cells == 0 ? 0.0 : 100.0 * static_cast<double>(missing) / static_cast<double>(cells); }
};

struct MissingReport {
  MissingCount total;
  std::map<std::string, MissingCount> by_group;
  std::map<std::string, MissingCount> by_summarizer;
  std::size_t error_rows = 0;  // rows of failed datasets, not counted
};

/// Summarizer part of a feature key "<group>.<measure>[.<fn>[.<idx>]]":
/// "identity" for bare single-valued keys, "raw" for raw element keys.
inline std::string summarizer_of(const std::string& key) {
  const auto first = key.find('.');
  if (first == std::string::npos) return "identity";
  const auto second = key.find('.', first + 1);
  if (second == std::string::npos) return "identity";
  const auto third = key.find('.', second + 1);
  const std::string fn = key.substr(second + 1, third == std::string::npos ? std::string::npos : third - second - 1);
  if (!fn.empty() && std::all_of(fn.begin(), fn.end(), [](char c) { return c >= '0' && c <= '9'; })) return "raw";
  return fn;
}

inline std::string group_of(const std::string& key) { return key.substr(0, key.find('.')); }

inline MissingReport missing_report(const Metabase& mb) {
  MissingReport report;
  std::vector<std::string> groups;
  std::vector<std::string> fns;
  for (const auto& f : mb.features) {
    groups.push_back(group_of(f));
    fns.push_back(summarizer_of(f));
  }
  for (const auto& row : mb.rows) {
    if (!row.error.empty()) {
      ++report.error_rows;
      continue;
    }
    for (std::size_t j = 0; j < mb.features.size(); ++j) {
      const bool miss = std::isnan(row.features[j]);
      for (MissingCount* c : {&report.total, &report.by_group[groups[j]], &report.by_summarizer[fns[j]]}) {
        ++c->cells;
        if (miss) ++c->missing;
      }
    }
  }
  return report;
}

inline nlohmann::json to_json(const MissingReport& r) {
  auto entry = [](const MissingCount& c) {
    return nlohmann::json{{"cells", c.cells}, {"missing", c.missing}, {"percent", c.percent()}};
  };
  nlohmann::json j;
  j["total"] = entry(r.total);
  j["error_rows"] = r.error_rows;
  j["by_group"] = nlohmann::json::object();
  for (const auto& [k, c] : r.by_group) j["by_group"][k] = entry(c);
  j["by_summarizer"] = nlohmann::json::object();
  for (const auto& [k, c] : r.by_summarizer) j["by_summarizer"][k] = entry(c);
  return j;
}

inline void write_text(const MissingReport& r, std::ostream& os) {
  char buf[160];
  auto line = [&](const std::string& label, const MissingCount& c) {
    std::snprintf(buf, sizeof buf, "  %-20s %8zu %8zu %7.2f%%\n", label.c_str(), c.missing, c.cells, c.percent());
    os << buf;
  };
  std::snprintf(buf, sizeof buf, "  %-20s %8s %8s %8s\n", "", "missing", "cells", "percent");
  os << "by group\n" << buf;
  for (const auto& [k, c] : r.by_group) line(k, c);
  os << "by summarizer\n" << buf;
  for (const auto& [k, c] : r.by_summarizer) line(k, c);
  line("total", r.total);
  if (r.error_rows > 0) os << "rows skipped (dataset error): " << r.error_rows << '\n';
}

struct TimingRow {
  std::string dataset;
  std::optional<double> n, d, q;
  std::vector<double> seconds;  // aligned with TimingReport::columns, NaN if absent
  bool flagged = false;         // some timing cell empty
};

struct TimingReport {
  std::vector<std::string> columns;  // groups then "total"
  std::vector<TimingRow> rows;       // sorted by (n, d, q, dataset)
  std::vector<double> mean;          // per column over present cells
};

inline TimingReport timing_report(const Metabase& mb) {
  TimingReport report;
  for (const auto& c : mb.timing_columns) report.columns.push_back(c.rfind("time.", 0) == 0 ? c.substr(5) : c);
  for (const auto& row : mb.rows) {
    TimingRow t{row.dataset, row.n, row.d, row.q, row.timing, false};
    t.flagged = t.seconds.empty() || std::any_of(t.seconds.begin(), t.seconds.end(), [](double v) { return std::isnan(v); });
    report.rows.push_back(std::move(t));
  }
  auto key = [](const std::optional<double>& v) { return v.value_or(std::numeric_limits<double>::infinity()); };
  std::stable_sort(report.rows.begin(), report.rows.end(), [&](const TimingRow& a, const TimingRow& b) {
    if (key(a.n) != key(b.n)) return key(a.n) < key(b.n);
    if (key(a.d) != key(b.d)) return key(a.d) < key(b.d);
    if (key(a.q) != key(b.q)) return key(a.q) < key(b.q);
    return a.dataset < b.dataset;
  });
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    std::vector<double> present;
    for (const auto& r : report.rows) {
      if (c < r.seconds.size() && !std::isnan(r.seconds[c])) present.push_back(r.seconds[c]);
    }
    report.mean.push_back(present.empty() ? stats::kNaN : stats::mean(present));
  }
  return report;
}

inline nlohmann::json to_json(const TimingReport& r) {
  nlohmann::json j;
  j["columns"] = r.columns;
  j["rows"] = nlohmann::json::array();
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& row : r.rows) {
    nlohmann::json s = nlohmann::json::object();
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
      s[r.columns[c]] = c < row.seconds.size() ? detail::json_number(row.seconds[c]) : nlohmann::json(nullptr);
    }
    j["rows"].push_back({{"dataset", row.dataset}, {"n", opt(row.n)}, {"d", opt(row.d)}, {"q", opt(row.q)},
                         {"seconds", s}, {"flagged", row.flagged}});
  }
  j["mean"] = nlohmann::json::object();
  for (std::size_t c = 0; c < r.columns.size(); ++c) j["mean"][r.columns[c]] = detail::json_number(r.mean[c]);
  return j;
}

inline void write_text(const TimingReport& r, std::ostream& os) {
  char buf[64];
  auto num = [&](double v, const char* fmt) {
    if (std::isnan(v)) return std::string("-");
    std::snprintf(buf, sizeof buf, fmt, v);
    return std::string(buf);
  };
  std::snprintf(buf, sizeof buf, "%-24s %8s %6s %4s", "dataset", "n", "d", "q");
  os << buf;
  for (const auto& c : r.columns) {
    std::snprintf(buf, sizeof buf, " %12s", c.c_str());
    os << buf;
  }
  os << '\n';
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-24s", row.dataset.c_str());
    os << buf;
    std::snprintf(buf, sizeof buf, " %8s %6s %4s", num(row.n.value_or(stats::kNaN), "%.0f").c_str(),
                  num(row.d.value_or(stats::kNaN), "%.0f").c_str(), num(row.q.value_or(stats::kNaN), "%.0f").c_str());
    os << buf;
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
      const std::string s = num(c < row.seconds.size() ? row.seconds[c] : stats::kNaN, "%.3f");
      std::snprintf(buf, sizeof buf, " %12s", s.c_str());
      os << buf;
    }
    os << (row.flagged ? "  [incomplete]\n" : "\n");
  }
  std::snprintf(buf, sizeof buf, "%-24s %8s %6s %4s", "mean", "", "", "");
  os << buf;
  for (double m : r.mean) {
    const std::string s = num(m, "%.3f");
    std::snprintf(buf, sizeof buf, " %12s", s.c_str());
    os << buf;
  }
  os << '\n';
}

}  // namespace mfe

#endif  // MFE_ANALYSIS_HPP

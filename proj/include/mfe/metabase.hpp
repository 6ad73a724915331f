#ifndef MFE_METABASE_HPP
#define MFE_METABASE_HPP

#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mfe/engine.hpp"
#include "mfe/error.hpp"
#include "mfe/io.hpp"
#include "mfe/stats.hpp"

namespace mfe {

/// One row per dataset, one column per meta-feature. NaN marks a missing cell.
struct Metabase {
  struct Row {
    std::string dataset;
    std::optional<double> n, d, q;
    std::vector<double> features;
    std::vector<double> timing;  // aligned with timing_columns
    std::string error;
  };

  std::vector<std::string> features;
  std::vector<std::string> timing_columns;  // "time.<group>" ..., "time.total"
  std::vector<Row> rows;

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.features[j]);
    return out;
  }
};

/// Columns appear in first-seen order over the records.
inline Metabase build_metabase(const std::vector<MetaFeatureRecord>& records) {
  Metabase mb;
  std::unordered_map<std::string, std::size_t> feature_index;
  std::vector<std::string> groups;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.features) {
      if (feature_index.try_emplace(k, mb.features.size()).second) mb.features.push_back(k);
    }
    for (const auto& [g, t] : r.timing) {
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
    }
  }
  for (const auto& g : groups) mb.timing_columns.push_back("time." + g);
  mb.timing_columns.push_back("time.total");

  for (const auto& r : records) {
    Metabase::Row row;
    row.dataset = r.dataset;
    row.error = r.error;
    row.features.assign(mb.features.size(), stats::kNaN);
    row.timing.assign(mb.timing_columns.size(), stats::kNaN);
    if (r.error.empty()) {
      row.n = static_cast<double>(r.n);
      row.d = static_cast<double>(r.d);
      row.q = static_cast<double>(r.q);
      for (const auto& [k, v] : r.features) {
        if (v) row.features[feature_index.at(k)] = *v;
      }
      for (const auto& [g, t] : r.timing) {
        const auto at = std::find(groups.begin(), groups.end(), g) - groups.begin();
        row.timing[static_cast<std::size_t>(at)] = t;
      }
      row.timing.back() = r.total_seconds;
    }
    mb.rows.push_back(std::move(row));
  }
  return mb;
}

namespace detail {

/// Shortest representation that round-trips.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }
inline std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace detail

inline void write_metabase_csv(const Metabase& mb, std::ostream& os) {
  os << "dataset,n,d,q";
  for (const auto& f : mb.features) os << ',' << detail::csv_escape(f);
  for (const auto& t : mb.timing_columns) os << ',' << t;
  os << ",error\n";
  for (const auto& r : mb.rows) {
    os << detail::csv_escape(r.dataset) << ',' << detail::cell(r.n) << ',' << detail::cell(r.d) << ','
       << detail::cell(r.q);
    for (double v : r.features) os << ',' << detail::cell(v);
    for (double v : r.timing) os << ',' << detail::cell(v);
    os << ',' << detail::csv_escape(r.error) << '\n';
  }
}

/// JSON mirror of the metabase: explicit nulls for missing cells plus each
/// record's exception log and warnings.
inline nlohmann::json metabase_json(const std::vector<MetaFeatureRecord>& records) {
  const Metabase mb = build_metabase(records);
  nlohmann::json out;
  out["features"] = mb.features;
  out["timing_columns"] = mb.timing_columns;
  out["datasets"] = nlohmann::json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto& row = mb.rows[i];
    nlohmann::json j;
    j["dataset"] = rec.dataset;
    j["n"] = row.n ? nlohmann::json(*row.n) : nlohmann::json(nullptr);
    j["d"] = row.d ? nlohmann::json(*row.d) : nlohmann::json(nullptr);
    j["q"] = row.q ? nlohmann::json(*row.q) : nlohmann::json(nullptr);
    j["values"] = nlohmann::json::object();
    for (std::size_t f = 0; f < mb.features.size(); ++f) j["values"][mb.features[f]] = detail::json_number(row.features[f]);
    j["timing"] = nlohmann::json::object();
    for (std::size_t t = 0; t < mb.timing_columns.size(); ++t) {
      j["timing"][mb.timing_columns[t]] = detail::json_number(row.timing[t]);
    }
    j["exceptions"] = nlohmann::json::array();
    for (const auto& e : rec.exceptions) {
      j["exceptions"].push_back({{"measure", e.measure}, {"kind", e.kind}, {"handling", e.handling}});
    }
    j["warnings"] = rec.warnings;
    j["error"] = rec.error.empty() ? nlohmann::json(nullptr) : nlohmann::json(rec.error);
    out["datasets"].push_back(std::move(j));
  }
  return out;
}

inline Metabase parse_metabase_csv(std::string_view text) {
  const auto records = detail::parse_csv_records(text, ',');
  if (records.empty()) throw ParseError("metabase is empty");
  const auto& header = records.front();
  if (header.size() < 2 || header[0] != "dataset") throw ParseError("metabase header must start with 'dataset'");

  enum class Role { dataset, n, d, q, feature, timing, error };
  std::vector<Role> roles;
  Metabase mb;
  for (const auto& h : header) {
    if (h == "dataset") roles.push_back(Role::dataset);
    else if (h == "n") roles.push_back(Role::n);
    else if (h == "d") roles.push_back(Role::d);
    else if (h == "q") roles.push_back(Role::q);
    else if (h == "error") roles.push_back(Role::error);
    else if (h.rfind("time.", 0) == 0) {
      roles.push_back(Role::timing);
      mb.timing_columns.push_back(h);
    } else {
      roles.push_back(Role::feature);
      mb.features.push_back(h);
    }
  }
  auto number = [](const std::string& cell, std::size_t line) -> double {
    const auto t = detail::trim(cell);
    if (t.empty()) return stats::kNaN;
    const auto v = detail::parse_finite(t);
    if (!v) throw ParseError("line " + std::to_string(line) + ": '" + std::string(t) + "' is not a number");
    return *v;
  };
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw ParseError("line " + std::to_string(r + 1) + ": expected " + std::to_string(header.size()) + " cells, got " +
                       std::to_string(rec.size()));
    }
    Metabase::Row row;
    for (std::size_t c = 0; c < rec.size(); ++c) {
      switch (roles[c]) {
        case Role::dataset: row.dataset = rec[c]; break;
        case Role::error: row.error = rec[c]; break;
        case Role::feature: row.features.push_back(number(rec[c], r + 1)); break;
        case Role::timing: row.timing.push_back(number(rec[c], r + 1)); break;
        case Role::n:
        case Role::d:
        case Role::q: {
          const double v = number(rec[c], r + 1);
          const std::optional<double> o = std::isnan(v) ? std::nullopt : std::optional<double>(v);
          (roles[c] == Role::n ? row.n : roles[c] == Role::d ? row.d : row.q) = o;
          break;
        }
      }
    }
    mb.rows.push_back(std::move(row));
  }
  return mb;
}

inline Metabase parse_metabase_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("metabase JSON: ") + e.what());
  }
  try {
    Metabase mb;
    mb.features = j.at("features").get<std::vector<std::string>>();
    mb.timing_columns = j.at("timing_columns").get<std::vector<std::string>>();
    auto num = [](const nlohmann::json& v) { return v.is_number() ? v.get<double>() : stats::kNaN; };
    auto opt = [](const nlohmann::json& v) { return v.is_number() ? std::optional<double>(v.get<double>()) : std::nullopt; };
    for (const auto& d : j.at("datasets")) {
      Metabase::Row row;
      row.dataset = d.at("dataset").get<std::string>();
      row.n = opt(d.value("n", nlohmann::json()));
      row.d = opt(d.value("d", nlohmann::json()));
      row.q = opt(d.value("q", nlohmann::json()));
      const auto& values = d.at("values");
      for (const auto& f : mb.features) row.features.push_back(values.contains(f) ? num(values[f]) : stats::kNaN);
      const auto timing = d.value("timing", nlohmann::json::object());
      for (const auto& t : mb.timing_columns) row.timing.push_back(timing.contains(t) ? num(timing[t]) : stats::kNaN);
      const auto err = d.value("error", nlohmann::json());
      row.error = err.is_string() ? err.get<std::string>() : std::string();
      mb.rows.push_back(std::move(row));
    }
    return mb;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("metabase JSON: ") + e.what());
  }
}

/// Reads a metabase written by `write_metabase_csv` or `metabase_json`
/// (chosen by the .json extension).
inline Metabase load_metabase(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  if (detail::lower(path.extension().string()) == ".json") return parse_metabase_json(text);
  return parse_metabase_csv(text);
}

}  // namespace mfe

#endif  // MFE_METABASE_HPP

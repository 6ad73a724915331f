#ifndef MFE_IO_HPP
#define MFE_IO_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"

namespace mfe {

enum class FileFormat { csv, arff };

struct LoadOptions {
  /// Empty means "last column".
  std::string target_name;
  char separator = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool is_missing_token(std::string_view cell) {
  const auto t = trim(cell);
  return t.empty() || t == "?" || t == "NA";
}

/// Whole-string decimal parse; rejects inf/nan and trailing garbage.
inline std::optional<double> parse_finite(std::string_view cell) {
  const auto t = trim(cell);
  if (t.empty()) return std::nullopt;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

/// RFC-4180 record splitter over a whole buffer: quoted fields may contain
/// separators, doubled quotes and line breaks.
inline std::vector<std::vector<std::string>> parse_csv_records(std::string_view text, char sep) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (ch == sep) {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
      const bool blank = row.size() == 1 && trim(row.front()).empty();
      if (!blank) records.push_back(std::move(row));
      row.clear();
      ++line;
    } else {
      field.push_back(ch);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field near line " + std::to_string(line));
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    const bool blank = row.size() == 1 && trim(row.front()).empty();
    if (!blank) records.push_back(std::move(row));
  }
  return records;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Builds a dataset from string cells, inferring column types. When
/// declared_numeric is given, it fixes the kind of each column instead.
inline Dataset assemble(const std::string& name, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows, const std::string& target_name,
                        const std::vector<std::optional<bool>>& declared_numeric = {}) {
  if (header.empty()) throw ParseError("no columns");
  if (rows.empty()) throw ParseError("no data rows");
  std::size_t target_index = header.size() - 1;
  if (!target_name.empty()) {
    auto it = std::find(header.begin(), header.end(), target_name);
    if (it == header.end()) throw UnknownTargetError("target column '" + target_name + "' not found");
    target_index = static_cast<std::size_t>(it - header.begin());
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (is_missing_token(rows[r][c])) {
        throw MissingValuesError("missing value in row " + std::to_string(r + 1) + ", column '" + header[c] +
                                 "'; datasets with missing values are not supported");
      }
    }
  }

  std::vector<Column> columns;
  std::optional<Column> target;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<std::string> cells;
    cells.reserve(rows.size());
    for (const auto& row : rows) cells.emplace_back(trim(row[c]));
    if (c == target_index) {
      target = Column::categorical(header[c], cells);
      continue;
    }
    std::optional<bool> numeric = c < declared_numeric.size() ? declared_numeric[c] : std::nullopt;
    std::vector<double> parsed;
    bool all_numeric = true;
    parsed.reserve(cells.size());
    for (const auto& cell : cells) {
      auto v = parse_finite(cell);
      if (!v) {
        all_numeric = false;
        break;
      }
      parsed.push_back(*v);
    }
    if (numeric.value_or(all_numeric)) {
      if (!all_numeric) throw ParseError("column '" + header[c] + "' is declared numeric but holds non-numeric values");
      columns.push_back(Column::numeric(header[c], std::move(parsed)));
    } else {
      columns.push_back(Column::categorical(header[c], cells));
    }
  }
  return Dataset(name, std::move(columns), std::move(*target));
}

inline std::string arff_unquote(std::string_view token) {
  token = trim(token);
  if (token.size() >= 2 && (token.front() == '\'' || token.front() == '"') && token.back() == token.front()) {
    return std::string(token.substr(1, token.size() - 2));
  }
  return std::string(token);
}

/// Splits an ARFF data line or nominal list on commas, honouring quotes.
inline std::vector<std::string> arff_split(std::string_view line) {
  std::vector<std::string> out;
  std::string current;
  char quote = 0;
  for (char ch : line) {
    if (quote) {
      if (ch == quote) quote = 0;
      current.push_back(ch);
    } else if (ch == '\'' || ch == '"') {
      quote = ch;
      current.push_back(ch);
    } else if (ch == ',') {
      out.push_back(arff_unquote(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  out.push_back(arff_unquote(current));
  return out;
}

}  // namespace detail

inline Dataset parse_csv(std::string_view text, const std::string& name, const LoadOptions& options = {}) {
  auto records = detail::parse_csv_records(text, options.separator);
  if (records.empty()) throw ParseError("empty CSV input");
  std::vector<std::string> header;
  for (const auto& h : records.front()) header.emplace_back(detail::trim(h));
  records.erase(records.begin());
  return detail::assemble(name, header, records, options.target_name);
}

/// ARFF subset: @relation, @attribute with numeric/real/integer or a
/// {nominal, list}, @data with dense comma-separated rows. '%' starts a comment.
inline Dataset parse_arff(std::string_view text, const std::string& fallback_name, const LoadOptions& options = {}) {
  std::string name = fallback_name;
  std::vector<std::string> header;
  std::vector<std::optional<bool>> declared;
  std::vector<std::vector<std::string>> rows;
  bool in_data = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (in_data) {
      if (line.front() == '{') throw ParseError("sparse ARFF rows are not supported (line " + std::to_string(line_no) + ")");
      rows.push_back(detail::arff_split(line));
      continue;
    }
    if (line.front() != '@') throw ParseError("unexpected ARFF header line " + std::to_string(line_no));
    const auto space = line.find_first_of(" \t");
    const std::string keyword = detail::lower(line.substr(0, space));
    const auto rest = space == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(space));
    if (keyword == "@relation") {
      name = detail::arff_unquote(rest);
    } else if (keyword == "@data") {
      in_data = true;
    } else if (keyword == "@attribute") {
      std::string attr_name;
      std::string_view type;
      if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
        const auto close = rest.find(rest.front(), 1);
        if (close == std::string_view::npos) throw ParseError("unterminated attribute name at line " + std::to_string(line_no));
        attr_name = std::string(rest.substr(1, close - 1));
        type = detail::trim(rest.substr(close + 1));
      } else {
        const auto sep = rest.find_first_of(" \t");
        if (sep == std::string_view::npos) throw ParseError("attribute without type at line " + std::to_string(line_no));
        attr_name = std::string(rest.substr(0, sep));
        type = detail::trim(rest.substr(sep));
      }
      header.push_back(attr_name);
      if (!type.empty() && type.front() == '{') {
        declared.emplace_back(false);
      } else {
        const auto t = detail::lower(type);
        if (t == "numeric" || t == "real" || t == "integer") {
          declared.emplace_back(true);
        } else {
          throw ParseError("unsupported ARFF attribute type '" + std::string(type) + "' at line " + std::to_string(line_no));
        }
      }
    } else {
      throw ParseError("unknown ARFF keyword '" + keyword + "' at line " + std::to_string(line_no));
    }
  }
  if (!in_data) throw ParseError("ARFF input has no @data section");
  return detail::assemble(name, header, rows, options.target_name, declared);
}

inline FileFormat format_from_path(const std::filesystem::path& path) {
  return detail::lower(path.extension().string()) == ".arff" ? FileFormat::arff : FileFormat::csv;
}

inline Dataset load_dataset(const std::filesystem::path& path, FileFormat format, const LoadOptions& options = {}) {
  const std::string text = detail::read_file(path);
  const std::string stem = path.stem().string();
  return format == FileFormat::arff ? parse_arff(text, stem, options) : parse_csv(text, stem, options);
}

inline Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {}) {
  return load_dataset(path, format_from_path(path), options);
}

}  // namespace mfe

#endif  // MFE_IO_HPP

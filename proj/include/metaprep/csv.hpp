#pragma once

// CSV reader with a mandatory header row.
//
// Empty cells and the tokens "NA" and "?" are missing. A column without a
// type hint is continuous only if every non-missing cell parses as a finite
// number; otherwise it is categorical with categories in first-appearance
// order. The class column is always categorical.

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/parse_error.hpp"

namespace metaprep {

using ColumnRef = std::variant<std::string, std::size_t>;

struct CsvOptions {
  ColumnRef class_column = std::string("class");
  std::map<std::string, AttributeKind> type_hints;
  std::string name = "dataset";
  char delimiter = ',';
};

namespace csv_detail {

// RFC 4180 style field split: double quotes, "" escapes a quote.
inline std::optional<std::vector<std::string>> split_record(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == delim) {
      out.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  out.push_back(was_quoted ? cur : std::string(trim(cur)));
  return out;
}

inline bool is_missing_token(std::string_view s) { return s.empty() || s == "NA" || s == "?"; }

inline std::string escape(std::string_view s, char delim) {
  bool quote = s.empty() || s == "NA" || s == "?";
  for (char c : s) {
    if (c == delim || c == '"' || c == '\n' || c == '\r') quote = true;
  }
  if (s != trim(s)) quote = true;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace csv_detail

inline Dataset parse_csv(std::istream& in, const CsvOptions& options = {}) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t header_line = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    auto fields = csv_detail::split_record(raw, options.delimiter);
    if (!fields) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "unterminated quote");
    header = std::move(*fields);
    header_line = line_no;
    break;
  }
  if (header_line == 0) throw ParseError(ParseErrorKind::EmptyInput, 0, "");

  const std::size_t m = header.size();
  std::size_t class_index = 0;
  if (std::holds_alternative<std::size_t>(options.class_column)) {
    class_index = std::get<std::size_t>(options.class_column);
    if (class_index >= m) {
      throw ParseError(ParseErrorKind::MissingClassColumn, header_line, "index " + std::to_string(class_index));
    }
  } else {
    const auto& want = std::get<std::string>(options.class_column);
    bool found = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (header[i] == want) {
        class_index = i;
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(ParseErrorKind::MissingClassColumn, header_line, "'" + want + "'");
  }

  std::vector<std::vector<std::string>> cells(m);
  std::vector<std::size_t> row_lines;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    auto fields = csv_detail::split_record(raw, options.delimiter);
    if (!fields) throw ParseError(ParseErrorKind::RowArity, line_no, "unterminated quote");
    if (fields->size() != m) {
      throw ParseError(ParseErrorKind::RowArity, line_no,
                       "expected " + std::to_string(m) + " fields, got " + std::to_string(fields->size()));
    }
    for (std::size_t c = 0; c < m; ++c) cells[c].push_back(std::move((*fields)[c]));
    row_lines.push_back(line_no);
  }
  if (row_lines.empty()) throw ParseError(ParseErrorKind::EmptyInput, line_no, "no data rows");

  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> cols(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto& column = cells[c];
    std::optional<AttributeKind> kind;
    if (c == class_index) {
      kind = AttributeKind::Categorical;
      for (std::size_t r = 0; r < column.size(); ++r) {
        if (csv_detail::is_missing_token(column[r])) {
          throw ParseError(ParseErrorKind::MissingClassValue, row_lines[r], "column '" + header[c] + "'");
        }
      }
    } else if (auto it = options.type_hints.find(header[c]); it != options.type_hints.end()) {
      kind = it->second;
    } else {
      bool numeric = true;
      for (const auto& s : column) {
        if (csv_detail::is_missing_token(s)) continue;
        auto v = parse_double(s);
        if (!v || !std::isfinite(*v)) {
          numeric = false;
          break;
        }
      }
      kind = numeric ? AttributeKind::Continuous : AttributeKind::Categorical;
    }

    if (*kind == AttributeKind::Continuous) {
      attrs.push_back(Attribute::continuous(header[c]));
      for (std::size_t r = 0; r < column.size(); ++r) {
        if (csv_detail::is_missing_token(column[r])) {
          cols[c].push_back(missing);
          continue;
        }
        auto v = parse_double(column[r]);
        if (!v || !std::isfinite(*v)) {
          throw ParseError(ParseErrorKind::InvalidNumber, row_lines[r], "'" + column[r] + "' in column '" + header[c] + "'");
        }
        cols[c].push_back(*v);
      }
    } else {
      std::unordered_map<std::string, std::size_t> index;
      std::vector<std::string> cats;
      for (const auto& s : column) {
        if (csv_detail::is_missing_token(s)) {
          cols[c].push_back(missing);
          continue;
        }
        auto [it, inserted] = index.emplace(s, cats.size());
        if (inserted) cats.push_back(s);
        cols[c].push_back(static_cast<double>(it->second));
      }
      if (cats.empty()) cats.push_back("?");  // all-missing column still needs a category
      attrs.push_back(Attribute::categorical(header[c], std::move(cats)));
    }
  }
  try {
    return Dataset(options.name, std::move(attrs), class_index, std::move(cols));
  } catch (const DatasetError& e) {
    throw ParseError(ParseErrorKind::MalformedHeader, header_line, e.what());
  }
}

inline Dataset parse_csv(std::string_view text, const CsvOptions& options = {}) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, options);
}

// Missing cells are written as empty fields.
inline std::string write_csv(const Dataset& ds, char delim = ',') {
  std::ostringstream out;
  for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
    if (a) out << delim;
    out << csv_detail::escape(ds.attribute(a).name, delim);
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.num_rows(); ++r) {
    for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
      if (a) out << delim;
      const double v = ds.value(r, a);
      if (is_missing(v)) continue;
      if (ds.attribute(a).is_continuous()) {
        out << format_double(v);
      } else {
        out << csv_detail::escape(ds.attribute(a).categories[static_cast<std::size_t>(v)], delim);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace metaprep

#pragma once

// Dense ARFF reader and writer.
//
// Supported: @relation, @attribute with numeric/real/integer or a nominal
// {..} list, @data with one comma separated row per line, '?' for missing,
// '%' comments, single or double quoted names and values.
//
// Class detection: an attribute named "class" (any case) wins, otherwise the
// last nominal attribute is the class.

#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/parse_error.hpp"

namespace metaprep {

namespace arff_detail {

struct Token {
  std::string text;
  bool quoted = false;
};

// Splits on `sep` outside of quotes. Unquoted tokens are trimmed, quoted ones
// are unescaped and kept verbatim. Returns nullopt on a malformed quote.
inline std::optional<std::vector<Token>> split_quoted(std::string_view s, char sep) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  while (true) {
    skip_ws();
    Token tok;
    if (i < n && (s[i] == '\'' || s[i] == '"')) {
      const char q = s[i++];
      bool closed = false;
      while (i < n) {
        if (s[i] == '\\' && i + 1 < n) {
          tok.text += s[i + 1];
          i += 2;
          continue;
        }
        if (s[i] == q) {
          closed = true;
          ++i;
          break;
        }
        tok.text += s[i++];
      }
      if (!closed) return std::nullopt;
      tok.quoted = true;
      skip_ws();
      if (i < n && s[i] != sep) return std::nullopt;
    } else {
      const std::size_t start = i;
      while (i < n && s[i] != sep) ++i;
      tok.text = std::string(trim(s.substr(start, i - start)));
    }
    out.push_back(std::move(tok));
    if (i < n && s[i] == sep) {
      ++i;
      continue;
    }
    return out;
  }
}

// Reads one possibly-quoted token from the front of `s`, advancing it.
inline std::optional<std::string> take_token(std::string_view& s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '\'' || s.front() == '"') {
    const char q = s.front();
    std::string tok;
    std::size_t i = 1;
    while (i < s.size()) {
      if (s[i] == '\\' && i + 1 < s.size()) {
        tok += s[i + 1];
        i += 2;
        continue;
      }
      if (s[i] == q) {
        s.remove_prefix(i + 1);
        return tok;
      }
      tok += s[i++];
    }
    return std::nullopt;
  }
  std::size_t i = 0;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '{') ++i;
  std::string tok(s.substr(0, i));
  s.remove_prefix(i);
  return tok;
}

inline bool needs_quotes(std::string_view s) {
  if (s.empty() || s == "?") return true;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '\'' || c == '"' || c == '{' ||
        c == '}' || c == '%' || c == '\\') {
      return true;
    }
  }
  return false;
}

inline std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace arff_detail

inline Dataset parse_arff(std::istream& in) {
  using arff_detail::split_quoted;
  using arff_detail::take_token;

  std::string relation = "dataset";
  std::vector<Attribute> attrs;
  std::vector<std::unordered_map<std::string, std::size_t>> lookup;
  std::vector<std::vector<double>> cols;
  bool in_data = false;
  bool saw_relation = false;
  bool saw_anything = false;
  std::size_t line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    saw_anything = true;

    if (!in_data) {
      if (line.front() != '@') throw ParseError(ParseErrorKind::MalformedHeader, line_no, "expected a declaration");
      std::string_view rest = line;
      const auto keyword_end = rest.find_first_of(" \t");
      const std::string keyword = to_lower(rest.substr(0, keyword_end));
      rest = keyword_end == std::string_view::npos ? std::string_view{} : rest.substr(keyword_end);

      if (keyword == "@relation") {
        auto name = take_token(rest);
        if (!name) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "@relation without a name");
        relation = *name;
        saw_relation = true;
      } else if (keyword == "@attribute") {
        if (!saw_relation) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "@attribute before @relation");
        auto name = take_token(rest);
        if (!name || name->empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "@attribute without a name");
        rest = trim(rest);
        if (rest.empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "@attribute without a type");
        for (const auto& a : attrs) {
          if (a.name == *name) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "duplicate attribute '" + *name + "'");
        }
        if (rest.front() == '{') {
          const auto close = rest.rfind('}');
          if (close == std::string_view::npos) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "unterminated nominal list");
          if (!trim(rest.substr(close + 1)).empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "text after nominal list");
          auto values = split_quoted(rest.substr(1, close - 1), ',');
          if (!values) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "unterminated quote in nominal list");
          std::unordered_map<std::string, std::size_t> index;
          std::vector<std::string> cats;
          for (auto& tok : *values) {
            const std::string& v = tok.text;
            if (v.empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "empty nominal value");
            if (!index.emplace(v, cats.size()).second) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "duplicate nominal value '" + v + "'");
            cats.push_back(v);
          }
          attrs.push_back(Attribute::categorical(*name, std::move(cats)));
          lookup.push_back(std::move(index));
        } else {
          auto type = take_token(rest);
          const std::string t = type ? to_lower(*type) : std::string{};
          if (t == "numeric" || t == "real" || t == "integer") {
            attrs.push_back(Attribute::continuous(*name));
            lookup.emplace_back();
          } else {
            throw ParseError(ParseErrorKind::UnknownAttributeType, line_no, "'" + (type ? *type : std::string{}) + "'");
          }
        }
      } else if (keyword == "@data") {
        if (attrs.empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "@data before any @attribute");
        in_data = true;
        cols.assign(attrs.size(), {});
      } else {
        throw ParseError(ParseErrorKind::MalformedHeader, line_no, "unknown declaration '" + std::string(keyword) + "'");
      }
      continue;
    }

    if (line.front() == '{') throw ParseError(ParseErrorKind::SparseUnsupported, line_no, "");
    auto cells = split_quoted(line, ',');
    if (!cells) throw ParseError(ParseErrorKind::RowArity, line_no, "unterminated quote");
    if (cells->size() != attrs.size()) {
      throw ParseError(ParseErrorKind::RowArity, line_no,
                       "expected " + std::to_string(attrs.size()) + " values, got " + std::to_string(cells->size()));
    }
    for (std::size_t a = 0; a < attrs.size(); ++a) {
      const std::string& cell = (*cells)[a].text;
      if (cell == "?" && !(*cells)[a].quoted) {
        cols[a].push_back(missing);
        continue;
      }
      if (attrs[a].is_continuous()) {
        auto v = parse_double(cell);
        if (!v || !std::isfinite(*v)) {
          throw ParseError(ParseErrorKind::InvalidNumber, line_no, "'" + cell + "' for attribute '" + attrs[a].name + "'");
        }
        cols[a].push_back(*v);
      } else {
        auto it = lookup[a].find(cell);
        if (it == lookup[a].end()) {
          throw ParseError(ParseErrorKind::UndeclaredNominal, line_no, "'" + cell + "' for attribute '" + attrs[a].name + "'");
        }
        cols[a].push_back(static_cast<double>(it->second));
      }
    }
  }

  if (!saw_anything) throw ParseError(ParseErrorKind::EmptyInput, 0, "");
  if (!in_data) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "missing @data section");
  if (cols.front().empty()) throw ParseError(ParseErrorKind::MalformedHeader, line_no, "no data rows");

  std::optional<std::size_t> class_index;
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    if (iequals(attrs[a].name, "class")) {
      class_index = a;
      break;
    }
  }
  if (!class_index) {
    for (std::size_t a = attrs.size(); a-- > 0;) {
      if (attrs[a].is_categorical()) {
        class_index = a;
        break;
      }
    }
  }
  if (!class_index) throw ParseError(ParseErrorKind::NoClassAttribute, 0, "no nominal attribute");
  if (!attrs[*class_index].is_categorical()) {
    throw ParseError(ParseErrorKind::NoClassAttribute, 0, "class attribute '" + attrs[*class_index].name + "' is not nominal");
  }
  const auto& class_col = cols[*class_index];
  for (std::size_t r = 0; r < class_col.size(); ++r) {
    if (is_missing(class_col[r])) throw ParseError(ParseErrorKind::MissingClassValue, 0, "data row " + std::to_string(r + 1));
  }
  try {
    return Dataset(relation, std::move(attrs), *class_index, std::move(cols));
  } catch (const DatasetError& e) {
    throw ParseError(ParseErrorKind::MalformedHeader, 0, e.what());
  }
}

inline Dataset parse_arff(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_arff(in);
}

// Dense ARFF text. Numbers use the shortest round-trip representation.
inline std::string write_arff(const Dataset& ds) {
  using arff_detail::quote;
  std::ostringstream out;
  out << "@relation " << quote(ds.name()) << "\n\n";
  for (const auto& a : ds.attributes()) {
    out << "@attribute " << quote(a.name) << ' ';
    if (a.is_continuous()) {
      out << "numeric\n";
    } else {
      out << '{';
      for (std::size_t c = 0; c < a.categories.size(); ++c) {
        if (c) out << ',';
        out << quote(a.categories[c]);
      }
      out << "}\n";
    }
  }
  out << "\n@data\n";
  for (std::size_t r = 0; r < ds.num_rows(); ++r) {
    for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
      if (a) out << ',';
      const double v = ds.value(r, a);
      if (is_missing(v)) {
        out << '?';
      } else if (ds.attribute(a).is_continuous()) {
        out << format_double(v);
      } else {
        out << quote(ds.attribute(a).categories[static_cast<std::size_t>(v)]);
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace metaprep

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "metaprep/common.hpp"

namespace metaprep {

enum class ParseErrorKind {
  EmptyInput,
  MalformedHeader,
  UnknownAttributeType,
  SparseUnsupported,
  RowArity,
  UndeclaredNominal,
  InvalidNumber,
  NoClassAttribute,
  MissingClassColumn,
  MissingClassValue,
};

inline std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::EmptyInput: return "empty input";
    case ParseErrorKind::MalformedHeader: return "malformed header";
    case ParseErrorKind::UnknownAttributeType: return "unknown attribute type";
    case ParseErrorKind::SparseUnsupported: return "sparse format not supported";
    case ParseErrorKind::RowArity: return "row arity mismatch";
    case ParseErrorKind::UndeclaredNominal: return "undeclared nominal value";
    case ParseErrorKind::InvalidNumber: return "invalid number";
    case ParseErrorKind::NoClassAttribute: return "no class attribute";
    case ParseErrorKind::MissingClassColumn: return "missing class column";
    case ParseErrorKind::MissingClassValue: return "missing class value";
  }
  return "parse error";
}

// Thrown by the ARFF and CSV readers. `line` is 1-based; 0 when the error is
// not tied to a particular line.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : Error(format(kind, line, detail)), kind_(kind), line_(line) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(ParseErrorKind kind, std::size_t line, const std::string& detail) {
    std::string msg;
    if (line > 0) msg = "line " + std::to_string(line) + ": ";
    msg += to_string(kind);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace metaprep

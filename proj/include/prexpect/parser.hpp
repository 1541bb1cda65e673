#pragma once

#include "prexpect/program.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace prexpect {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 1;
};

enum class ParseErrorKind {
  Syntax,
  PostMissing,
  ProbabilitySum,
  UndeclaredVariable,
  NonAffine,
  PostNotLinear,
  OverlappingPieces,
  DuplicateDeclaration,
};
const char* parse_error_name(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, SourceSpan span, const std::string& message);
  ParseErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  ParseErrorKind kind_;
  SourceSpan span_;
  std::string message_;
};

Program parse_program(const std::string& text, const std::string& file = "<input>");

/// Standalone expressions over the given symbols.
LinExpr parse_linexpr(const std::string& text, const std::vector<std::string>& symbols);
Guard parse_guard(const std::string& text, const std::vector<std::string>& symbols);
PiecewiseExpr parse_pwexpr(const std::string& text, const std::vector<std::string>& symbols);

/// Text that parse_program reads back to an equal Program.
std::string print_program(const Program& p);
std::string print_pwexpr(const PiecewiseExpr& e);

}  // namespace prexpect

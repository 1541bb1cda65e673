#include "prexpect/parser.hpp"

#include "prexpect/errors.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace prexpect {

const char* parse_error_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Syntax: return "SyntaxError";
    case ParseErrorKind::PostMissing: return "PostMissing";
    case ParseErrorKind::ProbabilitySum: return "ProbabilitySum";
    case ParseErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ParseErrorKind::NonAffine: return "NonAffine";
    case ParseErrorKind::PostNotLinear: return "PostNotLinear";
    case ParseErrorKind::OverlappingPieces: return "OverlappingPieces";
    case ParseErrorKind::DuplicateDeclaration: return "DuplicateDeclaration";
  }
  return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, SourceSpan span, const std::string& message)
    : std::runtime_error(span.file + ":" + std::to_string(span.line) + ":" +
                         std::to_string(span.column) + ": " + parse_error_name(kind) + ": " +
                         message),
      kind_(kind),
      span_(std::move(span)),
      message_(message) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(const std::string& src, const std::string& file) {
  static const char* puncts[] = {"->", "<=", ">=", "==", "!=", "&&", "||", "<", ">", "=", "!",
                                 "(",  ")",  "{",  "}",  "[",  "]",  ",",  ";", "'", "@", "|",
                                 "+",  "-",  "*",  "/"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto span_at = [&](int len) { return SourceSpan{file, line, col, std::max(len, 1)}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), span_at(static_cast<int>(j - i))});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({Tok::Number, src.substr(i, j - i), span_at(static_cast<int>(j - i))});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : puncts) {
      std::string s(p);
      if (src.compare(i, s.size(), s) == 0) {
        out.push_back({Tok::Punct, s, span_at(static_cast<int>(s.size()))});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ParseError(ParseErrorKind::Syntax, span_at(1), std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", span_at(1)});
  return out;
}

const std::set<std::string> kKeywords = {"vars", "consts", "init", "invariant", "template",
                                         "command", "post", "regions", "min", "true", "false"};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::set<std::string> symbols)
      : toks_(std::move(toks)), symbols_(std::move(symbols)) {}

  Program program();
  LinExpr sum();
  Guard pred();
  PiecewiseExpr pwexpr();
  void expect_end() {
    if (peek().type != Tok::End) fail("unexpected '" + peek().text + "'");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(const std::string& text) const {
    const Token& t = peek();
    return t.type != Tok::End && t.type != Tok::Number && t.text == text;
  }
  bool accept(const std::string& text) {
    if (!at(text)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(const std::string& text) {
    if (!at(text)) fail("expected '" + text + "'" + found());
    return toks_[pos_++];
  }
  std::string found() const {
    return peek().type == Tok::End ? " at end of input" : " but found '" + peek().text + "'";
  }
  [[noreturn]] void fail(const std::string& msg, ParseErrorKind kind = ParseErrorKind::Syntax) const {
    throw ParseError(kind, peek().span, msg);
  }
  std::string ident() {
    const Token& t = peek();
    if (t.type != Tok::Ident || kKeywords.count(t.text)) fail("expected an identifier" + found());
    ++pos_;
    return t.text;
  }
  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident()};
    while (accept(",")) out.push_back(ident());
    return out;
  }
  void declare(const std::string& name, const SourceSpan& span) {
    if (!symbols_.insert(name).second)
      throw ParseError(ParseErrorKind::DuplicateDeclaration, span, "'" + name + "' declared twice");
  }

  Rational number();
  LinExpr term();
  LinExpr factor();
  Guard disjunction();
  Guard conjunction();
  Guard unary();
  Guard comparison();
  MinExpr minexpr();
  Assignment updates(bool allow_empty);
  ProbBranch branch();
  GuardedCommand command();
  bool comparison_follows() const;

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> symbols_;
  std::set<std::string> constants_;
  std::set<std::string> variables_;
};

Rational Parser::number() {
  const Token& t = peek();
  if (t.type != Tok::Number) fail("expected a number" + found());
  ++pos_;
  return parse_rational(t.text);
}

LinExpr Parser::sum() {
  LinExpr acc = term();
  while (at("+") || at("-")) {
    bool plus = toks_[pos_++].text == "+";
    LinExpr rhs = term();
    if (plus)
      acc += rhs;
    else
      acc -= rhs;
  }
  return acc;
}

LinExpr Parser::term() {
  LinExpr acc = factor();
  while (at("*") || at("/")) {
    const Token& op = toks_[pos_++];
    SourceSpan where = peek().span;
    LinExpr rhs = factor();
    if (op.text == "*") {
      if (acc.is_constant())
        acc = rhs * acc.constant();
      else if (rhs.is_constant())
        acc *= rhs.constant();
      else
        throw ParseError(ParseErrorKind::NonAffine, op.span, "product of two variables");
    } else {
      if (!rhs.is_constant())
        throw ParseError(ParseErrorKind::NonAffine, where, "division by a variable");
      if (rhs.constant() == 0) throw ParseError(ParseErrorKind::Syntax, where, "division by zero");
      acc *= 1 / rhs.constant();
    }
  }
  return acc;
}

LinExpr Parser::factor() {
  if (accept("-")) return -factor();
  if (accept("+")) return factor();
  if (accept("(")) {
    LinExpr e = sum();
    expect(")");
    return e;
  }
  const Token& t = peek();
  if (t.type == Tok::Number) return LinExpr(number());
  if (t.type == Tok::Ident && !kKeywords.count(t.text)) {
    if (!symbols_.count(t.text))
      throw ParseError(ParseErrorKind::UndeclaredVariable, t.span, "'" + t.text + "' is not declared");
    ++pos_;
    return LinExpr::var(t.text);
  }
  fail("expected an expression" + found());
}

Guard Parser::pred() { return disjunction(); }

Guard Parser::disjunction() {
  std::vector<Guard> parts{conjunction()};
  while (accept("||")) parts.push_back(conjunction());
  return Guard::disjunction(std::move(parts));
}

Guard Parser::conjunction() {
  std::vector<Guard> parts{unary()};
  while (accept("&&")) parts.push_back(unary());
  return Guard::conjunction(std::move(parts));
}

bool Parser::comparison_follows() const {
  static const std::set<std::string> ops = {"<", "<=", "=", "==", "!=", ">=", ">",
                                            "+", "-", "*", "/"};
  return peek().type == Tok::Punct && ops.count(peek().text);
}

Guard Parser::unary() {
  if (accept("!")) return Guard::negation(unary());
  if (accept("true")) return Guard::truth(true);
  if (accept("false")) return Guard::truth(false);
  if (at("(")) {
    std::size_t saved = pos_;
    try {
      ++pos_;
      Guard g = pred();
      expect(")");
      if (!comparison_follows()) return g;
    } catch (const ParseError&) {
    }
    pos_ = saved;
  }
  return comparison();
}

Guard Parser::comparison() {
  LinExpr lhs = sum();
  std::vector<Guard> atoms;
  while (true) {
    std::string op = peek().type == Tok::Punct ? peek().text : "";
    if (op != "<" && op != "<=" && op != "=" && op != "==" && op != "!=" && op != ">=" && op != ">")
      break;
    ++pos_;
    LinExpr rhs = sum();
    if (op == "<") atoms.push_back(Guard::atom(lhs - rhs, Guard::Cmp::Lt));
    if (op == "<=") atoms.push_back(Guard::atom(lhs - rhs, Guard::Cmp::Le));
    if (op == "=" || op == "==") atoms.push_back(Guard::atom(lhs - rhs, Guard::Cmp::Eq));
    if (op == "!=") atoms.push_back(Guard::atom(lhs - rhs, Guard::Cmp::Ne));
    if (op == ">") atoms.push_back(Guard::atom(rhs - lhs, Guard::Cmp::Lt));
    if (op == ">=") atoms.push_back(Guard::atom(rhs - lhs, Guard::Cmp::Le));
    lhs = std::move(rhs);
  }
  if (atoms.empty()) fail("expected a comparison" + found());
  return Guard::conjunction(std::move(atoms));
}

MinExpr Parser::minexpr() {
  if (accept("min")) {
    expect("(");
    std::vector<LinExpr> terms{sum()};
    while (accept(",")) terms.push_back(sum());
    expect(")");
    return MinExpr(std::move(terms));
  }
  return MinExpr(sum());
}

PiecewiseExpr Parser::pwexpr() {
  std::vector<Piece> pieces;
  std::vector<SourceSpan> spans;
  do {
    spans.push_back(peek().span);
    Region region = Region::universe();
    if (accept("[")) {
      region = make_disjoint(pred().to_region());
      expect("]");
    }
    pieces.push_back({std::move(region), minexpr()});
  } while (accept("|"));
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (!region_is_empty(intersect(pieces[i].region, pieces[j].region)))
        throw ParseError(ParseErrorKind::OverlappingPieces, spans[j],
                         "piece " + std::to_string(j + 1) + " overlaps piece " + std::to_string(i + 1));
  return PiecewiseExpr(std::move(pieces));
}

Assignment Parser::updates(bool allow_empty) {
  Assignment a;
  if (allow_empty && at("}")) return a;
  do {
    const Token& t = peek();
    std::string v = ident();
    if (!variables_.count(v)) {
      if (constants_.count(v))
        throw ParseError(ParseErrorKind::Syntax, t.span, "constant '" + v + "' cannot be assigned");
      throw ParseError(ParseErrorKind::UndeclaredVariable, t.span, "'" + v + "' is not declared");
    }
    if (a.updates().count(v))
      throw ParseError(ParseErrorKind::DuplicateDeclaration, t.span, "'" + v + "' updated twice");
    expect("'");
    expect("=");
    a.set(v, sum());
  } while (accept(","));
  return a;
}

ProbBranch Parser::branch() {
  expect("{");
  Assignment a = updates(true);
  expect("}");
  expect("@");
  SourceSpan where = peek().span;
  Rational p = number();
  if (accept("/")) {
    Rational d = number();
    if (d == 0) throw ParseError(ParseErrorKind::Syntax, where, "zero denominator");
    p /= d;
  }
  if (p <= 0 || p > 1)
    throw ParseError(ParseErrorKind::ProbabilitySum, where, "probability " + to_string(p) + " outside (0, 1]");
  return {std::move(a), p};
}

GuardedCommand Parser::command() {
  SourceSpan start = peek().span;
  GuardedCommand c;
  c.guard = pred();
  expect("->");
  c.branches.push_back(branch());
  while (accept("|")) c.branches.push_back(branch());
  expect(";");
  if (c.total_probability() > 1)
    throw ParseError(ParseErrorKind::ProbabilitySum, start,
                     "branch probabilities sum to " + to_string(c.total_probability()));
  return c;
}

Program Parser::program() {
  Program p;
  expect("vars");
  for (const auto& v : [&] {
         std::vector<std::pair<std::string, SourceSpan>> names;
         do {
           SourceSpan s = peek().span;
           names.emplace_back(ident(), s);
         } while (accept(","));
         return names;
       }()) {
    declare(v.first, v.second);
    variables_.insert(v.first);
    p.variables.push_back(v.first);
  }
  expect(";");
  while (true) {
    if (accept("consts")) {
      do {
        SourceSpan s = peek().span;
        std::string c = ident();
        declare(c, s);
        constants_.insert(c);
        p.constants.push_back(c);
      } while (accept(",") || (peek().type == Tok::Ident && !kKeywords.count(peek().text)));
      expect(";");
    } else if (accept("init")) {
      p.init = updates(false);
      expect(";");
    } else if (accept("invariant")) {
      p.invariant = pred();
      expect(";");
    } else if (accept("template")) {
      for (;;) {
        const Token& t = peek();
        std::string v = ident();
        if (!variables_.count(v))
          throw ParseError(ParseErrorKind::UndeclaredVariable, t.span, "'" + v + "' is not a variable");
        p.template_vars.push_back(v);
        if (!accept(",")) break;
      }
      expect(";");
    } else {
      break;
    }
  }
  while (accept("command")) p.commands.push_back(command());
  if (!at("post")) {
    if (peek().type == Tok::End)
      fail("the program has no post-expectation", ParseErrorKind::PostMissing);
    fail("expected 'command' or 'post'" + found(),
         peek().type == Tok::Ident && peek().text == "regions" ? ParseErrorKind::PostMissing
                                                               : ParseErrorKind::Syntax);
  }
  ++pos_;
  SourceSpan post_span = peek().span;
  p.post = pwexpr();
  for (const auto& piece : p.post.pieces())
    if (piece.value.terms().size() != 1)
      throw ParseError(ParseErrorKind::PostNotLinear, post_span, "post-expectation uses min");
  expect(";");
  if (accept("regions")) {
    do {
      p.regions.push_back(pred());
      expect(";");
    } while (peek().type != Tok::End);
  }
  expect_end();
  return p;
}

std::set<std::string> symbol_set(const std::vector<std::string>& symbols) {
  return {symbols.begin(), symbols.end()};
}

}  // namespace

Program parse_program(const std::string& text, const std::string& file) {
  Parser parser(lex(text, file), {});
  return parser.program();
}

LinExpr parse_linexpr(const std::string& text, const std::vector<std::string>& symbols) {
  Parser parser(lex(text, "<expr>"), symbol_set(symbols));
  LinExpr e = parser.sum();
  parser.expect_end();
  return e;
}

Guard parse_guard(const std::string& text, const std::vector<std::string>& symbols) {
  Parser parser(lex(text, "<expr>"), symbol_set(symbols));
  Guard g = parser.pred();
  parser.expect_end();
  return g;
}

PiecewiseExpr parse_pwexpr(const std::string& text, const std::vector<std::string>& symbols) {
  Parser parser(lex(text, "<expr>"), symbol_set(symbols));
  PiecewiseExpr e = parser.pwexpr();
  parser.expect_end();
  return e;
}

}  // namespace prexpect

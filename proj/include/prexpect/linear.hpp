#pragma once

#include "prexpect/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace prexpect {

/// Integer-valued program state; values are stored as rationals so that
/// evaluation needs no conversions.
using State = std::map<std::string, Rational>;

/// Affine expression c + Σ a_v·v. Zero coefficients never appear in the map,
/// so structural equality is semantic equality.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}
  static LinExpr var(const std::string& name, Rational coeff = 1);

  const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(const std::string& name) const;
  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  void set_coeff(const std::string& name, const Rational& value);
  void set_constant(const Rational& value) { constant_ = value; }

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(const Rational& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
  friend LinExpr operator*(const Rational& k, LinExpr a) { return a *= k; }
  LinExpr operator-() const { return *this * Rational(-1); }

  /// Missing variables evaluate as 0.
  Rational evaluate(const State& s) const;

  friend bool operator==(const LinExpr& a, const LinExpr& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator<(const LinExpr& a, const LinExpr& b);

  std::string to_string() const;

 private:
  std::map<std::string, Rational> coeffs_;
  Rational constant_ = 0;
};

/// Simultaneous multi-assignment; variables without an update keep their
/// value.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::map<std::string, LinExpr> updates)
      : updates_(std::move(updates)) {}

  const std::map<std::string, LinExpr>& updates() const { return updates_; }
  void set(const std::string& var, LinExpr e) { updates_[var] = std::move(e); }

  State apply(const State& s) const;

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.updates_ == b.updates_;
  }

 private:
  std::map<std::string, LinExpr> updates_;
};

/// e[a]: substitutes every updated variable by its update expression.
LinExpr affine_compose(const LinExpr& e, const Assignment& a);

enum class Rel { Le, Lt, Eq };

/// `expr rel 0`.
struct LinConstraint {
  LinExpr expr;
  Rel rel = Rel::Le;

  bool holds(const State& s) const;
  std::string to_string() const;

  friend bool operator==(const LinConstraint& a, const LinConstraint& b) {
    return a.rel == b.rel && a.expr == b.expr;
  }
  friend bool operator<(const LinConstraint& a, const LinConstraint& b);
};

/// Integer normalization over Ω = ℤ: clears denominators, divides by the gcd
/// of the variable coefficients, turns `e < 0` into `e + 1 ≤ 0` and rounds the
/// constant. Returns nullopt for a constraint that holds everywhere; a
/// constraint unsatisfiable over the integers comes back as `1 ≤ 0`.
std::optional<LinConstraint> normalize_integer(const LinConstraint& c);

/// Constraints whose disjunction is the integer complement of `c`
/// (which must already be normalized).
std::vector<LinConstraint> negate_integer(const LinConstraint& c);

LinConstraint false_constraint();

}  // namespace prexpect

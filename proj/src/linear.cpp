#include "prexpect/linear.hpp"

#include <sstream>
#include <tuple>

namespace prexpect {

LinExpr LinExpr::var(const std::string& name, Rational coeff) {
  LinExpr e;
  e.set_coeff(name, coeff);
  return e;
}

Rational LinExpr::coeff(const std::string& name) const {
  auto it = coeffs_.find(name);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void LinExpr::set_coeff(const std::string& name, const Rational& value) {
  if (value == 0)
    coeffs_.erase(name);
  else
    coeffs_[name] = value;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& [v, c] : other.coeffs_) {
    auto it = coeffs_.find(v);
    if (it == coeffs_.end()) {
      coeffs_.emplace(v, c);
    } else {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& [v, c] : other.coeffs_) {
    auto it = coeffs_.find(v);
    if (it == coeffs_.end()) {
      coeffs_.emplace(v, -c);
    } else {
      it->second -= c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(const Rational& k) {
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : coeffs_) c *= k;
  constant_ *= k;
  return *this;
}

Rational LinExpr::evaluate(const State& s) const {
  Rational out = constant_;
  for (const auto& [v, c] : coeffs_) {
    auto it = s.find(v);
    if (it != s.end()) out += c * it->second;
  }
  return out;
}

bool operator<(const LinExpr& a, const LinExpr& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  return a.coeffs_ < b.coeffs_;
}

namespace {

void append_term(std::ostringstream& os, bool first, const Rational& c,
                 const std::string& var) {
  Rational mag = abs(c);
  if (first) {
    if (c < 0) os << "-";
  } else {
    os << (c < 0 ? " - " : " + ");
  }
  if (var.empty()) {
    os << mag.get_str();
  } else {
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
  }
}

}  // namespace

std::string LinExpr::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs_) {
    append_term(os, first, c, v);
    first = false;
  }
  if (constant_ != 0 || first) append_term(os, first, constant_, "");
  return os.str();
}

State Assignment::apply(const State& s) const {
  State out = s;
  for (const auto& [v, e] : updates_) out[v] = e.evaluate(s);
  return out;
}

LinExpr affine_compose(const LinExpr& e, const Assignment& a) {
  LinExpr out(e.constant());
  for (const auto& [v, c] : e.coeffs()) {
    auto it = a.updates().find(v);
    if (it == a.updates().end())
      out += LinExpr::var(v, c);
    else
      out += it->second * c;
  }
  return out;
}

bool LinConstraint::holds(const State& s) const {
  Rational v = expr.evaluate(s);
  switch (rel) {
    case Rel::Le: return v <= 0;
    case Rel::Lt: return v < 0;
    case Rel::Eq: return v == 0;
  }
  return false;
}

std::string LinConstraint::to_string() const {
  const char* op = rel == Rel::Le ? " <= 0" : rel == Rel::Lt ? " < 0" : " = 0";
  return expr.to_string() + op;
}

bool operator<(const LinConstraint& a, const LinConstraint& b) {
  if (a.rel != b.rel) return a.rel < b.rel;
  return a.expr < b.expr;
}

LinConstraint false_constraint() { return {LinExpr(Rational(1)), Rel::Le}; }

std::optional<LinConstraint> normalize_integer(const LinConstraint& c) {
  // Scale to integer coefficients.
  Integer lcm = c.expr.constant().get_den();
  for (const auto& [v, k] : c.expr.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), k.get_den_mpz_t());
  LinExpr e = c.expr * Rational(lcm);
  Integer constant = e.constant().get_num();

  if (e.is_constant()) {
    bool ok = c.rel == Rel::Le ? constant <= 0 : c.rel == Rel::Lt ? constant < 0 : constant == 0;
    if (ok) return std::nullopt;
    return false_constraint();
  }

  Rel rel = c.rel;
  if (rel == Rel::Lt) {
    constant += 1;
    rel = Rel::Le;
  }
  Integer g = 0;
  for (const auto& [v, k] : e.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_num_mpz_t());

  LinExpr out;
  for (const auto& [v, k] : e.coeffs()) out.set_coeff(v, Rational(k.get_num() / g));
  if (rel == Rel::Eq) {
    if (constant % g != 0) return false_constraint();
    out.set_constant(Rational(constant / g));
    // Fix the sign so that x = 0 and -x = 0 coincide.
    if (out.coeffs().begin()->second < 0) out *= Rational(-1);
  } else {
    // a·x + c ≤ 0 with gcd(a) = g  ⇔  (a/g)·x + ⌈c/g⌉ ≤ 0 over the integers.
    out.set_constant(ceil(Rational(constant, g)));
  }
  return LinConstraint{out, rel};
}

std::vector<LinConstraint> negate_integer(const LinConstraint& c) {
  if (c.rel == Rel::Eq) {
    // e ≠ 0  ⇔  e ≤ -1  ∨  e ≥ 1
    return {LinConstraint{c.expr + LinExpr(Rational(1)), Rel::Le},
            LinConstraint{-c.expr + LinExpr(Rational(1)), Rel::Le}};
  }
  // ¬(e ≤ 0)  ⇔  e ≥ 1  ⇔  -e + 1 ≤ 0
  return {LinConstraint{-c.expr + LinExpr(Rational(1)), Rel::Le}};
}

}  // namespace prexpect

#pragma once

#include "prexpect/polyhedron.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace prexpect {

/// Quantifier-free boolean combination of linear atoms `expr cmp 0`.
class Guard {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };
  enum class Cmp { Le, Lt, Eq, Ne };

  static Guard truth(bool value);
  static Guard atom(LinExpr expr, Cmp cmp);
  static Guard negation(Guard g);
  static Guard conjunction(std::vector<Guard> parts);
  static Guard disjunction(std::vector<Guard> parts);

  Kind kind() const { return kind_; }
  const LinExpr& expr() const { return expr_; }
  Cmp cmp() const { return cmp_; }
  const std::vector<Guard>& children() const { return children_; }

  bool evaluate(const State& s) const;

  /// Disjunctive normal form over integer-normalized polyhedra, rationally
  /// empty disjuncts pruned. Disjuncts may overlap. Throws
  /// Error(TooManyGuards) when more than `max_disjuncts` would be produced.
  Region to_region(std::size_t max_disjuncts = 1u << 16) const;
  Region negated_region(std::size_t max_disjuncts = 1u << 16) const;

  /// Parseable rendering.
  std::string to_string() const;

  friend bool operator==(const Guard& a, const Guard& b);

 private:
  Region dnf(bool positive, std::size_t cap) const;

  Kind kind_ = Kind::True;
  LinExpr expr_;
  Cmp cmp_ = Cmp::Le;
  std::vector<Guard> children_;
};

}  // namespace prexpect

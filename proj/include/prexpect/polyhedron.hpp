#pragma once

#include "prexpect/errors.hpp"
#include "prexpect/linear.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace prexpect {

/// Conjunction of integer-normalized linear constraints. The constructor
/// canonicalizes: parallel constraints collapse to their tightest bounds,
/// matching lower/upper bounds become one equality, and a contradiction
/// leaves the single constraint `1 ≤ 0`. No constraints means the whole space.
class Polyhedron {
 public:
  Polyhedron() = default;
  explicit Polyhedron(const std::vector<LinConstraint>& constraints);

  const std::vector<LinConstraint>& constraints() const { return constraints_; }
  bool is_universe() const { return constraints_.empty(); }
  /// Syntactically contradictory; emptiness in general needs an LP.
  bool is_trivially_empty() const;
  bool contains(const State& s) const;
  std::set<std::string> variables() const;
  std::string to_string() const;

  friend bool operator==(const Polyhedron& a, const Polyhedron& b) {
    return a.constraints_ == b.constraints_;
  }
  friend bool operator<(const Polyhedron& a, const Polyhedron& b) {
    return a.constraints_ < b.constraints_;
  }

 private:
  std::vector<LinConstraint> constraints_;
};

Polyhedron intersect(const Polyhedron& a, const Polyhedron& b);
Polyhedron add_constraint(const Polyhedron& p, const LinConstraint& c);

/// Rational-relaxation emptiness (after integer tightening of each constraint).
bool poly_is_empty(const Polyhedron& p);

/// Nonempty, pairwise disjoint polyhedra whose union is p \ q.
std::vector<Polyhedron> subtract(const Polyhedron& p, const Polyhedron& q);

/// {s : a(s) ∈ p}.
Polyhedron poly_preimage(const Polyhedron& p, const Assignment& a);

/// Drops constraints implied by the others.
Polyhedron remove_redundant(const Polyhedron& p);

/// Finite union of polyhedra.
struct Region {
  std::vector<Polyhedron> disjuncts;

  static Region universe() { return Region{{Polyhedron()}}; }
  static Region empty() { return Region{}; }

  bool contains(const State& s) const;
  std::string to_string() const;
  friend bool operator==(const Region& a, const Region& b) { return a.disjuncts == b.disjuncts; }
};

Region intersect(const Region& a, const Region& b);
Region intersect(const Region& a, const Polyhedron& p);
/// Disjoint nonempty pieces of a \ b.
Region subtract(const Region& a, const Region& b);
std::vector<Polyhedron> subtract(const Polyhedron& p, const Region& r);
Region region_preimage(const Region& r, const Assignment& a);
/// Same point set, pairwise disjoint nonempty disjuncts.
Region make_disjoint(const Region& r);
bool region_is_empty(const Region& r);
/// Drops empty disjuncts.
Region prune_empty(const Region& r);

/// Witness for h − g ≥ 0 on p:
///   h − g ≡ Σ_k multipliers[k]·(−e_k) + slack
/// where e_k ≤ 0 (multiplier ≥ 0) or e_k = 0 (multiplier of any sign) are
/// the constraints of p, in order.
struct FarkasCertificate {
  std::vector<Rational> multipliers;
  Rational slack = 0;
};

/// Decides g ≤ h on p over the rationals; fills `cert` on success.
/// Throws Error(EmptyPolyhedron) when p has no rational point.
bool farkas_dominates(const LinExpr& g, const LinExpr& h, const Polyhedron& p,
                      FarkasCertificate* cert = nullptr);

/// Exact identity check of a certificate.
bool verify_certificate(const LinExpr& g, const LinExpr& h, const Polyhedron& p,
                        const FarkasCertificate& cert);

}  // namespace prexpect

#pragma once

#include "prexpect/program.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace prexpect {

/// Fixed analysis layout: the regions φ_i and the template variables.
struct Domain {
  std::vector<Region> regions;
  std::vector<std::string> vars;
};
using DomainPtr = std::shared_ptr<const Domain>;

/// Throws Error(RegionMismatch) when two regions overlap.
DomainPtr make_domain(std::vector<Region> regions, std::vector<std::string> vars);

/// One affine row per region: coeffs[i][0] is the constant, coeffs[i][1 + j]
/// the coefficient of vars[j].
struct AbstractElement {
  DomainPtr domain;
  std::vector<std::vector<double>> coeffs;

  static AbstractElement bottom(DomainPtr domain);
  std::size_t rows() const { return coeffs.size(); }
  /// Exact value of row i.
  LinExpr row(std::size_t i) const;
  void set_row(std::size_t i, const LinExpr& e);
  friend bool operator==(const AbstractElement& a, const AbstractElement& b) {
    return a.coeffs == b.coeffs;
  }
};

PiecewiseExpr concretize(const AbstractElement& a);
/// Rows snapped to small-denominator rationals first.
PiecewiseExpr concretize_snapped(const AbstractElement& a, std::int64_t max_den);

/// γ(a) ≤ γ(b) on the union of the regions. Throws Error(RegionMismatch).
bool abstract_leq(const AbstractElement& a, const AbstractElement& b);

/// Abstract form of a post-expectation that is affine over the template
/// variables on every region. Throws Error(PostNotLinear).
AbstractElement abstract_post(DomainPtr domain, const PiecewiseExpr& beta);

/// Vertices of p ∩ [−box, box]^n in the space of `vars` ∪ variables(p).
std::vector<State> vertices(const Polyhedron& p, const std::vector<std::string>& vars,
                            long box = 100);

struct PlaneResult {
  LinExpr plane;
  Rational objective;  // Σ plane(points)
};

/// Affine g over `vars` with floor ≤ g and g ≤ every term on each piece,
/// maximizing Σ g(points); among optimal planes the smallest Σ|coefficient|.
/// Throws Error(InfeasibleSandwich).
PlaneResult lower_bound_plane(const FlatPieces& pieces, const LinExpr& floor,
                              const std::vector<State>& points,
                              const std::vector<std::string>& vars);

enum class Schedule {
  Jacobi,  // f applied to the previous iterate as is
  Pinned,  // rows inside the exit cell replaced by the post-expectation first
};

struct StepStats {
  std::size_t fallbacks = 0;  // rows whose rounded plane failed the exact check
  std::size_t kept = 0;       // rows kept because the plane LP had no rational solution
};

/// Next iterate: per region, a plane sandwiched between the previous row and
/// f(γ(a)). Both sides are re-verified exactly after rounding to doubles.
/// When a is itself an accepted iterate (floor_verified), a row stays below
/// f(γ(a)) on integer states by monotonicity, so an infeasible LP only
/// reflects non-integer points of the cover and the row is kept.
AbstractElement abstract_step(const NormalizedProgram& np, const AbstractElement& beta_abs,
                              const AbstractElement& a, Schedule schedule = Schedule::Jacobi,
                              StepStats* stats = nullptr, bool floor_verified = false);

}  // namespace prexpect

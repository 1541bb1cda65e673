#pragma once

#include "prexpect/rva.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace prexpect {

struct KleeneOptions {
  double eps = 1e-12;
  std::size_t max_iter = 10000;
  double divergence_bound = 1e12;
  /// Consecutive steps of non-shrinking same-sign growth that count as
  /// divergence; 0 disables the rule.
  std::size_t growth_window = 50;
  Schedule schedule = Schedule::Jacobi;
};

enum class TraceStatus { Converged, Diverged, MaxIterations };
const char* status_name(TraceStatus s);

struct IterationTrace {
  std::vector<AbstractElement> rows;  // rows[k] is the k-th iterate, rows[0] = ⊥
  TraceStatus status = TraceStatus::MaxIterations;
  double residual = 0;
  std::string reason;  // why iteration stopped
  std::size_t fallbacks = 0;  // rows carried over unchanged from the previous iterate
};

/// Kleene iteration with a trace that survives the failure.
class IterationError : public Error {
 public:
  IterationError(const Error& cause, IterationTrace partial)
      : Error(cause.kind(), cause.what()), partial_(std::move(partial)) {}
  const IterationTrace& partial() const { return partial_; }

 private:
  IterationTrace partial_;
};

IterationTrace kleene_iterate(const NormalizedProgram& np, const AbstractElement& beta_abs,
                              const KleeneOptions& opts = {});

/// f(phi) ≤ phi on the state space: phi is a pre-fixed point.
bool exactness_check(const NormalizedProgram& np, const PiecewiseExpr& beta,
                     const PiecewiseExpr& phi);

PiecewiseExpr apply_init(const PiecewiseExpr& phi, const Assignment& init);

/// alpha ≤ phi_init everywhere.
bool check_correctness(const PiecewiseExpr& alpha, const PiecewiseExpr& phi_init);

/// Index of the first row not dominated by its successor, or -1.
long verify_chain(const IterationTrace& trace);

}  // namespace prexpect

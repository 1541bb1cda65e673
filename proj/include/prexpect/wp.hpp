#pragma once

#include "prexpect/program.hpp"

namespace prexpect {

/// One step of the guarded loop body: on every cell, the minimum over the
/// enabled commands of Σ p_j·(x ∘ E_j); 0 outside the cells.
PiecewiseExpr wp_step(const NormalizedProgram& np, const PiecewiseExpr& x);

/// f.x = [G]·wp_step(x) + [¬G]·beta.
PiecewiseExpr loop_functional(const NormalizedProgram& np, const PiecewiseExpr& beta,
                              const PiecewiseExpr& x);

}  // namespace prexpect

#include "prexpect/wp.hpp"

#include "prexpect/parallel.hpp"

namespace prexpect {

namespace {

PiecewiseExpr cell_value(const NormalizedProgram& np, const Cell& cell, const PiecewiseExpr& x) {
  Region here{{cell.poly}};
  std::vector<PiecewiseExpr> per_command;
  for (std::size_t ci : cell.commands) {
    PiecewiseExpr sum;
    for (const auto& branch : np.choices[ci]) {
      PiecewiseExpr moved = pw_restrict(pw_compose(x, branch.assignment), here);
      sum = pw_add(sum, pw_scale(moved, branch.probability));
    }
    per_command.push_back(std::move(sum));
  }
  return pw_min(per_command, here);
}

}  // namespace

PiecewiseExpr wp_step(const NormalizedProgram& np, const PiecewiseExpr& x) {
  std::vector<PiecewiseExpr> parts(np.cells.size());
  parallel_for(np.cells.size(), [&](std::size_t i) { parts[i] = cell_value(np, np.cells[i], x); });
  PiecewiseExpr out;
  for (const auto& part : parts) out = pw_join(out, part);
  return simplify(out);
}

PiecewiseExpr loop_functional(const NormalizedProgram& np, const PiecewiseExpr& beta,
                              const PiecewiseExpr& x) {
  return simplify(pw_join(wp_step(np, x), pw_restrict(beta, np.exit)));
}

}  // namespace prexpect

#include "prexpect/fixpoint.hpp"

#include "prexpect/wp.hpp"

#include <cmath>

namespace prexpect {

const char* status_name(TraceStatus s) {
  switch (s) {
    case TraceStatus::Converged: return "Converged";
    case TraceStatus::Diverged: return "Diverged";
    case TraceStatus::MaxIterations: return "MaxIterations";
  }
  return "?";
}

IterationTrace kleene_iterate(const NormalizedProgram& np, const AbstractElement& beta_abs,
                              const KleeneOptions& opts) {
  IterationTrace trace;
  trace.rows.push_back(AbstractElement::bottom(beta_abs.domain));
  std::size_t width = beta_abs.domain->vars.size() + 1;
  std::size_t cells = beta_abs.rows() * width;
  std::vector<double> last_delta(cells, 0.0);
  std::vector<std::size_t> run(cells, 0);

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    StepStats stats;
    AbstractElement next;
    try {
      next = abstract_step(np, beta_abs, trace.rows.back(), opts.schedule, &stats, k > 1);
    } catch (const Error& e) {
      trace.reason = e.what();
      throw IterationError(e, std::move(trace));
    }
    trace.fallbacks += stats.fallbacks + stats.kept;
    const AbstractElement& prev = trace.rows.back();
    double residual = 0;
    bool over = false;
    bool growing = false;
    for (std::size_t i = 0; i < next.rows(); ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        double d = next.coeffs[i][j] - prev.coeffs[i][j];
        residual = std::max(residual, std::fabs(d));
        if (std::fabs(next.coeffs[i][j]) > opts.divergence_bound) over = true;
        std::size_t c = i * width + j;
        double l = last_delta[c];
        if (d != 0 && l != 0 && (d > 0) == (l > 0) && std::fabs(d) >= std::fabs(l))
          ++run[c];
        else
          run[c] = d != 0 ? 1 : 0;
        last_delta[c] = d;
        if (opts.growth_window > 0 && run[c] >= opts.growth_window) growing = true;
      }
    }
    trace.rows.push_back(std::move(next));
    trace.residual = residual;
    if (over) {
      trace.status = TraceStatus::Diverged;
      trace.reason = "a coefficient exceeds the divergence bound";
      return trace;
    }
    if (growing) {
      trace.status = TraceStatus::Diverged;
      trace.reason = "a coefficient grew without slowing for " + std::to_string(opts.growth_window) +
                     " consecutive iterations";
      return trace;
    }
    if (residual < opts.eps) {
      trace.status = TraceStatus::Converged;
      trace.reason = "coefficient change below eps";
      return trace;
    }
  }
  trace.status = TraceStatus::MaxIterations;
  trace.reason = "iteration limit reached";
  return trace;
}

bool exactness_check(const NormalizedProgram& np, const PiecewiseExpr& beta,
                     const PiecewiseExpr& phi) {
  return pw_dominates(loop_functional(np, beta, phi), phi, np.space);
}

PiecewiseExpr apply_init(const PiecewiseExpr& phi, const Assignment& init) {
  return simplify(pw_compose(phi, init));
}

bool check_correctness(const PiecewiseExpr& alpha, const PiecewiseExpr& phi_init) {
  return pw_dominates(alpha, phi_init);
}

long verify_chain(const IterationTrace& trace) {
  for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k)
    if (!abstract_leq(trace.rows[k], trace.rows[k + 1])) return static_cast<long>(k);
  return -1;
}

}  // namespace prexpect

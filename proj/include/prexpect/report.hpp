#pragma once

#include "prexpect/fixpoint.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace prexpect {

enum class Exactness { Exact, LowerBoundOnly, Unknown };
const char* exactness_name(Exactness e);

struct AnalysisOptions {
  KleeneOptions kleene;
  std::int64_t snap_max_den = 1000000;
  std::optional<PiecewiseExpr> alpha;
};

struct AnalysisReport {
  std::vector<std::string> vars;     // template variables (column order)
  std::vector<std::string> regions;  // rendered regions
  IterationTrace trace;
  Exactness exact = Exactness::Unknown;
  std::optional<PiecewiseExpr> fixed_point;  // snapped, when Exact
  std::optional<PiecewiseExpr> init_value;
  std::optional<bool> alpha_holds;
  long chain_violation = -1;
  std::string error;  // set when iteration aborted
  std::vector<std::pair<std::string, double>> timings_ms;

  bool failed() const {
    return !error.empty() || trace.status == TraceStatus::Diverged || chain_violation >= 0;
  }
};

/// normalize → iterate → exactness check → initialization → correctness.
/// Parse-level problems (PostNotLinear, InvariantViolation, ...) throw.
AnalysisReport analyze(const Program& p, const AnalysisOptions& opts = {});

/// Single-piece values print as the bare expression.
std::string render_value(const PiecewiseExpr& e);

/// 10 significant digits.
std::string format_coeff(double v);

std::string format_table(const AnalysisReport& r);
std::string format_csv(const AnalysisReport& r);
std::string format_json(const AnalysisReport& r);

}  // namespace prexpect

#include "prexpect/report.hpp"

#include "prexpect/parser.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>

namespace prexpect {

const char* exactness_name(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "Exact";
    case Exactness::LowerBoundOnly: return "LowerBoundOnly";
    case Exactness::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Report column order: variables, then the constant.
std::vector<double> columns(const AbstractElement& a, std::size_t i) {
  std::vector<double> out(a.coeffs[i].begin() + 1, a.coeffs[i].end());
  out.push_back(a.coeffs[i][0]);
  return out;
}

}  // namespace

AnalysisReport analyze(const Program& p, const AnalysisOptions& opts) {
  AnalysisReport r;
  auto t0 = Clock::now();
  NormalizedProgram np = normalize(p);
  DomainPtr dom = make_domain(analysis_regions(p, np), p.abstract_vars());
  AbstractElement beta_abs = abstract_post(dom, p.post);
  r.vars = dom->vars;
  for (const auto& reg : dom->regions) r.regions.push_back(reg.to_string());
  r.timings_ms.emplace_back("normalize", ms_since(t0));

  t0 = Clock::now();
  try {
    r.trace = kleene_iterate(np, beta_abs, opts.kleene);
  } catch (const IterationError& e) {
    r.trace = e.partial();
    r.error = e.what();
  }
  r.timings_ms.emplace_back("iterate", ms_since(t0));

  t0 = Clock::now();
  r.chain_violation = verify_chain(r.trace);
  r.timings_ms.emplace_back("chain", ms_since(t0));
  if (!r.error.empty() || r.trace.status == TraceStatus::Diverged) return r;

  t0 = Clock::now();
  const AbstractElement& last = r.trace.rows.back();
  PiecewiseExpr beta = concretize(beta_abs);
  PiecewiseExpr snapped = concretize_snapped(last, opts.snap_max_den);
  PiecewiseExpr bound = concretize(last);
  if (r.trace.status == TraceStatus::Converged && exactness_check(np, beta, snapped)) {
    r.exact = Exactness::Exact;
    r.fixed_point = snapped;
  } else {
    r.exact = Exactness::LowerBoundOnly;
  }
  r.timings_ms.emplace_back("exactness", ms_since(t0));

  t0 = Clock::now();
  if (p.init) {
    r.init_value = apply_init(r.exact == Exactness::Exact ? snapped : bound, *p.init);
    if (opts.alpha) r.alpha_holds = check_correctness(*opts.alpha, *r.init_value);
  }
  r.timings_ms.emplace_back("init", ms_since(t0));
  return r;
}

std::string render_value(const PiecewiseExpr& e) {
  if (e.pieces().empty()) return "0";
  if (e.pieces().size() == 1) {
    const Piece& p = e.pieces()[0];
    if (p.region == Region::universe()) return p.value.to_string();
    return p.value.to_string() + "  when " + p.region.to_string();
  }
  return print_pwexpr(e);
}

std::string format_coeff(double v) {
  if (v == 0) v = 0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_table(const AnalysisReport& r) {
  std::ostringstream os;
  std::string cols;
  for (const auto& v : r.vars) cols += v + ", ";
  cols += "1";
  os << "regions (rows are coefficients of " << cols << "):\n";
  for (std::size_t i = 0; i < r.regions.size(); ++i)
    os << "  phi" << i + 1 << ": " << r.regions[i] << "\n";
  os << "iter";
  for (std::size_t i = 0; i < r.regions.size(); ++i) os << "  phi" << i + 1;
  os << "\n";
  for (std::size_t k = 0; k < r.trace.rows.size(); ++k) {
    os << k;
    const auto& a = r.trace.rows[k];
    for (std::size_t i = 0; i < a.rows(); ++i) {
      os << "  (";
      auto c = columns(a, i);
      for (std::size_t j = 0; j < c.size(); ++j) os << (j ? ", " : "") << format_coeff(c[j]);
      os << ")";
    }
    os << "\n";
  }
  os << "status: " << status_name(r.trace.status) << " after " << r.trace.rows.size() - 1
     << " iterations (" << r.trace.reason << ")\n";
  if (r.trace.status == TraceStatus::Diverged)
    os << "note: no pre-fixed point detected at this bound; this is not a proof of divergence\n";
  if (r.trace.status == TraceStatus::MaxIterations)
    os << "warning: iteration limit reached; the last row is still a sound lower bound\n";
  os << "residual: " << format_coeff(r.trace.residual) << "\n";
  if (!r.error.empty()) os << "error: " << r.error << "\n";
  if (r.chain_violation >= 0)
    os << "error: chain not ascending between iterations " << r.chain_violation << " and "
       << r.chain_violation + 1 << "\n";
  os << "exact: " << exactness_name(r.exact) << "\n";
  if (r.exact == Exactness::LowerBoundOnly && r.trace.status == TraceStatus::Converged)
    os << "note: the snapped fixed point is inexact or unsnappable\n";
  if (r.init_value) os << "initial value: " << render_value(*r.init_value) << "\n";
  if (r.alpha_holds) os << "alpha check: " << (*r.alpha_holds ? "holds" : "not established") << "\n";
  return os.str();
}

std::string format_csv(const AnalysisReport& r) {
  std::ostringstream os;
  os << "iter";
  for (std::size_t i = 0; i < r.regions.size(); ++i) {
    for (const auto& v : r.vars) os << ",phi" << i + 1 << "_" << v;
    os << ",phi" << i + 1 << "_1";
  }
  os << "\n";
  for (std::size_t k = 0; k < r.trace.rows.size(); ++k) {
    os << k;
    const auto& a = r.trace.rows[k];
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (double c : columns(a, i)) os << "," << format_coeff(c);
    os << "\n";
  }
  return os.str();
}

std::string format_json(const AnalysisReport& r) {
  using nlohmann::json;
  json j;
  j["variables"] = r.vars;
  j["regions"] = r.regions;
  json rows = json::array();
  for (std::size_t k = 0; k < r.trace.rows.size(); ++k) {
    const auto& a = r.trace.rows[k];
    json row;
    row["iter"] = k;
    json coeffs = json::array(), snapped = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto c = columns(a, i);
      coeffs.push_back(c);
      json s = json::array();
      for (double v : c) s.push_back(to_string(snap(v, 1000000)));
      snapped.push_back(s);
    }
    row["coefficients"] = coeffs;
    row["snapped"] = snapped;
    rows.push_back(row);
  }
  j["trace"] = {{"rows", rows},
                {"status", status_name(r.trace.status)},
                {"residual", r.trace.residual},
                {"reason", r.trace.reason},
                {"keptRows", r.trace.fallbacks}};
  j["exact"] = exactness_name(r.exact);
  j["initValue"] = r.init_value ? json(render_value(*r.init_value)) : json(nullptr);
  if (r.alpha_holds) j["alphaHolds"] = *r.alpha_holds;
  if (!r.error.empty()) j["error"] = r.error;
  if (r.chain_violation >= 0) j["chainViolation"] = r.chain_violation;
  json t = json::object();
  for (const auto& [name, ms] : r.timings_ms) t[name] = ms;
  j["timingsMs"] = t;
  return j.dump(2) + "\n";
}

}  // namespace prexpect

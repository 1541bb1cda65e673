#include "prexpect/rva.hpp"

#include "prexpect/errors.hpp"
#include "prexpect/lp.hpp"
#include "prexpect/parallel.hpp"
#include "prexpect/wp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace prexpect {

DomainPtr make_domain(std::vector<Region> regions, std::vector<std::string> vars) {
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (!region_is_empty(intersect(regions[i], regions[j])))
        throw Error(ErrorKind::RegionMismatch, "regions " + std::to_string(i + 1) + " and " +
                                                   std::to_string(j + 1) + " overlap");
  auto d = std::make_shared<Domain>();
  d->regions = std::move(regions);
  d->vars = std::move(vars);
  return d;
}

AbstractElement AbstractElement::bottom(DomainPtr domain) {
  AbstractElement a;
  a.coeffs.assign(domain->regions.size(), std::vector<double>(domain->vars.size() + 1, 0.0));
  a.domain = std::move(domain);
  return a;
}

LinExpr AbstractElement::row(std::size_t i) const {
  LinExpr e(from_double(coeffs[i][0]));
  for (std::size_t j = 0; j < domain->vars.size(); ++j)
    e.set_coeff(domain->vars[j], from_double(coeffs[i][j + 1]));
  return e;
}

void AbstractElement::set_row(std::size_t i, const LinExpr& e) {
  coeffs[i][0] = to_double(e.constant());
  for (std::size_t j = 0; j < domain->vars.size(); ++j)
    coeffs[i][j + 1] = to_double(e.coeff(domain->vars[j]));
}

namespace {

PiecewiseExpr concretize_rows(const AbstractElement& a, const std::vector<LinExpr>& rows) {
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Region& r = a.domain->regions[i];
    if (r.disjuncts.empty()) continue;
    pieces.push_back({r, MinExpr(rows[i])});
  }
  return PiecewiseExpr(std::move(pieces));
}

Region union_of(const Domain& d) {
  Region u;
  for (const auto& r : d.regions) u.disjuncts.insert(u.disjuncts.end(), r.disjuncts.begin(), r.disjuncts.end());
  return u;
}

void require_same_domain(const AbstractElement& a, const AbstractElement& b) {
  if (a.domain == b.domain) return;
  if (!a.domain || !b.domain || a.domain->vars != b.domain->vars ||
      a.domain->regions.size() != b.domain->regions.size())
    throw Error(ErrorKind::RegionMismatch, "abstract elements over different domains");
  for (std::size_t i = 0; i < a.domain->regions.size(); ++i)
    if (!(a.domain->regions[i] == b.domain->regions[i]))
      throw Error(ErrorKind::RegionMismatch, "region " + std::to_string(i + 1) + " differs");
}

}  // namespace

PiecewiseExpr concretize(const AbstractElement& a) {
  std::vector<LinExpr> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  return concretize_rows(a, rows);
}

PiecewiseExpr concretize_snapped(const AbstractElement& a, std::int64_t max_den) {
  std::vector<LinExpr> rows;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    LinExpr e(snap(a.coeffs[i][0], max_den));
    for (std::size_t j = 0; j < a.domain->vars.size(); ++j)
      e.set_coeff(a.domain->vars[j], snap(a.coeffs[i][j + 1], max_den));
    rows.push_back(std::move(e));
  }
  return concretize_rows(a, rows);
}

bool abstract_leq(const AbstractElement& a, const AbstractElement& b) {
  require_same_domain(a, b);
  return pw_dominates(concretize(a), concretize(b), union_of(*a.domain));
}

AbstractElement abstract_post(DomainPtr domain, const PiecewiseExpr& beta) {
  AbstractElement out = AbstractElement::bottom(domain);
  std::set<std::string> allowed(domain->vars.begin(), domain->vars.end());
  for (std::size_t i = 0; i < domain->regions.size(); ++i) {
    FlatPieces cover = pw_cover(beta, domain->regions[i]);
    if (cover.empty()) continue;
    std::optional<LinExpr> row;
    for (const auto& fp : cover) {
      if (fp.value.terms().size() != 1)
        throw Error(ErrorKind::PostNotLinear, "post-expectation is a minimum on region " + std::to_string(i + 1));
      const LinExpr& t = fp.value.terms()[0];
      if (!row) {
        for (const auto& [v, c] : t.coeffs())
          if (!allowed.count(v))
            throw Error(ErrorKind::PostNotLinear,
                        "post-expectation mentions non-template variable " + v);
        row = t;
      } else if (!(t == *row) &&
                 !(farkas_dominates(t, *row, fp.poly) && farkas_dominates(*row, t, fp.poly))) {
        throw Error(ErrorKind::PostNotLinear,
                    "post-expectation is not one affine expression on region " + std::to_string(i + 1));
      }
    }
    out.set_row(i, *row);
    if (!(out.row(i) == *row))
      throw Error(ErrorKind::PostNotLinear, "post-expectation coefficient is not a double");
  }
  return out;
}

namespace {

/// Solves the square system rows·x = rhs; nullopt when singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m,
                                                  std::vector<Rational> rhs) {
  std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

}  // namespace

std::vector<State> vertices(const Polyhedron& p, const std::vector<std::string>& vars, long box) {
  std::set<std::string> names = p.variables();
  names.insert(vars.begin(), vars.end());
  std::vector<std::string> dims(names.begin(), names.end());
  std::size_t d = dims.size();

  std::vector<LinConstraint> cs = p.constraints();
  for (const auto& v : dims) {
    cs.push_back({LinExpr::var(v) - LinExpr(Rational(box)), Rel::Le});
    cs.push_back({-LinExpr::var(v) - LinExpr(Rational(box)), Rel::Le});
  }
  std::set<State> found;
  if (d == 0) {
    if (!p.is_trivially_empty()) found.insert(State{});
    return {found.begin(), found.end()};
  }
  // Enumerate d-subsets of constraints as candidate active sets.
  std::vector<std::size_t> pick(d);
  for (std::size_t i = 0; i < d; ++i) pick[i] = i;
  while (pick.size() == d && cs.size() >= d) {
    std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
    std::vector<Rational> rhs(d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) m[r][c] = cs[pick[r]].expr.coeff(dims[c]);
      rhs[r] = -cs[pick[r]].expr.constant();
    }
    if (auto x = solve_square(std::move(m), std::move(rhs))) {
      State s;
      for (std::size_t c = 0; c < d; ++c) s[dims[c]] = (*x)[c];
      bool ok = std::all_of(cs.begin(), cs.end(), [&](const LinConstraint& c) { return c.holds(s); });
      if (ok) found.insert(std::move(s));
    }
    // next combination
    std::size_t i = d;
    while (i > 0 && pick[i - 1] == cs.size() - d + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return {found.begin(), found.end()};
}

namespace {

struct PlaneLp {
  lp::Problem prob;
  std::vector<int> g;  // g[0] constant, g[1 + j] coefficient of vars[j]
  lp::Form objective;
};

/// upper − lower ≡ Σ λ_k·(−e_k) + c0 over p, where the decision plane enters
/// with sign `plane_sign` and `data` is the fixed part of upper − lower.
void add_farkas_block(PlaneLp& L, const Polyhedron& p, const LinExpr& data, int plane_sign,
                      const std::vector<std::string>& vars) {
  const auto& cs = p.constraints();
  std::vector<int> mult(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) mult[k] = L.prob.add_var(cs[k].rel != Rel::Eq);
  int slack = L.prob.add_var(true);

  std::set<std::string> names = p.variables();
  for (const auto& [v, c] : data.coeffs()) names.insert(v);
  names.insert(vars.begin(), vars.end());
  std::map<std::string, int> var_index;
  for (std::size_t j = 0; j < vars.size(); ++j) var_index[vars[j]] = L.g[j + 1];

  for (const auto& v : names) {
    // data_v + sign·g_v + Σ λ_k e_{k,v} = 0
    lp::Form f;
    auto it = var_index.find(v);
    if (it != var_index.end()) f.emplace_back(it->second, Rational(plane_sign));
    for (std::size_t k = 0; k < cs.size(); ++k) {
      Rational a = cs[k].expr.coeff(v);
      if (a != 0) f.emplace_back(mult[k], a);
    }
    L.prob.add_row(std::move(f), lp::Sense::Eq, -data.coeff(v));
  }
  lp::Form f;
  f.emplace_back(L.g[0], Rational(plane_sign));
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const Rational& a = cs[k].expr.constant();
    if (a != 0) f.emplace_back(mult[k], a);
  }
  f.emplace_back(slack, Rational(-1));
  L.prob.add_row(std::move(f), lp::Sense::Eq, -data.constant());
}

PlaneLp build_plane_lp(const FlatPieces& pieces, const LinExpr& floor,
                       const std::vector<State>& points, const std::vector<std::string>& vars) {
  PlaneLp L;
  for (std::size_t j = 0; j <= vars.size(); ++j) L.g.push_back(L.prob.add_var(false));
  for (const auto& fp : pieces) {
    for (const auto& t : fp.value.terms()) add_farkas_block(L, fp.poly, t, -1, vars);
    add_farkas_block(L, fp.poly, -floor, +1, vars);
  }
  Rational count = static_cast<long>(points.size());
  if (count != 0) L.objective.emplace_back(L.g[0], count);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    Rational sum = 0;
    for (const auto& s : points) {
      auto it = s.find(vars[j]);
      if (it != s.end()) sum += it->second;
    }
    if (sum != 0) L.objective.emplace_back(L.g[j + 1], sum);
  }
  return L;
}

}  // namespace

PlaneResult lower_bound_plane(const FlatPieces& pieces, const LinExpr& floor,
                              const std::vector<State>& points,
                              const std::vector<std::string>& vars) {
  PlaneLp first = build_plane_lp(pieces, floor, points, vars);
  first.prob.maximize(first.objective);
  lp::Result r1 = first.prob.solve();
  if (r1.status == lp::Status::Infeasible)
    throw Error(ErrorKind::InfeasibleSandwich, "no affine plane between the previous iterate and f");
  if (r1.status == lp::Status::Unbounded)
    throw Error(ErrorKind::InfeasibleSandwich, "plane objective unbounded");

  PlaneLp second = build_plane_lp(pieces, floor, points, vars);
  second.prob.add_row(second.objective, lp::Sense::Eq, r1.objective);
  lp::Form size;
  for (std::size_t j = 1; j <= vars.size(); ++j) {
    int u = second.prob.add_var(true);
    second.prob.add_row({{u, Rational(1)}, {second.g[j], Rational(-1)}}, lp::Sense::Ge, 0);
    second.prob.add_row({{u, Rational(1)}, {second.g[j], Rational(1)}}, lp::Sense::Ge, 0);
    size.emplace_back(u, Rational(1));
  }
  second.prob.minimize(size);
  lp::Result r2 = second.prob.solve();
  const lp::Result& r = r2.status == lp::Status::Optimal ? r2 : r1;
  const PlaneLp& used = r2.status == lp::Status::Optimal ? second : first;

  PlaneResult out;
  out.plane = LinExpr(r.x[used.g[0]]);
  for (std::size_t j = 0; j < vars.size(); ++j) out.plane.set_coeff(vars[j], r.x[used.g[j + 1]]);
  out.objective = r1.objective;
  return out;
}

AbstractElement abstract_step(const NormalizedProgram& np, const AbstractElement& beta_abs,
                              const AbstractElement& a, Schedule schedule, StepStats* stats,
                              bool floor_verified) {
  require_same_domain(beta_abs, a);
  const Domain& dom = *a.domain;

  AbstractElement source = a;
  if (schedule == Schedule::Pinned) {
    for (std::size_t i = 0; i < dom.regions.size(); ++i) {
      const Region& r = dom.regions[i];
      if (!r.disjuncts.empty() && region_is_empty(subtract(r, np.exit)))
        source.coeffs[i] = beta_abs.coeffs[i];
    }
  }
  PiecewiseExpr F = loop_functional(np, concretize(beta_abs), concretize(source));

  AbstractElement next = a;
  std::vector<char> fell_back(dom.regions.size(), 0), kept(dom.regions.size(), 0);
  parallel_for(dom.regions.size(), [&](std::size_t i) {
    const Region& region = dom.regions[i];
    if (region.disjuncts.empty()) return;
    if (pw_restrict(F, region).pieces().empty()) {
      // f carries no information here: keep the previous row.
      return;
    }
    LinExpr floor = a.row(i);
    FlatPieces cover = pw_cover(F, region);
    std::vector<State> points;
    for (const auto& fp : cover) {
      auto vs = vertices(fp.poly, dom.vars);
      points.insert(points.end(), vs.begin(), vs.end());
    }
    LinExpr plane;
    try {
      plane = lower_bound_plane(cover, floor, points, dom.vars).plane;
    } catch (const Error& e) {
      if (floor_verified && e.kind() == ErrorKind::InfeasibleSandwich) {
        kept[i] = 1;
        return;
      }
      throw Error(ErrorKind::InfeasibleSandwich, "region " + std::to_string(i + 1) + ": " + e.what());
    }
    std::vector<double> saved = next.coeffs[i];
    next.set_row(i, plane);
    LinExpr rounded = next.row(i);
    bool ok = true;
    for (const auto& poly : region.disjuncts)
      ok = ok && farkas_dominates(floor, rounded, poly);
    ok = ok && pw_dominates(PiecewiseExpr::everywhere(MinExpr(rounded)), F, region);
    if (!ok) {
      next.coeffs[i] = saved;
      fell_back[i] = 1;
    }
  });
  if (stats) {
    stats->fallbacks += static_cast<std::size_t>(std::count(fell_back.begin(), fell_back.end(), 1));
    stats->kept += static_cast<std::size_t>(std::count(kept.begin(), kept.end(), 1));
  }
  return next;
}

}  // namespace prexpect

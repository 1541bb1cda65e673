#include "prexpect/polyhedron.hpp"

#include "prexpect/lp.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace prexpect {

namespace {

struct Bounds {
  std::optional<Integer> lo, hi;
};

}  // namespace

Polyhedron::Polyhedron(const std::vector<LinConstraint>& constraints) {
  // Key: primitive integer direction d with a positive leading coefficient.
  std::map<std::map<std::string, Rational>, Bounds> by_direction;
  for (const auto& raw : constraints) {
    auto norm = normalize_integer(raw);
    if (!norm) continue;
    if (norm->expr.is_constant()) {  // normalize_integer's contradiction
      constraints_ = {false_constraint()};
      return;
    }
    const auto& coeffs = norm->expr.coeffs();
    bool positive = coeffs.begin()->second > 0;
    std::map<std::string, Rational> dir = coeffs;
    if (!positive)
      for (auto& [v, c] : dir) c = -c;
    Integer c = norm->expr.constant().get_num();
    Bounds& b = by_direction[dir];
    auto tighten_hi = [&](const Integer& v) {
      if (!b.hi || v < *b.hi) b.hi = v;
    };
    auto tighten_lo = [&](const Integer& v) {
      if (!b.lo || v > *b.lo) b.lo = v;
    };
    if (norm->rel == Rel::Eq) {
      // Equalities come out of normalize_integer with a positive lead.
      tighten_hi(Integer(-c));
      tighten_lo(Integer(-c));
    } else if (positive) {
      tighten_hi(Integer(-c));
    } else {
      tighten_lo(c);
    }
  }
  for (const auto& [dir, b] : by_direction) {
    LinExpr d;
    for (const auto& [v, c] : dir) d.set_coeff(v, c);
    if (b.lo && b.hi && *b.lo > *b.hi) {
      constraints_ = {false_constraint()};
      return;
    }
    if (b.lo && b.hi && *b.lo == *b.hi) {
      constraints_.push_back({d - LinExpr(Rational(*b.lo)), Rel::Eq});
      continue;
    }
    if (b.hi) constraints_.push_back({d - LinExpr(Rational(*b.hi)), Rel::Le});
    if (b.lo) constraints_.push_back({LinExpr(Rational(*b.lo)) - d, Rel::Le});
  }
  std::sort(constraints_.begin(), constraints_.end());
}

bool Polyhedron::is_trivially_empty() const {
  return constraints_.size() == 1 && constraints_[0].expr.is_constant();
}

bool Polyhedron::contains(const State& s) const {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const LinConstraint& c) { return c.holds(s); });
}

std::set<std::string> Polyhedron::variables() const {
  std::set<std::string> out;
  for (const auto& c : constraints_)
    for (const auto& [v, k] : c.expr.coeffs()) out.insert(v);
  return out;
}

std::string Polyhedron::to_string() const {
  if (constraints_.empty()) return "true";
  if (is_trivially_empty()) return "false";
  std::ostringstream os;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    if (i) os << " && ";
    const auto& c = constraints_[i];
    LinExpr lhs = c.expr;
    lhs.set_constant(0);
    Rational rhs = -c.expr.constant();
    bool flip = !lhs.coeffs().empty() && lhs.coeffs().begin()->second < 0;
    if (flip) {
      lhs = -lhs;
      rhs = -rhs;
    }
    os << lhs.to_string() << (c.rel == Rel::Eq ? " = " : flip ? " >= " : " <= ") << rhs.get_str();
  }
  return os.str();
}

Polyhedron intersect(const Polyhedron& a, const Polyhedron& b) {
  std::vector<LinConstraint> cs = a.constraints();
  cs.insert(cs.end(), b.constraints().begin(), b.constraints().end());
  return Polyhedron(cs);
}

Polyhedron add_constraint(const Polyhedron& p, const LinConstraint& c) {
  std::vector<LinConstraint> cs = p.constraints();
  cs.push_back(c);
  return Polyhedron(cs);
}

namespace {

/// Variables of the LP are the polyhedron's variables, all free.
lp::Problem feasibility_problem(const Polyhedron& p, std::map<std::string, int>& index) {
  lp::Problem prob;
  for (const auto& v : p.variables()) index[v] = prob.add_var(false);
  for (const auto& c : p.constraints()) {
    lp::Form f;
    for (const auto& [v, k] : c.expr.coeffs()) f.emplace_back(index[v], k);
    prob.add_row(std::move(f), c.rel == Rel::Eq ? lp::Sense::Eq : lp::Sense::Le,
                 -c.expr.constant());
  }
  return prob;
}

}  // namespace

bool poly_is_empty(const Polyhedron& p) {
  if (p.is_universe()) return false;
  if (p.is_trivially_empty()) return true;
  if (p.constraints().size() == 1) return false;  // a single normalized constraint is satisfiable
  std::map<std::string, int> index;
  return feasibility_problem(p, index).solve().status == lp::Status::Infeasible;
}

std::vector<Polyhedron> subtract(const Polyhedron& p, const Polyhedron& q) {
  if (q.is_universe()) return {};
  Polyhedron both = intersect(p, q);
  if (poly_is_empty(both)) {
    if (poly_is_empty(p)) return {};
    return {p};
  }
  std::vector<Polyhedron> out;
  Polyhedron acc = p;
  for (const auto& c : q.constraints()) {
    for (const auto& neg : negate_integer(c)) {
      Polyhedron piece = add_constraint(acc, neg);
      if (!poly_is_empty(piece)) out.push_back(std::move(piece));
    }
    acc = add_constraint(acc, c);
  }
  return out;
}

Polyhedron poly_preimage(const Polyhedron& p, const Assignment& a) {
  std::vector<LinConstraint> cs;
  cs.reserve(p.constraints().size());
  for (const auto& c : p.constraints()) cs.push_back({affine_compose(c.expr, a), c.rel});
  return Polyhedron(cs);
}

Polyhedron remove_redundant(const Polyhedron& p) {
  std::vector<LinConstraint> kept = p.constraints();
  if (p.is_trivially_empty()) return p;
  for (std::size_t i = 0; i < kept.size();) {
    if (kept[i].rel == Rel::Eq) {
      ++i;
      continue;
    }
    std::vector<LinConstraint> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    // Redundant iff no point of the others satisfies the integer complement.
    Polyhedron others_p(others);
    bool redundant = true;
    for (const auto& neg : negate_integer(kept[i])) {
      if (!poly_is_empty(add_constraint(others_p, neg))) {
        redundant = false;
        break;
      }
    }
    if (redundant)
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return Polyhedron(kept);
}

bool Region::contains(const State& s) const {
  return std::any_of(disjuncts.begin(), disjuncts.end(),
                     [&](const Polyhedron& p) { return p.contains(s); });
}

std::string Region::to_string() const {
  if (disjuncts.empty()) return "false";
  std::ostringstream os;
  for (std::size_t i = 0; i < disjuncts.size(); ++i) {
    if (i) os << " || ";
    if (disjuncts.size() > 1) os << "(";
    os << disjuncts[i].to_string();
    if (disjuncts.size() > 1) os << ")";
  }
  return os.str();
}

Region intersect(const Region& a, const Polyhedron& p) {
  Region out;
  for (const auto& d : a.disjuncts) {
    Polyhedron q = intersect(d, p);
    if (!poly_is_empty(q)) out.disjuncts.push_back(std::move(q));
  }
  return out;
}

Region intersect(const Region& a, const Region& b) {
  Region out;
  for (const auto& p : b.disjuncts) {
    Region part = intersect(a, p);
    out.disjuncts.insert(out.disjuncts.end(), part.disjuncts.begin(), part.disjuncts.end());
  }
  return out;
}

std::vector<Polyhedron> subtract(const Polyhedron& p, const Region& r) {
  std::vector<Polyhedron> current{p};
  for (const auto& q : r.disjuncts) {
    std::vector<Polyhedron> next;
    for (const auto& c : current) {
      auto parts = subtract(c, q);
      next.insert(next.end(), parts.begin(), parts.end());
    }
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

Region subtract(const Region& a, const Region& b) {
  Region out;
  for (const auto& p : a.disjuncts) {
    auto parts = subtract(p, b);
    out.disjuncts.insert(out.disjuncts.end(), parts.begin(), parts.end());
  }
  return out;
}

Region region_preimage(const Region& r, const Assignment& a) {
  Region out;
  for (const auto& p : r.disjuncts) out.disjuncts.push_back(poly_preimage(p, a));
  return out;
}

Region make_disjoint(const Region& r) {
  Region out;
  for (const auto& p : r.disjuncts) {
    auto parts = subtract(p, out);
    out.disjuncts.insert(out.disjuncts.end(), parts.begin(), parts.end());
  }
  return out;
}

bool region_is_empty(const Region& r) {
  return std::all_of(r.disjuncts.begin(), r.disjuncts.end(), poly_is_empty);
}

Region prune_empty(const Region& r) {
  Region out;
  for (const auto& p : r.disjuncts)
    if (!poly_is_empty(p)) out.disjuncts.push_back(p);
  return out;
}

bool farkas_dominates(const LinExpr& g, const LinExpr& h, const Polyhedron& p,
                      FarkasCertificate* cert) {
  if (poly_is_empty(p)) throw Error(ErrorKind::EmptyPolyhedron, "dominance query over " + p.to_string());
  const LinExpr diff = h - g;
  const auto& cs = p.constraints();

  lp::Problem prob;
  std::vector<int> mult(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) mult[k] = prob.add_var(cs[k].rel != Rel::Eq);
  int slack = prob.add_var(true);

  std::set<std::string> vars = p.variables();
  for (const auto& [v, c] : diff.coeffs()) vars.insert(v);
  for (const auto& v : vars) {
    lp::Form f;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      Rational a = cs[k].expr.coeff(v);
      if (a != 0) f.emplace_back(mult[k], Rational(-a));
    }
    prob.add_row(std::move(f), lp::Sense::Eq, diff.coeff(v));
  }
  lp::Form fc;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const Rational& a = cs[k].expr.constant();
    if (a != 0) fc.emplace_back(mult[k], Rational(-a));
  }
  fc.emplace_back(slack, Rational(1));
  prob.add_row(std::move(fc), lp::Sense::Eq, diff.constant());

  lp::Result res = prob.solve();
  if (res.status != lp::Status::Optimal) return false;
  if (cert) {
    cert->multipliers.clear();
    for (int m : mult) cert->multipliers.push_back(res.x[m]);
    cert->slack = res.x[slack];
  }
  return true;
}

bool verify_certificate(const LinExpr& g, const LinExpr& h, const Polyhedron& p,
                        const FarkasCertificate& cert) {
  const auto& cs = p.constraints();
  if (cert.multipliers.size() != cs.size() || cert.slack < 0) return false;
  LinExpr combo(cert.slack);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs[k].rel != Rel::Eq && cert.multipliers[k] < 0) return false;
    combo -= cs[k].expr * cert.multipliers[k];
  }
  return combo == h - g;
}

}  // namespace prexpect

#include "prexpect/piecewise.hpp"

#include "prexpect/lp.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

namespace prexpect {

MinExpr::MinExpr(std::vector<LinExpr> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) terms_.emplace_back();
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
}

Rational MinExpr::evaluate(const State& s) const {
  Rational best = terms_[0].evaluate(s);
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    Rational v = terms_[i].evaluate(s);
    if (v < best) best = v;
  }
  return best;
}

std::string MinExpr::to_string() const {
  if (terms_.size() == 1) return terms_[0].to_string();
  std::string out = "min(";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += ", ";
    out += terms_[i].to_string();
  }
  return out + ")";
}

MinExpr operator+(const MinExpr& a, const MinExpr& b) {
  std::vector<LinExpr> sums;
  sums.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) sums.push_back(s + t);
  return MinExpr(std::move(sums));
}

MinExpr MinExpr::scaled(const Rational& k) const {
  std::vector<LinExpr> out;
  for (const auto& t : terms_) out.push_back(t * k);
  return MinExpr(std::move(out));
}

MinExpr MinExpr::composed(const Assignment& a) const {
  std::vector<LinExpr> out;
  for (const auto& t : terms_) out.push_back(affine_compose(t, a));
  return MinExpr(std::move(out));
}

MinExpr MinExpr::min_of(const MinExpr& a, const MinExpr& b) {
  std::vector<LinExpr> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return MinExpr(std::move(all));
}

PiecewiseExpr PiecewiseExpr::everywhere(MinExpr value) {
  return PiecewiseExpr({Piece{Region::universe(), std::move(value)}});
}

PiecewiseExpr PiecewiseExpr::from_flat(const FlatPieces& flat) {
  std::vector<Piece> pieces;
  std::map<MinExpr, std::size_t> slot;
  for (const auto& fp : flat) {
    auto [it, inserted] = slot.emplace(fp.value, pieces.size());
    if (inserted) pieces.push_back(Piece{Region{}, fp.value});
    pieces[it->second].region.disjuncts.push_back(fp.poly);
  }
  return PiecewiseExpr(std::move(pieces));
}

FlatPieces PiecewiseExpr::flat() const {
  FlatPieces out;
  for (const auto& p : pieces_)
    for (const auto& d : p.region.disjuncts) out.push_back({d, p.value});
  return out;
}

Region PiecewiseExpr::support() const {
  Region r;
  for (const auto& p : pieces_)
    r.disjuncts.insert(r.disjuncts.end(), p.region.disjuncts.begin(), p.region.disjuncts.end());
  return r;
}

std::string PiecewiseExpr::to_string() const {
  if (pieces_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i) os << "\n";
    os << "[" << pieces_[i].region.to_string() << "] " << pieces_[i].value.to_string();
  }
  return os.str();
}

bool operator==(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  if (a.pieces_.size() != b.pieces_.size()) return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
    if (!(a.pieces_[i].value == b.pieces_[i].value)) return false;
    if (!(a.pieces_[i].region == b.pieces_[i].region)) return false;
  }
  return true;
}

Rational pw_evaluate(const PiecewiseExpr& x, const State& s) {
  for (const auto& p : x.pieces())
    if (p.region.contains(s)) return p.value.evaluate(s);
  return 0;
}

PiecewiseExpr pw_add(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  if (a.pieces().empty()) return b;
  if (b.pieces().empty()) return a;
  FlatPieces fa = a.flat(), fb = b.flat();
  Region sa = a.support(), sb = b.support();
  FlatPieces out;
  for (const auto& pa : fa) {
    for (const auto& pb : fb) {
      Polyhedron both = intersect(pa.poly, pb.poly);
      if (!poly_is_empty(both)) out.push_back({std::move(both), pa.value + pb.value});
    }
    for (auto& rest : subtract(pa.poly, sb)) out.push_back({std::move(rest), pa.value});
  }
  for (const auto& pb : fb)
    for (auto& rest : subtract(pb.poly, sa)) out.push_back({std::move(rest), pb.value});
  return PiecewiseExpr::from_flat(out);
}

PiecewiseExpr pw_scale(const PiecewiseExpr& a, const Rational& k) {
  if (k == 0) return PiecewiseExpr::zero();
  std::vector<Piece> pieces;
  for (const auto& p : a.pieces()) pieces.push_back({p.region, p.value.scaled(k)});
  return PiecewiseExpr(std::move(pieces));
}

PiecewiseExpr pw_compose(const PiecewiseExpr& x, const Assignment& a) {
  FlatPieces out;
  for (const auto& fp : x.flat()) {
    Polyhedron pre = poly_preimage(fp.poly, a);
    if (!poly_is_empty(pre)) out.push_back({std::move(pre), fp.value.composed(a)});
  }
  return PiecewiseExpr::from_flat(out);
}

PiecewiseExpr pw_restrict(const PiecewiseExpr& x, const Region& r) {
  FlatPieces out;
  for (const auto& fp : x.flat())
    for (const auto& q : r.disjuncts) {
      Polyhedron both = intersect(fp.poly, q);
      if (!poly_is_empty(both)) out.push_back({std::move(both), fp.value});
    }
  return PiecewiseExpr::from_flat(out);
}

namespace {

struct Cell {
  Polyhedron poly;
  std::vector<int> which;  // index into the input's flat pieces, -1 = implicit zero
};

/// Common refinement of the inputs inside `within`.
std::vector<Cell> overlay(const std::vector<FlatPieces>& inputs, const Region& within) {
  std::vector<Cell> cells;
  for (const auto& p : within.disjuncts)
    if (!poly_is_empty(p)) cells.push_back({p, std::vector<int>(inputs.size(), -1)});
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    for (std::size_t k = 0; k < inputs[t].size(); ++k) {
      const Polyhedron& piece = inputs[t][k].poly;
      std::vector<Cell> next;
      next.reserve(cells.size());
      for (auto& cell : cells) {
        if (cell.which[t] != -1) {
          next.push_back(std::move(cell));
          continue;
        }
        Polyhedron both = intersect(cell.poly, piece);
        if (poly_is_empty(both)) {
          next.push_back(std::move(cell));
          continue;
        }
        for (auto& rest : subtract(cell.poly, piece)) next.push_back({std::move(rest), cell.which});
        cell.which[t] = static_cast<int>(k);
        next.push_back({std::move(both), cell.which});
      }
      cells = std::move(next);
    }
  }
  return cells;
}

}  // namespace

PiecewiseExpr pw_min(const std::vector<PiecewiseExpr>& inputs, const Region& within) {
  if (inputs.size() == 1) return pw_restrict(inputs[0], within);
  std::vector<FlatPieces> flats;
  for (const auto& in : inputs) flats.push_back(in.flat());
  FlatPieces out;
  for (const auto& cell : overlay(flats, within)) {
    bool any = std::any_of(cell.which.begin(), cell.which.end(), [](int w) { return w >= 0; });
    if (!any) continue;
    std::vector<LinExpr> terms;
    for (std::size_t t = 0; t < cell.which.size(); ++t) {
      if (cell.which[t] < 0) {
        terms.emplace_back();
      } else {
        const auto& v = flats[t][cell.which[t]].value.terms();
        terms.insert(terms.end(), v.begin(), v.end());
      }
    }
    out.push_back({cell.poly, MinExpr(std::move(terms))});
  }
  return PiecewiseExpr::from_flat(out);
}

PiecewiseExpr pw_join(const PiecewiseExpr& a, const PiecewiseExpr& b) {
  FlatPieces all = a.flat();
  FlatPieces fb = b.flat();
  all.insert(all.end(), fb.begin(), fb.end());
  return PiecewiseExpr::from_flat(all);
}

FlatPieces pw_cover(const PiecewiseExpr& x, const Region& r) {
  FlatPieces out = pw_restrict(x, r).flat();
  Region support = x.support();
  for (const auto& q : r.disjuncts)
    for (auto& rest : subtract(q, support)) out.push_back({std::move(rest), MinExpr()});
  return out;
}

bool min_exceeds_somewhere(const std::vector<LinExpr>& terms, const LinExpr& h,
                           const Polyhedron& p) {
  std::set<std::string> vars = p.variables();
  for (const auto& t : terms)
    for (const auto& [v, c] : t.coeffs()) vars.insert(v);
  for (const auto& [v, c] : h.coeffs()) vars.insert(v);

  lp::Problem prob;
  std::map<std::string, int> index;
  for (const auto& v : vars) index[v] = prob.add_var(false);
  int delta = prob.add_var(false);
  for (const auto& c : p.constraints()) {
    lp::Form f;
    for (const auto& [v, k] : c.expr.coeffs()) f.emplace_back(index[v], k);
    prob.add_row(std::move(f), c.rel == Rel::Eq ? lp::Sense::Eq : lp::Sense::Le,
                 -c.expr.constant());
  }
  for (const auto& t : terms) {
    LinExpr d = t - h;  // d(x) - δ ≥ 0
    lp::Form f;
    for (const auto& [v, k] : d.coeffs()) f.emplace_back(index[v], k);
    f.emplace_back(delta, Rational(-1));
    prob.add_row(std::move(f), lp::Sense::Ge, -d.constant());
  }
  prob.maximize({{delta, Rational(1)}});
  lp::Result res = prob.solve();
  if (res.status == lp::Status::Infeasible) return false;
  if (res.status == lp::Status::Unbounded) return true;
  return res.objective > 0;
}

bool pw_dominates(const PiecewiseExpr& a, const PiecewiseExpr& b, const Region& within) {
  std::vector<FlatPieces> flats{a.flat(), b.flat()};
  static const MinExpr zero;
  for (const auto& cell : overlay(flats, within)) {
    if (cell.which[0] < 0 && cell.which[1] < 0) continue;
    const MinExpr& va = cell.which[0] < 0 ? zero : flats[0][cell.which[0]].value;
    const MinExpr& vb = cell.which[1] < 0 ? zero : flats[1][cell.which[1]].value;
    for (const auto& h : vb.terms())
      if (min_exceeds_somewhere(va.terms(), h, cell.poly)) return false;
  }
  return true;
}

namespace {

struct Interval {
  LinExpr dir;  // primitive direction, first coefficient positive
  std::optional<Integer> lo, hi;
};

/// Reads a normalized constraint as an integer interval on its direction.
Interval as_interval(const LinConstraint& c) {
  Interval out;
  const Rational& first = c.expr.coeffs().begin()->second;
  int s = first > 0 ? 1 : -1;
  out.dir = c.expr * Rational(s);
  Rational k = out.dir.constant();
  out.dir.set_constant(0);
  Integer bound = -k.get_num();  // constant is integral after normalization
  if (c.rel == Rel::Eq) {
    out.lo = out.hi = bound;
  } else if (s > 0) {
    out.hi = bound;
  } else {
    out.lo = bound;
  }
  return out;
}

/// P = C ∧ c1 and Q = C ∧ c2 with c1, c2 adjacent integer intervals on one
/// direction: the union is C ∧ (c1 ∪ c2).
std::optional<Polyhedron> try_merge(const Polyhedron& p, const Polyhedron& q) {
  const auto& a = p.constraints();
  const auto& b = q.constraints();
  if (a.size() != b.size() || a.empty()) return std::nullopt;
  std::vector<LinConstraint> only_a, only_b, common;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  if (only_a.size() != 1 || only_b.size() != 1) return std::nullopt;
  if (only_a[0].expr.is_constant() || only_b[0].expr.is_constant()) return std::nullopt;
  Interval x = as_interval(only_a[0]);
  Interval y = as_interval(only_b[0]);
  if (!(x.dir == y.dir)) return std::nullopt;
  if (x.lo && (!y.lo || *y.lo < *x.lo)) std::swap(x, y);
  // x starts first; the pieces must touch or overlap.
  if (x.hi && (!y.lo || *x.hi + 1 < *y.lo)) return std::nullopt;
  std::optional<Integer> lo = x.lo, hi;
  if (x.hi && y.hi) hi = *x.hi > *y.hi ? *x.hi : *y.hi;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (lo) common.push_back({-x.dir + LinExpr(Rational(*lo)), Rel::Le});
  if (hi) common.push_back({x.dir - LinExpr(Rational(*hi)), Rel::Le});
  return Polyhedron(common);
}

}  // namespace

PiecewiseExpr simplify(const PiecewiseExpr& x) {
  FlatPieces cleaned;
  for (const auto& fp : x.flat()) {
    if (poly_is_empty(fp.poly)) continue;
    const auto& terms = fp.value.terms();
    std::vector<LinExpr> kept;
    if (terms.size() == 1) {
      kept = terms;
    } else {
      // Drop t when another surviving term u satisfies u ≤ t on the cell.
      std::vector<bool> dropped(terms.size(), false);
      for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = 0; j < terms.size(); ++j) {
          if (i == j || dropped[j]) continue;
          if (farkas_dominates(terms[j], terms[i], fp.poly)) {
            dropped[i] = true;
            break;
          }
        }
      }
      for (std::size_t i = 0; i < terms.size(); ++i)
        if (!dropped[i]) kept.push_back(terms[i]);
    }
    MinExpr value(std::move(kept));
    if (value.is_zero()) continue;
    cleaned.push_back({remove_redundant(fp.poly), std::move(value)});
  }

  PiecewiseExpr grouped = PiecewiseExpr::from_flat(cleaned);
  std::vector<Piece> pieces;
  for (const auto& piece : grouped.pieces()) {
    std::vector<Polyhedron> polys = piece.region.disjuncts;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < polys.size() && !changed; ++i) {
        for (std::size_t j = i + 1; j < polys.size() && !changed; ++j) {
          if (auto merged = try_merge(polys[i], polys[j])) {
            polys[i] = remove_redundant(*merged);
            polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(j));
            changed = true;
          }
        }
      }
    }
    pieces.push_back({Region{std::move(polys)}, piece.value});
  }
  return PiecewiseExpr(std::move(pieces));
}

}  // namespace prexpect

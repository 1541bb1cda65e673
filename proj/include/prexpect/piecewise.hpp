#pragma once

#include "prexpect/polyhedron.hpp"

#include <string>
#include <utility>
#include <vector>

namespace prexpect {

/// Pointwise minimum of affine terms; a single term embeds LinExpr.
class MinExpr {
 public:
  MinExpr() : terms_{LinExpr()} {}
  MinExpr(LinExpr term) : terms_{std::move(term)} {}  // NOLINT(implicit)
  explicit MinExpr(std::vector<LinExpr> terms);

  const std::vector<LinExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.size() == 1 && terms_[0].is_zero(); }
  Rational evaluate(const State& s) const;
  std::string to_string() const;

  /// min(a) + min(b) = min over pairwise sums.
  friend MinExpr operator+(const MinExpr& a, const MinExpr& b);
  /// Requires k ≥ 0.
  MinExpr scaled(const Rational& k) const;
  MinExpr composed(const Assignment& a) const;
  static MinExpr min_of(const MinExpr& a, const MinExpr& b);

  friend bool operator==(const MinExpr& a, const MinExpr& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const MinExpr& a, const MinExpr& b) { return a.terms_ < b.terms_; }

 private:
  std::vector<LinExpr> terms_;  // sorted, unique, nonempty
};

struct Piece {
  Region region;
  MinExpr value;
};

/// One polyhedral cell of a piecewise expression.
struct FlatPiece {
  Polyhedron poly;
  MinExpr value;
};
using FlatPieces = std::vector<FlatPiece>;

/// Piecewise-linear-concave expectation: pairwise disjoint regions each
/// carrying a MinExpr; the value outside every region is 0.
class PiecewiseExpr {
 public:
  PiecewiseExpr() = default;
  explicit PiecewiseExpr(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}
  static PiecewiseExpr zero() { return {}; }
  static PiecewiseExpr everywhere(MinExpr value);
  /// Groups cells with equal values into shared regions (first-seen order).
  static PiecewiseExpr from_flat(const FlatPieces& flat);

  const std::vector<Piece>& pieces() const { return pieces_; }
  FlatPieces flat() const;
  /// Union of all piece regions.
  Region support() const;
  std::string to_string() const;

  friend bool operator==(const PiecewiseExpr& a, const PiecewiseExpr& b);

 private:
  std::vector<Piece> pieces_;
};

Rational pw_evaluate(const PiecewiseExpr& x, const State& s);

PiecewiseExpr pw_add(const PiecewiseExpr& a, const PiecewiseExpr& b);
/// Requires k ≥ 0.
PiecewiseExpr pw_scale(const PiecewiseExpr& a, const Rational& k);
/// x ∘ a: regions pulled back through the assignment, terms composed.
PiecewiseExpr pw_compose(const PiecewiseExpr& x, const Assignment& a);
PiecewiseExpr pw_restrict(const PiecewiseExpr& x, const Region& r);
/// Pointwise minimum of the inputs inside `within` (implicit zeros count).
PiecewiseExpr pw_min(const std::vector<PiecewiseExpr>& inputs, const Region& within);
/// Concatenation of expressions with disjoint supports.
PiecewiseExpr pw_join(const PiecewiseExpr& a, const PiecewiseExpr& b);

/// Cells covering `r` exactly, uncovered parts carrying the zero value.
FlatPieces pw_cover(const PiecewiseExpr& x, const Region& r);

/// a(s) ≤ b(s) for every rational s in `within`.
bool pw_dominates(const PiecewiseExpr& a, const PiecewiseExpr& b,
                  const Region& within = Region::universe());

/// Removes dominated min-terms and zero pieces, groups equal values and
/// merges polyhedra that differ only in one complementary facet.
PiecewiseExpr simplify(const PiecewiseExpr& x);

/// Max δ with t(x) − h(x) ≥ δ for every t in `terms`, x ∈ p; true iff that
/// optimum is positive or unbounded, i.e. min(terms) > h somewhere on p.
bool min_exceeds_somewhere(const std::vector<LinExpr>& terms, const LinExpr& h,
                           const Polyhedron& p);

}  // namespace prexpect

#include "prexpect/rva.hpp"

#include "helpers.hpp"
#include "prexpect/fixpoint.hpp"
#include "prexpect/wp.hpp"
#include "random_programs.hpp"

#include <gtest/gtest.h>

using namespace prexpect;
using namespace prexpect::testing;

namespace {

const std::vector<std::string> xi = {"x", "i"};
const std::vector<std::string> cb = {"c", "b"};

struct Fixture {
  Program program;
  NormalizedProgram np;
  DomainPtr domain;
  AbstractElement beta;
};

Fixture setup(const Program& p) {
  Fixture s{p, normalize(p), nullptr, {}};
  s.domain = make_domain(analysis_regions(p, s.np), p.abstract_vars());
  s.beta = abstract_post(s.domain, p.post);
  return s;
}

AbstractElement element(DomainPtr d, std::vector<std::vector<double>> rows_vars_then_const) {
  AbstractElement a = AbstractElement::bottom(d);
  for (std::size_t i = 0; i < rows_vars_then_const.size(); ++i) {
    auto& r = rows_vars_then_const[i];
    a.coeffs[i][0] = r.back();
    for (std::size_t j = 0; j + 1 < r.size(); ++j) a.coeffs[i][j + 1] = r[j];
  }
  return a;
}

}  // namespace

TEST(Concretize, GeometricFixedPointRows) {
  Fixture s = setup(load_program("geometric.pgts"));
  PiecewiseExpr g = concretize(element(s.domain, {{1, 0}, {1, 2}}));
  for (int x = -3; x <= 3; ++x)
    for (int i = 0; i <= 5; ++i)
      EXPECT_EQ(pw_evaluate(g, state({{"x", x}, {"i", i}})), x == 0 ? i : i + 2);
}

TEST(Concretize, NullMatrixIsZero) {
  Fixture s = setup(load_program("geometric.pgts"));
  PiecewiseExpr g = concretize(AbstractElement::bottom(s.domain));
  for (int x = -3; x <= 3; ++x) EXPECT_EQ(pw_evaluate(g, state({{"x", x}, {"i", 4}})), 0);
}

TEST(Concretize, MartingaleFinalRowIsCapital) {
  Fixture s = setup(load_program("martingale.pgts"));
  PiecewiseExpr g = concretize(element(s.domain, {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}}));
  for (int c = 0; c <= 6; ++c)
    for (int b = -6; b <= 6; ++b) EXPECT_EQ(pw_evaluate(g, state({{"c", c}, {"b", b}})), c);
}

TEST(AbstractLeq, Examples) {
  Fixture s = setup(load_program("geometric.pgts"));
  auto bot = AbstractElement::bottom(s.domain);
  EXPECT_TRUE(abstract_leq(bot, element(s.domain, {{1, 0}, {0.5, 0.5}})));
  EXPECT_TRUE(abstract_leq(element(s.domain, {{1, 0}, {0.5, 0.5}}), element(s.domain, {{1, 0}, {0.75, 1}})));
  EXPECT_FALSE(abstract_leq(element(s.domain, {{1, 0}, {1, 2}}), element(s.domain, {{1, 0}, {1, 1}})));
}

TEST(AbstractLeq, DifferentDomainsAreRejected) {
  Fixture g = setup(load_program("geometric.pgts"));
  Fixture m = setup(load_program("martingale.pgts"));
  try {
    abstract_leq(AbstractElement::bottom(g.domain), AbstractElement::bottom(m.domain));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegionMismatch);
  }
}

TEST(MakeDomain, OverlappingRegionsAreRejected) {
  EXPECT_THROW(make_domain({region("x >= 0", xi), region("x <= 0", xi)}, {"x"}), Error);
}

TEST(AbstractPost, RejectsNonTemplateVariables) {
  Program p = load_program("geometric.pgts");
  p.post = parse_pwexpr("x + i", xi);
  EXPECT_THROW(setup(p), Error);
}

TEST(LowerBoundPlane, AffinePieceIsItsOwnBound) {
  Polyhedron cell = poly("x >= 1 && i >= 0", xi);
  FlatPieces pieces = {{cell, MinExpr(lin("3/4*i + 1", xi))}};
  auto r = lower_bound_plane(pieces, LinExpr(), vertices(cell, {"i"}), {"i"});
  EXPECT_EQ(r.plane, lin("3/4*i + 1", xi));
}

TEST(LowerBoundPlane, MartingaleWedgeBase) {
  // f(γ(row 1)) on φ2 = {0 < b ≤ c}: c on Ψ1 = {b ≤ c < 3b}, ¾c + ¾b on Ψ2 = {3b ≤ c}.
  Polyhedron psi1 = poly("b >= 1 && b <= c && c <= 3*b - 1", cb);
  Polyhedron psi2 = poly("b >= 1 && c >= 3*b", cb);
  FlatPieces pieces = {{psi1, MinExpr(lin("c", cb))}, {psi2, MinExpr(lin("3/4*c + 3/4*b", cb))}};
  std::vector<State> pts;
  for (const auto& p : {psi1, psi2})
    for (const auto& v : vertices(p, cb)) pts.push_back(v);
  auto r = lower_bound_plane(pieces, lin("1/2*c + 1/2*b", cb), pts, cb);
  EXPECT_EQ(r.plane, lin("3/4*c + 1/4*b", cb));
}

TEST(LowerBoundPlane, TentAdmitsOnlyTheZeroPlane) {
  std::vector<std::string> x = {"x"};
  Polyhedron box = poly("x >= 0 && x <= 1", x);
  FlatPieces pieces = {{box, MinExpr({lin("x", x), lin("1 - x", x)})}};
  State half = {{"x", Rational(1, 2)}};
  auto r = lower_bound_plane(pieces, LinExpr(), {half}, x);
  EXPECT_EQ(r.plane, LinExpr());
  // Grid over (slope, offset) in [−2, 2] with step 1/8, checked on [0, 1] in steps of 1/16.
  Rational best = -1;
  for (int a = -16; a <= 16; ++a)
    for (int b = -16; b <= 16; ++b) {
      Rational slope(a, 8), off(b, 8);
      slope.canonicalize();
      off.canonicalize();
      bool ok = true;
      for (int k = 0; k <= 16 && ok; ++k) {
        Rational t(k, 16);
        t.canonicalize();
        Rational g = slope * t + off;
        Rational tent = t < Rational(1, 2) ? t : Rational(1 - t);
        ok = g >= 0 && g <= tent;
      }
      if (ok) best = std::max(best, Rational(slope / 2 + off));
    }
  EXPECT_EQ(best, 0);
  EXPECT_EQ(r.objective, best);
}

TEST(LowerBoundPlane, FloorAboveTheFunctionIsInfeasible) {
  Polyhedron cell = poly("i >= 0", xi);
  FlatPieces pieces = {{cell, MinExpr(lin("i", xi))}};
  try {
    lower_bound_plane(pieces, lin("i + 1", xi), vertices(cell, {"i"}), {"i"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasibleSandwich);
  }
}

TEST(LowerBoundPlane, MorePointsNeverLowerTheirOwnOptimum) {
  std::vector<std::string> x = {"x"};
  Polyhedron box = poly("x >= -4 && x <= 4", x);
  FlatPieces pieces = {{box, MinExpr({lin("x + 2", x), lin("6 - x", x), lin("5", x)})}};
  std::vector<State> few = {{{"x", Rational(-4)}}};
  std::vector<State> more = few;
  more.push_back({{"x", Rational(4)}});
  more.push_back({{"x", Rational(1)}});
  auto a = lower_bound_plane(pieces, LinExpr(Rational(-10)), few, x);
  auto b = lower_bound_plane(pieces, LinExpr(Rational(-10)), more, x);
  Rational at_more = 0;
  for (const auto& s : more) at_more += a.plane.evaluate(s);
  EXPECT_GE(b.objective, at_more);
}

TEST(Vertices, ClippedWedge) {
  auto v = vertices(poly("b >= 1 && b <= c", cb), cb);
  std::set<State> got(v.begin(), v.end());
  std::set<State> expected = {state({{"b", 1}, {"c", 1}}), state({{"b", 1}, {"c", 100}}),
                              state({{"b", 100}, {"c", 100}})};
  EXPECT_EQ(got, expected);
}

TEST(AbstractStep, GeometricFirstAndThirdRows) {
  Fixture s = setup(load_program("geometric.pgts"));
  auto r1 = abstract_step(s.np, s.beta, AbstractElement::bottom(s.domain));
  EXPECT_EQ(r1, element(s.domain, {{1, 0}, {0, 0}}));
  auto r3 = abstract_step(s.np, s.beta, element(s.domain, {{1, 0}, {0.5, 0.5}}));
  EXPECT_EQ(r3, element(s.domain, {{1, 0}, {0.75, 1}}));
}

TEST(AbstractStep, MartingaleFirstRowPinned) {
  Fixture s = setup(load_program("martingale.pgts"));
  auto r1 = abstract_step(s.np, s.beta, AbstractElement::bottom(s.domain), Schedule::Pinned);
  EXPECT_EQ(r1, element(s.domain, {{1, 0, 0}, {0.5, 0.5, 0}, {1, 0, 0}}));
}

TEST(AbstractStep, MartingaleFirstRowJacobiStaysUnderF) {
  Fixture s = setup(load_program("martingale.pgts"));
  auto bot = AbstractElement::bottom(s.domain);
  auto r1 = abstract_step(s.np, s.beta, bot);
  EXPECT_EQ(r1, element(s.domain, {{1, 0, 0}, {0, 0, 0}, {1, 0, 0}}));
  // The row (0.5, 0.5, 0) on φ2 would exceed f(⊥), which is 0 on the guard cell.
  PiecewiseExpr f_bot = loop_functional(s.np, concretize(s.beta), concretize(bot));
  auto tabled = element(s.domain, {{1, 0, 0}, {0.5, 0.5, 0}, {1, 0, 0}});
  EXPECT_FALSE(pw_dominates(concretize(tabled), f_bot, s.domain->regions[1]));
}

TEST(AbstractStep, SoundAndAscendingOnRandomPrograms) {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int t = 0; t < 25; ++t) {
    Program p = random_program(rng, {true});
    Fixture s = setup(p);
    AbstractElement a = AbstractElement::bottom(s.domain);
    for (int k = 0; k < 6; ++k) {
      AbstractElement next = abstract_step(s.np, s.beta, a);
      PiecewiseExpr f = loop_functional(s.np, concretize(s.beta), concretize(a));
      EXPECT_TRUE(pw_dominates(concretize(next), f));
      EXPECT_TRUE(abstract_leq(a, next));
      a = next;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 150);
}

TEST(AbstractStep, NonIntegerCollisionKeepsTheVerifiedRow) {
  // From x = y the first branch reaches x' = y' only at x = -2/3.
  Program p = parse_program(R"(vars x, y;
command x = y -> {x' = 2*x + 2*y + 2, y' = 2*x - y} @ 1/4
    | {x' = -2*y - 1, y' = 2*x - 2*y - 1} @ 1/4
    | {x' = -x - y - 1, y' = x} @ 1/4;
command x + 2 < 0 -> {y' = x - 2*y - 2} @ 1/2 | {y' = -2*x - 2*y} @ 1/2;
post 1;
)",
                            "collision");
  Fixture s = setup(p);
  KleeneOptions opts;
  opts.max_iter = 40;
  IterationTrace t = kleene_iterate(s.np, s.beta, opts);
  EXPECT_EQ(t.status, TraceStatus::Converged);
  EXPECT_GT(t.fallbacks, 0u);
  EXPECT_EQ(verify_chain(t), -1);
  AbstractElement first = abstract_step(s.np, s.beta, AbstractElement::bottom(s.domain));
  AbstractElement second = abstract_step(s.np, s.beta, first);
  EXPECT_THROW(abstract_step(s.np, s.beta, second), Error);
  EXPECT_NO_THROW(abstract_step(s.np, s.beta, second, Schedule::Jacobi, nullptr, true));
}

#include "prexpect/wp.hpp"

#include "helpers.hpp"
#include "prexpect/oracle.hpp"
#include "random_programs.hpp"

#include <gtest/gtest.h>

using namespace prexpect;
using namespace prexpect::testing;

namespace {

const std::vector<std::string> xi = {"x", "i"};
const std::vector<std::string> cb = {"c", "b"};

const char* kGeometric =
    "vars x, i; command x != 0 -> {x' = 0, i' = i + 1} @ 1/2 | {x' = 1, i' = i + 1} @ 1/2; post i;";
const char* kMartingale =
    "vars c, b; command 0 < b <= c -> {c' = c + b, b' = 0} @ 1/2 | {c' = c - b, b' = 2*b} @ 1/2; "
    "post c;";

PiecewiseExpr random_expectation(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  Guard split = random_atom(rng, vars);
  Region in = make_disjoint(split.to_region());
  Region out = make_disjoint(split.negated_region());
  std::vector<Piece> pieces;
  if (!in.disjuncts.empty())
    pieces.push_back({in, MinExpr({random_affine(rng, vars, 2, 3), random_affine(rng, vars, 2, 3)})});
  if (!out.disjuncts.empty() && uniform(rng, 0, 2))
    pieces.push_back({out, MinExpr(random_affine(rng, vars, 2, 3))});
  return PiecewiseExpr(std::move(pieces));
}

void expect_disjoint_nonempty(const PiecewiseExpr& e) {
  std::vector<Polyhedron> all;
  for (const auto& fp : e.flat()) {
    EXPECT_FALSE(poly_is_empty(fp.poly));
    all.push_back(fp.poly);
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_TRUE(poly_is_empty(intersect(all[i], all[j])));
}

}  // namespace

TEST(WpStep, MartingaleCapitalIsPreserved) {
  NormalizedProgram np = normalize(parse_program(kMartingale));
  PiecewiseExpr y = wp_step(np, parse_pwexpr("c", cb));
  ASSERT_EQ(y.pieces().size(), 1u);
  EXPECT_EQ(y.pieces()[0].value, MinExpr(lin("c", cb)));
  EXPECT_EQ(y.pieces()[0].region, Region{{np.cells[0].poly}});
}

TEST(WpStep, GeometricThirdRow) {
  NormalizedProgram np = normalize(parse_program(kGeometric));
  PiecewiseExpr x = parse_pwexpr("[x = 0] i | [x != 0] 0.5*i + 0.5", xi);
  PiecewiseExpr y = wp_step(np, x);
  ASSERT_EQ(y.pieces().size(), 1u);
  EXPECT_EQ(y.pieces()[0].value, MinExpr(lin("0.75*i + 1", xi)));
  for (int xv = -3; xv <= 3; ++xv)
    EXPECT_EQ(y.pieces()[0].region.contains(state({{"x", xv}, {"i", 0}})), xv != 0);
}

TEST(WpStep, ZeroStaysZero) {
  NormalizedProgram np = normalize(parse_program(kMartingale));
  EXPECT_TRUE(wp_step(np, PiecewiseExpr::zero()).pieces().empty());
}

TEST(LoopFunctional, GeometricFirstRow) {
  Program p = parse_program(kGeometric);
  NormalizedProgram np = normalize(p);
  PiecewiseExpr y = loop_functional(np, p.post, PiecewiseExpr::zero());
  ASSERT_EQ(y.pieces().size(), 1u);
  EXPECT_EQ(y.pieces()[0].value, MinExpr(lin("i", xi)));
  EXPECT_EQ(y.pieces()[0].region, Region{{poly("x = 0", xi)}});
}

TEST(LoopFunctional, MartingaleCapitalIsAFixedPoint) {
  Program p = parse_program(kMartingale);
  NormalizedProgram np = normalize(p);
  PiecewiseExpr c = parse_pwexpr("c", cb);
  PiecewiseExpr y = loop_functional(np, p.post, c);
  EXPECT_TRUE(pw_dominates(y, c));
  EXPECT_TRUE(pw_dominates(c, y));
}

TEST(LoopFunctional, BottomMapsToBottomWithZeroPost) {
  Program p = parse_program(kMartingale);
  NormalizedProgram np = normalize(p);
  EXPECT_TRUE(loop_functional(np, PiecewiseExpr::zero(), PiecewiseExpr::zero()).pieces().empty());
}

TEST(PwEvaluate, Examples) {
  PiecewiseExpr fix = parse_pwexpr("[x = 0] i | [x != 0] i + 2", xi);
  EXPECT_EQ(pw_evaluate(fix, state({{"x", 1}, {"i", 0}})), 2);
  EXPECT_EQ(pw_evaluate(fix, state({{"x", 0}, {"i", 7}})), 7);
  PiecewiseExpr m = parse_pwexpr("min(c, c - b)", cb);
  EXPECT_EQ(pw_evaluate(m, state({{"c", 5}, {"b", 2}})), 3);
  EXPECT_EQ(pw_evaluate(parse_pwexpr("[x >= 1] x", xi), state({{"x", -4}, {"i", 0}})), 0);
}

TEST(PwDominates, Basics) {
  PiecewiseExpr fix = parse_pwexpr("[x = 0] i | [x != 0] i + 2", xi);
  EXPECT_TRUE(pw_dominates(fix, fix));
  EXPECT_TRUE(pw_dominates(PiecewiseExpr::zero(), parse_pwexpr("[i >= 0] i", xi)));
  EXPECT_FALSE(pw_dominates(parse_pwexpr("[i >= 0] i + 1", xi), parse_pwexpr("[i >= 0] i", xi)));
  // min(c, c − b) ≤ c − b everywhere, but not ≤ c − 2b
  EXPECT_TRUE(pw_dominates(parse_pwexpr("min(c, c - b)", cb), parse_pwexpr("c - b", cb)));
  EXPECT_FALSE(pw_dominates(parse_pwexpr("min(c, c - b)", cb), parse_pwexpr("c - 2*b", cb)));
}

TEST(Simplify, MergesAdjacentIntervalsAndDropsDominatedTerms) {
  PiecewiseExpr e = parse_pwexpr("[x = 0] i | [x >= 1] i | [x <= -1] i", xi);
  PiecewiseExpr s = simplify(e);
  ASSERT_EQ(s.pieces().size(), 1u);
  EXPECT_EQ(s.pieces()[0].region, Region::universe());
  PiecewiseExpr m = simplify(parse_pwexpr("[i >= 0] min(i, i + 1)", xi));
  EXPECT_EQ(m.pieces()[0].value, MinExpr(lin("i", xi)));
}

TEST(WpStep, MonotoneOnRandomInputs) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    Program p = random_program(rng);
    NormalizedProgram np = normalize(p);
    PiecewiseExpr x = random_expectation(rng, p.variables);
    PiecewiseExpr bump = PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(uniform(rng, 0, 3)))));
    PiecewiseExpr y = pw_add(x, bump);
    ASSERT_TRUE(pw_dominates(x, y));
    EXPECT_TRUE(pw_dominates(wp_step(np, x), wp_step(np, y)));
  }
}

TEST(WpStep, AgreesWithGeneratorMinimumAtOneStep) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    Program p = random_program(rng);
    NormalizedProgram np = normalize(p);
    PiecewiseExpr x = random_expectation(rng, p.variables);
    PiecewiseExpr y = wp_step(np, x);
    expect_disjoint_nonempty(y);
    for (int k = 0; k < 20; ++k) {
      State s = random_state(rng, p.variables, 10);
      GeneratorSet g = build_generators(p, s);
      Rational best;
      bool first = true;
      for (const auto& d : g.distributions) {
        Rational e = 0;
        for (const auto& [succ, m] : d) e += m * pw_evaluate(x, succ);
        if (first || e < best) best = e;
        first = false;
      }
      EXPECT_EQ(pw_evaluate(y, s), best) << print_program(p) << "\nat x=" << s["x"];
    }
  }
}

#include "prexpect/fixpoint.hpp"

#include "helpers.hpp"
#include "prexpect/oracle.hpp"
#include "prexpect/report.hpp"
#include "prexpect/wp.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace prexpect;
using namespace prexpect::testing;

namespace {

const std::vector<std::string> xi = {"x", "i"};

struct Analysis {
  Program program;
  NormalizedProgram np;
  AbstractElement beta;
  IterationTrace trace;
};

Analysis run(const std::string& file, KleeneOptions opts = {}) {
  Analysis r{load_program(file), {}, {}, {}};
  r.np = normalize(r.program);
  auto dom = make_domain(analysis_regions(r.program, r.np), r.program.abstract_vars());
  r.beta = abstract_post(dom, r.program.post);
  r.trace = kleene_iterate(r.np, r.beta, opts);
  return r;
}

/// Row i of iterate k as (vars..., constant).
std::vector<double> row(const IterationTrace& t, std::size_t k, std::size_t i) {
  const auto& c = t.rows[k].coeffs[i];
  std::vector<double> out(c.begin() + 1, c.end());
  out.push_back(c[0]);
  return out;
}

using Rows = std::vector<std::vector<std::vector<double>>>;

const Rows kTable1 = {
    {{0, 0}, {0, 0}},          {{1, 0}, {0, 0}},        {{1, 0}, {0.5, 0.5}},
    {{1, 0}, {0.75, 1}},       {{1, 0}, {0.875, 1.375}}, {{1, 0}, {0.9375, 1.625}},
    {{1, 0}, {0.96875, 1.78125}}, {{1, 0}, {0.984375, 1.875}},
};

const Rows kTable2 = {
    {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
    {{1, 0, 0}, {0.5, 0.5, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.75, 0.25, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.875, 0.125, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.9375, 0.0625, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.96875, 0.03125, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.984375, 0.015625, 0}, {1, 0, 0}},
    {{1, 0, 0}, {0.9921875, 0.0078125, 0}, {1, 0, 0}},
};

}  // namespace

TEST(Kleene, GeometricMatchesTableOne) {
  KleeneOptions opts;
  opts.eps = 1e-9;
  Analysis r = run("geometric.pgts", opts);
  ASSERT_EQ(r.trace.status, TraceStatus::Converged);
  EXPECT_LE(r.trace.rows.size() - 1, 60u);
  for (std::size_t k = 0; k < kTable1.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(row(r.trace, k, i), kTable1[k][i]) << "row " << k;
  auto last = r.trace.rows.size() - 1;
  EXPECT_NEAR(row(r.trace, last, 1)[0], 1, 1e-9);
  EXPECT_NEAR(row(r.trace, last, 1)[1], 2, 1e-9);
  EXPECT_EQ(verify_chain(r.trace), -1);
}

TEST(Kleene, MartingaleJacobiLagsTheTableByOneIteration) {
  KleeneOptions opts;
  opts.eps = 1e-9;
  Analysis r = run("martingale.pgts", opts);
  ASSERT_EQ(r.trace.status, TraceStatus::Converged);
  for (std::size_t k = 1; k < kTable2.size(); ++k)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(row(r.trace, k + 1, i), kTable2[k][i]);
  auto last = r.trace.rows.size() - 1;
  for (std::size_t i = 0; i < 3; ++i) {
    auto c = row(r.trace, last, i);
    EXPECT_NEAR(c[0], 1, 1e-9);
    EXPECT_NEAR(c[1], 0, 1e-9);
    EXPECT_NEAR(c[2], 0, 1e-9);
  }
  EXPECT_EQ(verify_chain(r.trace), -1);
}

TEST(Kleene, MartingalePinnedMatchesTableTwo) {
  KleeneOptions opts;
  opts.eps = 1e-9;
  opts.schedule = Schedule::Pinned;
  Analysis r = run("martingale.pgts", opts);
  ASSERT_EQ(r.trace.status, TraceStatus::Converged);
  for (std::size_t k = 0; k < kTable2.size(); ++k)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(row(r.trace, k, i), kTable2[k][i]);
  EXPECT_EQ(verify_chain(r.trace), -1);
}

TEST(Kleene, SixRegionMartingaleKeepsOuterRowsAtZero) {
  KleeneOptions opts;
  opts.eps = 1e-9;
  Analysis r = run("martingale6.pgts", opts);
  ASSERT_EQ(r.trace.status, TraceStatus::Converged);
  auto last = r.trace.rows.size() - 1;
  for (std::size_t i = 3; i < 6; ++i) EXPECT_EQ(row(r.trace, last, i), (std::vector<double>{0, 0, 0}));
  EXPECT_NEAR(row(r.trace, last, 1)[0], 1, 1e-9);
}

TEST(Kleene, DoublingCounterDiverges) {
  KleeneOptions opts;
  opts.max_iter = 200;
  Analysis r = run("geometric_double.pgts", opts);
  EXPECT_EQ(r.trace.status, TraceStatus::Diverged);
  EXPECT_LE(r.trace.rows.size() - 1, 200u);
  EXPECT_EQ(verify_chain(r.trace), -1);
}

TEST(Kleene, ThresholdRuleAloneNeedsHugeCoefficients) {
  KleeneOptions opts;
  opts.max_iter = 200;
  opts.growth_window = 0;
  Analysis r = run("geometric_double.pgts", opts);
  EXPECT_EQ(r.trace.status, TraceStatus::MaxIterations);
  double biggest = 0;
  for (const auto& c : r.trace.rows.back().coeffs)
    for (double v : c) biggest = std::max(biggest, std::fabs(v));
  EXPECT_LE(biggest, 200);
}

TEST(Kleene, IterationLimit) {
  KleeneOptions opts;
  opts.max_iter = 5;
  Analysis r = run("geometric.pgts", opts);
  EXPECT_EQ(r.trace.status, TraceStatus::MaxIterations);
  EXPECT_EQ(r.trace.rows.size(), 6u);
}

TEST(Kleene, Deterministic) {
  Analysis a = run("martingale.pgts"), b = run("martingale.pgts");
  ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
  for (std::size_t k = 0; k < a.trace.rows.size(); ++k) EXPECT_EQ(a.trace.rows[k], b.trace.rows[k]);
}

TEST(ExactnessCheck, MartingaleCapital) {
  Analysis r = run("martingale.pgts");
  EXPECT_TRUE(exactness_check(r.np, r.program.post, parse_pwexpr("[c >= 0] c", {"c", "b"})));
}

TEST(ExactnessCheck, GeometricFixedPoint) {
  Analysis r = run("geometric.pgts");
  EXPECT_TRUE(exactness_check(r.np, r.program.post, parse_pwexpr("[x = 0 && i >= 0] i | [x != 0 && i >= 0] i + 2", xi)));
}

TEST(ExactnessCheck, GeometricUnderestimateIsNotPreFixed) {
  Analysis r = run("geometric.pgts");
  PiecewiseExpr phi = parse_pwexpr("[x = 0 && i >= 0] i | [x != 0 && i >= 0] i + 1", xi);
  EXPECT_FALSE(exactness_check(r.np, r.program.post, phi));
  // witness x = 1, i = 0: f.phi = ½·1 + ½·2 = 3/2 > 1
  PiecewiseExpr f = loop_functional(r.np, r.program.post, phi);
  EXPECT_EQ(pw_evaluate(f, state({{"x", 1}, {"i", 0}})), Rational(3, 2));
}

TEST(ApplyInit, Examples) {
  PiecewiseExpr geo = parse_pwexpr("[x = 0 && i >= 0] i | [x != 0 && i >= 0] i + 2", xi);
  PiecewiseExpr v = apply_init(geo, Assignment({{"x", LinExpr(Rational(1))}, {"i", LinExpr()}}));
  ASSERT_EQ(v.pieces().size(), 1u);
  EXPECT_EQ(v.pieces()[0].value, MinExpr(LinExpr(Rational(2))));
  EXPECT_EQ(v.pieces()[0].region, Region::universe());

  std::vector<std::string> cbC = {"c", "b", "C"};
  PiecewiseExpr mart = parse_pwexpr("[c >= 0] c", cbC);
  PiecewiseExpr m = apply_init(mart, Assignment({{"c", LinExpr::var("C")}, {"b", LinExpr(Rational(1))}}));
  ASSERT_EQ(m.pieces().size(), 1u);
  EXPECT_EQ(m.pieces()[0].value, MinExpr(LinExpr::var("C")));

  EXPECT_TRUE(apply_init(PiecewiseExpr::zero(), Assignment({{"x", LinExpr()}})).pieces().empty());
}

TEST(CheckCorrectness, Examples) {
  PiecewiseExpr init = PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(2))));
  EXPECT_TRUE(check_correctness(PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(2)))), init));
  EXPECT_FALSE(check_correctness(PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(5, 2)))), init));
  EXPECT_TRUE(check_correctness(PiecewiseExpr::zero(), init));
}

TEST(Kleene, IteratesStayBelowTheOracle) {
  Analysis r = run("geometric.pgts");
  StateBox box;
  box.bounds["x"] = {Integer(-5), Integer(5)};
  box.bounds["i"] = {Integer(0), Integer(400)};
  std::vector<State> starts;
  for (int x = -2; x <= 2; ++x)
    for (int i = 0; i <= 20; i += 5) starts.push_back(state({{"x", x}, {"i", i}}));
  auto oracle = value_iteration(r.program, 100, box, starts);
  for (std::size_t k = 0; k < r.trace.rows.size(); k += 5) {
    PiecewiseExpr g = concretize(r.trace.rows[k]);
    for (const auto& s : starts) EXPECT_LE(pw_evaluate(g, s).get_d(), oracle.at(s).get_d() + 1e-9);
  }
}

TEST(Analyze, GeometricReport) {
  AnalysisOptions opts;
  opts.alpha = PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(2))));
  AnalysisReport rep = analyze(load_program("geometric.pgts"), opts);
  EXPECT_EQ(rep.exact, Exactness::Exact);
  ASSERT_TRUE(rep.init_value);
  EXPECT_EQ(render_value(*rep.init_value), "2");
  ASSERT_TRUE(rep.alpha_holds);
  EXPECT_TRUE(*rep.alpha_holds);
  EXPECT_FALSE(rep.failed());
}

TEST(Analyze, MartingaleReport) {
  AnalysisReport rep = analyze(load_program("martingale.pgts"));
  EXPECT_EQ(rep.exact, Exactness::Exact);
  ASSERT_TRUE(rep.init_value);
  ASSERT_EQ(rep.init_value->pieces().size(), 1u);
  EXPECT_EQ(rep.init_value->pieces()[0].value, MinExpr(LinExpr::var("C")));
}

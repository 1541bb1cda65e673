#pragma once

#include "prexpect/program.hpp"

#include <random>
#include <string>
#include <vector>

namespace prexpect::testing {

inline Rational pick_prob(std::mt19937_64& rng) {
  static const Rational probs[] = {Rational(1, 4), Rational(1, 2), Rational(1)};
  return probs[std::uniform_int_distribution<int>(0, 2)(rng)];
}

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline LinExpr random_affine(std::mt19937_64& rng, const std::vector<std::string>& vars, int coeff,
                             int constant) {
  LinExpr e(Rational(uniform(rng, -constant, constant)));
  for (const auto& v : vars) e.set_coeff(v, uniform(rng, -coeff, coeff));
  return e;
}

inline Guard random_atom(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  static const Guard::Cmp cmps[] = {Guard::Cmp::Le, Guard::Cmp::Lt, Guard::Cmp::Eq, Guard::Cmp::Ne};
  LinExpr e = random_affine(rng, vars, 2, 3);
  if (e.is_constant()) e.set_coeff(vars[0], 1);
  return Guard::atom(e, cmps[uniform(rng, 0, 3)]);
}

inline Guard random_guard(std::mt19937_64& rng, const std::vector<std::string>& vars) {
  switch (uniform(rng, 0, 4)) {
    case 0: return Guard::conjunction({random_atom(rng, vars), random_atom(rng, vars)});
    case 1: return Guard::disjunction({random_atom(rng, vars), random_atom(rng, vars)});
    case 2: return Guard::negation(random_atom(rng, vars));
    default: return random_atom(rng, vars);
  }
}

/// Random branch list with total probability at most 1.
inline std::vector<ProbBranch> random_branches(std::mt19937_64& rng,
                                               const std::vector<std::string>& vars) {
  std::vector<ProbBranch> out;
  Rational left = 1;
  int n = uniform(rng, 1, 3);
  for (int k = 0; k < n && left > 0; ++k) {
    Rational p = pick_prob(rng);
    if (p > left) p = left;
    Assignment a;
    for (const auto& v : vars)
      if (uniform(rng, 0, 3) != 0) a.set(v, random_affine(rng, vars, 2, 2));
    out.push_back({a, p});
    left -= p;
  }
  return out;
}

struct RandomProgramOptions {
  bool constant_post = false;  // nonnegative constant post-expectation
};

/// ≤ 2 commands over ≤ 2 variables, probabilities in {1/4, 1/2, 1}, affine
/// updates with coefficients in [−2, 2].
inline Program random_program(std::mt19937_64& rng, RandomProgramOptions opts = {}) {
  Program p;
  p.variables = uniform(rng, 0, 1) ? std::vector<std::string>{"x", "y"}
                                   : std::vector<std::string>{"x"};
  int commands = uniform(rng, 1, 2);
  for (int c = 0; c < commands; ++c)
    p.commands.push_back({random_guard(rng, p.variables), random_branches(rng, p.variables)});
  if (opts.constant_post) {
    p.post = PiecewiseExpr::everywhere(MinExpr(LinExpr(Rational(uniform(rng, 1, 3)))));
  } else {
    LinExpr a = random_affine(rng, p.variables, 2, 3);
    LinExpr b = random_affine(rng, p.variables, 2, 3);
    Guard split = random_atom(rng, p.variables);
    Region in = make_disjoint(split.to_region());
    Region out = make_disjoint(split.negated_region());
    std::vector<Piece> pieces;
    if (!in.disjuncts.empty()) pieces.push_back({in, MinExpr(a)});
    if (!out.disjuncts.empty()) pieces.push_back({out, MinExpr(b)});
    p.post = PiecewiseExpr(std::move(pieces));
  }
  return p;
}

inline State random_state(std::mt19937_64& rng, const std::vector<std::string>& vars, int box) {
  State s;
  for (const auto& v : vars) s[v] = uniform(rng, -box, box);
  return s;
}

}  // namespace prexpect::testing

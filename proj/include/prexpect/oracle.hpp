#pragma once

#include "prexpect/program.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace prexpect {

/// Finite-support sub-probability distribution over states.
using Distribution = std::map<State, Rational>;

struct GeneratorSet {
  std::vector<Distribution> distributions;
};

/// One distribution per command enabled at s, mass accumulated on coinciding
/// successors; the single zero distribution when nothing is enabled.
GeneratorSet build_generators(const Program& p, const State& s);

Rational expectation(const Distribution& d, const std::map<State, Rational>& values);

/// Inclusive integer bounds per variable.
struct StateBox {
  std::map<std::string, std::pair<Integer, Integer>> bounds;
  bool contains(const State& s) const;
};

/// X_horizon on `starts` (X_0 = 0, X_{k+1} = [¬G]·β + [G]·min over generators
/// of the expected X_k). Throws Error(StateBoxEscape) when a state reachable
/// within the horizon leaves the box.
std::map<State, Rational> value_iteration(const Program& p, std::size_t horizon,
                                          const StateBox& box, const std::vector<State>& starts);

/// Samples convex mixtures of generator pairs and up-shifted variants
/// (extra mass on support states); true iff none beats the generator minimum.
bool closure_invariance_check(const GeneratorSet& g, const std::map<State, Rational>& values,
                              std::size_t trials, std::uint64_t seed = 1);

}  // namespace prexpect

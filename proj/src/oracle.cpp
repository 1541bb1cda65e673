#include "prexpect/oracle.hpp"

#include "prexpect/errors.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace prexpect {

GeneratorSet build_generators(const Program& p, const State& s) {
  GeneratorSet out;
  for (const auto& c : p.commands) {
    if (!c.guard.evaluate(s)) continue;
    Distribution d;
    for (const auto& b : c.branches) d[b.assignment.apply(s)] += b.probability;
    out.distributions.push_back(std::move(d));
  }
  if (out.distributions.empty()) out.distributions.emplace_back();
  return out;
}

Rational expectation(const Distribution& d, const std::map<State, Rational>& values) {
  Rational sum = 0;
  for (const auto& [s, m] : d) {
    auto it = values.find(s);
    if (it != values.end()) sum += m * it->second;
  }
  return sum;
}

bool StateBox::contains(const State& s) const {
  for (const auto& [v, lim] : bounds) {
    auto it = s.find(v);
    if (it == s.end()) continue;
    if (it->second < Rational(lim.first) || it->second > Rational(lim.second)) return false;
  }
  return true;
}

namespace {

bool enabled_somewhere(const Program& p, const State& s) {
  return std::any_of(p.commands.begin(), p.commands.end(),
                     [&](const GuardedCommand& c) { return c.guard.evaluate(s); });
}

std::string render(const State& s) {
  std::string out = "(";
  for (const auto& [v, x] : s) {
    if (out.size() > 1) out += ", ";
    out += v + "=" + to_string(x);
  }
  return out + ")";
}

}  // namespace

std::map<State, Rational> value_iteration(const Program& p, std::size_t horizon,
                                          const StateBox& box, const std::vector<State>& starts) {
  // Breadth-first layers: depth[s] = fewest steps from a start.
  std::map<State, std::size_t> depth;
  std::map<State, GeneratorSet> gens;
  std::vector<State> frontier;
  for (const auto& s : starts) {
    if (!box.contains(s)) throw Error(ErrorKind::StateBoxEscape, "start " + render(s));
    if (depth.emplace(s, 0).second) frontier.push_back(s);
  }
  for (std::size_t d = 0; d < horizon && !frontier.empty(); ++d) {
    std::vector<State> next;
    for (const auto& s : frontier) {
      if (!enabled_somewhere(p, s)) continue;
      GeneratorSet g = build_generators(p, s);
      for (const auto& dist : g.distributions)
        for (const auto& [t, m] : dist) {
          if (!box.contains(t)) throw Error(ErrorKind::StateBoxEscape, render(s) + " -> " + render(t));
          if (depth.emplace(t, d + 1).second) next.push_back(t);
        }
      gens.emplace(s, std::move(g));
    }
    frontier = std::move(next);
  }

  std::map<State, Rational> x;
  for (std::size_t k = 1; k <= horizon; ++k) {
    std::map<State, Rational> y;
    for (const auto& [s, dpt] : depth) {
      if (dpt + k > horizon) continue;
      auto it = gens.find(s);
      if (it == gens.end()) {
        if (!enabled_somewhere(p, s)) {
          Rational b = pw_evaluate(p.post, s);
          if (b != 0) y[s] = b;
        }
        continue;
      }
      bool first = true;
      Rational best = 0;
      for (const auto& dist : it->second.distributions) {
        Rational e = expectation(dist, x);
        if (first || e < best) best = e;
        first = false;
      }
      if (best != 0) y[s] = best;
    }
    x = std::move(y);
  }
  std::map<State, Rational> out;
  for (const auto& s : starts) {
    auto it = x.find(s);
    out[s] = it == x.end() ? Rational(0) : it->second;
  }
  return out;
}

bool closure_invariance_check(const GeneratorSet& g, const std::map<State, Rational>& values,
                              std::size_t trials, std::uint64_t seed) {
  if (g.distributions.empty()) return true;
  Rational best = expectation(g.distributions[0], values);
  for (const auto& d : g.distributions) best = std::min(best, expectation(d, values));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(0, 16);
  std::uniform_int_distribution<std::size_t> pick(0, g.distributions.size() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const Distribution& a = g.distributions[pick(rng)];
    const Distribution& b = g.distributions[pick(rng)];
    Rational w(weight(rng), 16);
    w.canonicalize();
    Distribution mix;
    for (const auto& [s, m] : a) mix[s] += w * m;
    for (const auto& [s, m] : b) mix[s] += (1 - w) * m;
    // Up-closure: move spare mass onto a state already in the support.
    Rational total = 0;
    for (const auto& [s, m] : mix) total += m;
    if (!mix.empty() && total < 1) {
      std::uniform_int_distribution<std::size_t> at(0, mix.size() - 1);
      auto it = std::next(mix.begin(), static_cast<std::ptrdiff_t>(at(rng)));
      Rational extra(weight(rng), 16);
      extra.canonicalize();
      it->second += extra * (1 - total);
    }
    if (expectation(mix, values) < best) return false;
  }
  return true;
}

}  // namespace prexpect

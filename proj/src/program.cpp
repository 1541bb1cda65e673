#include "prexpect/program.hpp"

#include "prexpect/errors.hpp"

#include <algorithm>

namespace prexpect {

Rational GuardedCommand::total_probability() const {
  Rational sum = 0;
  for (const auto& b : branches) sum += b.probability;
  return sum;
}

std::vector<std::string> Program::symbols() const {
  std::vector<std::string> out = variables;
  out.insert(out.end(), constants.begin(), constants.end());
  return out;
}

std::vector<std::string> Program::abstract_vars() const {
  return template_vars.empty() ? variables : template_vars;
}

bool operator==(const Program& a, const Program& b) {
  return a.variables == b.variables && a.constants == b.constants && a.init == b.init &&
         a.invariant == b.invariant && a.template_vars == b.template_vars &&
         a.commands == b.commands && a.post == b.post && a.regions == b.regions;
}

std::vector<Atom> region_partition(const std::vector<Guard>& preds, const Region& within,
                                   std::size_t cap) {
  if (preds.size() > cap)
    throw Error(ErrorKind::TooManyGuards,
                std::to_string(preds.size()) + " guards exceed the cap of " + std::to_string(cap));
  std::vector<Atom> atoms;
  Region start = prune_empty(within);
  if (!start.disjuncts.empty()) atoms.push_back({start, {}});
  for (const auto& g : preds) {
    Region pos = g.to_region();
    Region neg = g.negated_region();
    std::vector<Atom> next;
    for (auto& atom : atoms) {
      Region yes = prune_empty(intersect(atom.region, pos));
      Region no = prune_empty(intersect(atom.region, neg));
      if (!yes.disjuncts.empty()) {
        auto mask = atom.mask;
        mask.push_back(true);
        next.push_back({std::move(yes), std::move(mask)});
      }
      if (!no.disjuncts.empty()) {
        auto mask = atom.mask;
        mask.push_back(false);
        next.push_back({std::move(no), std::move(mask)});
      }
    }
    atoms = std::move(next);
  }
  for (auto& atom : atoms) atom.region = make_disjoint(atom.region);
  return atoms;
}

namespace {

Region invariant_region(const Program& p) { return make_disjoint(p.invariant.to_region()); }

std::vector<Guard> guards_of(const Program& p) {
  std::vector<Guard> out;
  for (const auto& c : p.commands) out.push_back(c.guard);
  return out;
}

}  // namespace

Region exit_region(const Program& p, std::size_t cap) {
  Region exit = invariant_region(p);
  for (const auto& atom : region_partition(guards_of(p), exit, cap)) {
    if (std::none_of(atom.mask.begin(), atom.mask.end(), [](bool b) { return b; }))
      return atom.region;
  }
  return Region::empty();
}

NormalizedProgram normalize(const Program& p, std::size_t cap) {
  NormalizedProgram np;
  np.symbols = p.symbols();
  np.space = invariant_region(p);
  for (const auto& c : p.commands) np.choices.push_back(c.branches);
  for (const auto& atom : region_partition(guards_of(p), np.space, cap)) {
    std::vector<std::size_t> enabled;
    for (std::size_t i = 0; i < atom.mask.size(); ++i)
      if (atom.mask[i]) enabled.push_back(i);
    if (enabled.empty()) {
      np.exit = atom.region;
      continue;
    }
    for (const auto& poly : atom.region.disjuncts) np.cells.push_back({poly, enabled});
  }
  for (const auto& cell : np.cells) {
    for (std::size_t ci : cell.commands) {
      for (const auto& branch : np.choices[ci]) {
        Region back = region_preimage(np.space, branch.assignment);
        if (!subtract(cell.poly, back).empty())
          throw Error(ErrorKind::InvariantViolation,
                      "a branch of command " + std::to_string(ci + 1) +
                          " leaves the invariant from " + cell.poly.to_string());
      }
    }
  }
  return np;
}

std::vector<Region> analysis_regions(const Program& p, const NormalizedProgram& np) {
  std::vector<Region> out;
  if (!p.regions.empty()) {
    for (const auto& g : p.regions) out.push_back(make_disjoint(intersect(g.to_region(), np.space)));
    return out;
  }
  for (const auto& atom : region_partition(guards_of(p), np.space)) {
    bool any = std::any_of(atom.mask.begin(), atom.mask.end(), [](bool b) { return b; });
    if (any) out.push_back(atom.region);
  }
  if (!np.exit.disjuncts.empty()) out.push_back(np.exit);
  return out;
}

}  // namespace prexpect

#pragma once

#include "prexpect/guard.hpp"
#include "prexpect/piecewise.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace prexpect {

struct ProbBranch {
  Assignment assignment;
  Rational probability;
  friend bool operator==(const ProbBranch& a, const ProbBranch& b) {
    return a.probability == b.probability && a.assignment == b.assignment;
  }
};

struct GuardedCommand {
  Guard guard;
  std::vector<ProbBranch> branches;
  Rational total_probability() const;
  friend bool operator==(const GuardedCommand& a, const GuardedCommand& b) {
    return a.guard == b.guard && a.branches == b.branches;
  }
};

struct Program {
  std::vector<std::string> variables;
  /// Read-only symbols (never assigned).
  std::vector<std::string> constants;
  std::optional<Assignment> init;
  /// States outside the invariant are not part of the state space.
  Guard invariant = Guard::truth(true);
  /// Variables carried by abstract rows; empty means every variable.
  std::vector<std::string> template_vars;
  std::vector<GuardedCommand> commands;
  PiecewiseExpr post;
  /// Analysis regions; empty means derived from the guards.
  std::vector<Guard> regions;

  std::vector<std::string> symbols() const;
  std::vector<std::string> abstract_vars() const;
  friend bool operator==(const Program& a, const Program& b);
};

struct Atom {
  Region region;
  std::vector<bool> mask;  // mask[i] ⇔ guard i holds
};

inline constexpr std::size_t kDefaultGuardCap = 16;

/// Nonempty atoms of the boolean algebra generated by `preds` inside
/// `within`, each made of pairwise disjoint polyhedra. Atoms are ordered by
/// recursive splitting, positive side first.
std::vector<Atom> region_partition(const std::vector<Guard>& preds,
                                   const Region& within = Region::universe(),
                                   std::size_t cap = kDefaultGuardCap);

struct Cell {
  Polyhedron poly;
  std::vector<std::size_t> commands;  // enabled command indices
};

struct NormalizedProgram {
  std::vector<std::string> symbols;
  std::vector<Cell> cells;
  std::vector<std::vector<ProbBranch>> choices;  // per command
  Region exit;
  Region space;  // the invariant
};

/// ¬G inside the invariant.
Region exit_region(const Program& p, std::size_t cap = kDefaultGuardCap);

/// Throws Error(InvariantViolation) when some branch leaves the invariant.
NormalizedProgram normalize(const Program& p, std::size_t cap = kDefaultGuardCap);

/// The declared regions intersected with the invariant, or the guard atoms
/// plus the exit cell when none were declared.
std::vector<Region> analysis_regions(const Program& p, const NormalizedProgram& np);

}  // namespace prexpect

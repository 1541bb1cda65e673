#pragma once

#include "prexpect/parser.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace prexpect::testing {

namespace detail {
inline void collect(const Guard& g, std::vector<LinConstraint>& out) {
  if (g.kind() == Guard::Kind::And) {
    for (const auto& c : g.children()) collect(c, out);
  } else if (g.kind() == Guard::Kind::Atom && g.cmp() != Guard::Cmp::Ne) {
    Rel rel = g.cmp() == Guard::Cmp::Le ? Rel::Le : g.cmp() == Guard::Cmp::Lt ? Rel::Lt : Rel::Eq;
    out.push_back({g.expr(), rel});
  } else {
    throw std::runtime_error("not a conjunction of atoms: " + g.to_string());
  }
}
}  // namespace detail

/// Conjunction of comparisons, kept even when empty.
inline Polyhedron poly(const std::string& text, const std::vector<std::string>& vars) {
  std::vector<LinConstraint> cs;
  detail::collect(parse_guard(text, vars), cs);
  return Polyhedron(cs);
}

inline Region region(const std::string& text, const std::vector<std::string>& vars) {
  return make_disjoint(parse_guard(text, vars).to_region());
}

inline LinExpr lin(const std::string& text, const std::vector<std::string>& vars) {
  return parse_linexpr(text, vars);
}

inline std::string program_path(const std::string& name) {
  return std::string(PREXPECT_PROGRAMS_DIR) + "/" + name;
}

inline Program load_program(const std::string& name) {
  std::ifstream in(program_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), name);
}

inline State state(std::initializer_list<std::pair<const std::string, long>> kv) {
  State s;
  for (const auto& [k, v] : kv) s[k] = v;
  return s;
}

}  // namespace prexpect::testing

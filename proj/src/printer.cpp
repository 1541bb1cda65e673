#include "prexpect/parser.hpp"

#include <sstream>

namespace prexpect {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

std::string print_updates(const Assignment& a) {
  std::vector<std::string> parts;
  for (const auto& [v, e] : a.updates()) parts.push_back(v + "' = " + e.to_string());
  return join(parts);
}

}  // namespace

std::string print_pwexpr(const PiecewiseExpr& e) {
  if (e.pieces().empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < e.pieces().size(); ++i) {
    const Piece& p = e.pieces()[i];
    if (i) out += " | ";
    if (!(p.region == Region::universe())) out += "[" + p.region.to_string() + "] ";
    out += p.value.to_string();
  }
  return out;
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  os << "vars " << join(p.variables) << ";\n";
  if (!p.constants.empty()) os << "consts " << join(p.constants) << ";\n";
  if (p.init) os << "init " << print_updates(*p.init) << ";\n";
  if (p.invariant.kind() != Guard::Kind::True) os << "invariant " << p.invariant.to_string() << ";\n";
  if (!p.template_vars.empty()) os << "template " << join(p.template_vars) << ";\n";
  for (const auto& c : p.commands) {
    os << "command " << c.guard.to_string() << " ->";
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
      const auto& b = c.branches[i];
      os << (i ? "\n    | " : " ") << "{" << print_updates(b.assignment) << "} @ "
         << to_string(b.probability);
    }
    os << ";\n";
  }
  os << "post " << print_pwexpr(p.post) << ";\n";
  if (!p.regions.empty()) {
    os << "regions\n";
    for (const auto& r : p.regions) os << "  " << r.to_string() << ";\n";
  }
  return os.str();
}

}  // namespace prexpect

#include "prexpect/cli.hpp"

#include "prexpect/errors.hpp"
#include "prexpect/oracle.hpp"
#include "prexpect/parser.hpp"
#include "prexpect/report.hpp"
#include "prexpect/wp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace prexpect {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

StateBox parse_box(const std::string& spec, const std::vector<std::string>& symbols) {
  auto parts = split(spec, ',');
  if (parts.size() != 1 && parts.size() != symbols.size())
    throw CLI::ValidationError("--box", "expected one range or one per symbol (" +
                                            std::to_string(symbols.size()) + ")");
  StateBox box;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    auto range = split(trim(parts[parts.size() == 1 ? 0 : i]), ':');
    if (range.size() != 2) throw CLI::ValidationError("--box", "ranges look like lo:hi");
    Integer lo(trim(range[0]), 10), hi(trim(range[1]), 10);
    if (lo > hi) throw CLI::ValidationError("--box", "empty range " + parts[i]);
    box.bounds[symbols[i]] = {lo, hi};
  }
  return box;
}

State parse_state(const std::string& spec, const std::vector<std::string>& symbols) {
  State s;
  for (const auto& v : symbols) s[v] = 0;
  for (const auto& item : split(spec, ',')) {
    auto kv = split(item, '=');
    if (kv.size() != 2) throw CLI::ValidationError("--from", "entries look like x=1");
    std::string name = trim(kv[0]);
    if (!s.count(name)) throw CLI::ValidationError("--from", "unknown symbol " + name);
    s[name] = parse_rational(trim(kv[1]));
  }
  return s;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InfeasibleSandwich:
    case ErrorKind::SoundnessCheck:
    case ErrorKind::StateBoxEscape:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weakest pre-expectations by random variable abstraction", "prexpect"};
  app.require_subcommand(1);

  std::string file;
  AnalysisOptions aopts;
  std::string schedule = "jacobi", format = "table", alpha_text;
  auto* analyze_cmd = app.add_subcommand("analyze", "Kleene iteration in the abstract domain");
  analyze_cmd->add_option("file", file, "program")->required();
  analyze_cmd->add_option("--eps", aopts.kleene.eps, "convergence threshold")->capture_default_str();
  analyze_cmd->add_option("--max-iter", aopts.kleene.max_iter, "iteration limit")->capture_default_str();
  analyze_cmd->add_option("--div-bound", aopts.kleene.divergence_bound, "divergence bound")
      ->capture_default_str();
  analyze_cmd->add_option("--growth-window", aopts.kleene.growth_window,
                          "steps of unslowed growth treated as divergence (0 = off)")
      ->capture_default_str();
  analyze_cmd->add_option("--schedule", schedule, "jacobi or pinned")
      ->check(CLI::IsMember({"jacobi", "pinned"}))
      ->capture_default_str();
  analyze_cmd->add_option("--format", format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  analyze_cmd->add_option("--alpha", alpha_text, "expected lower bound to certify at the initial state");

  std::size_t horizon = 0;
  std::string box_text, from_text;
  auto* oracle_cmd = app.add_subcommand("oracle", "explicit-state value iteration");
  oracle_cmd->add_option("file", file, "program")->required();
  oracle_cmd->add_option("--horizon", horizon, "number of steps")->required();
  oracle_cmd->add_option("--box", box_text, "lo:hi per symbol, or one range for all")
      ->default_val("-1000:1000");
  oracle_cmd->add_option("--from", from_text, "start state, e.g. x=1,i=0");

  auto* atoms_cmd = app.add_subcommand("atoms", "guard atoms and the exit region");
  atoms_cmd->add_option("file", file, "program")->required();

  std::string expect_text;
  auto* wp_cmd = app.add_subcommand("wp", "one symbolic wp step");
  wp_cmd->add_option("file", file, "program")->required();
  wp_cmd->add_option("--expect", expect_text, "piecewise expectation")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    Program prog = parse_program(read_file(file), file);
    std::vector<std::string> symbols = prog.symbols();

    if (*analyze_cmd) {
      aopts.kleene.schedule = schedule == "pinned" ? Schedule::Pinned : Schedule::Jacobi;
      if (!alpha_text.empty()) aopts.alpha = parse_pwexpr(alpha_text, symbols);
      AnalysisReport r = analyze(prog, aopts);
      if (format == "csv")
        out << format_csv(r);
      else if (format == "json")
        out << format_json(r);
      else
        out << format_table(r);
      if (r.trace.status == TraceStatus::Diverged)
        err << "diverged: no pre-fixed point detected at this bound (" << r.trace.reason << ")\n";
      if (r.trace.status == TraceStatus::MaxIterations)
        err << "warning: iteration limit reached\n";
      if (!r.error.empty()) err << r.error << "\n";
      return r.failed() ? 1 : 0;
    }

    if (*oracle_cmd) {
      StateBox box = parse_box(box_text, symbols);
      State start;
      if (!from_text.empty()) {
        start = parse_state(from_text, symbols);
      } else if (prog.init && prog.constants.empty()) {
        for (const auto& v : symbols) start[v] = 0;
        start = prog.init->apply(start);
      } else {
        err << "oracle: --from is required for this program\n";
        return 2;
      }
      auto values = value_iteration(prog, horizon, box, {start});
      const Rational& v = values.at(start);
      out << to_string(v) << "\n";
      out << format_coeff(to_double(v)) << "\n";
      return 0;
    }

    NormalizedProgram np = normalize(prog);
    if (*atoms_cmd) {
      for (std::size_t i = 0; i < np.cells.size(); ++i) {
        out << "cell " << i + 1 << ": " << np.cells[i].poly.to_string() << "  commands";
        for (auto c : np.cells[i].commands) out << " " << c + 1;
        out << "\n";
      }
      out << "exit: " << np.exit.to_string() << "\n";
      return 0;
    }

    if (*wp_cmd) {
      PiecewiseExpr x = parse_pwexpr(expect_text, symbols);
      PiecewiseExpr y = wp_step(np, x);
      out << (y.pieces().empty() ? "0" : y.to_string()) << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace prexpect

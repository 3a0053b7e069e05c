#pragma once

// The skewtower command line, callable in-process for tests.
//
// Exit codes: 0 success (whatever the mathematical verdict), 2 parse or
// usage error, 3 validation error, 4 failed precondition.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewtower/builtins.hpp"
#include "skewtower/report.hpp"

namespace skewtower {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitPrecondition = 4;

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UseBeforeDeclaration:
      return kExitParse;
    case ErrorKind::ValidationError:
    case ErrorKind::NonLocalSigma:
    case ErrorKind::NonLocalDelta:
    case ErrorKind::SingularSigmaLinearPart:
    case ErrorKind::InconsistentSigma:
    case ErrorKind::InconsistentDelta:
      return kExitValidation;
    default:
      return kExitPrecondition;
  }
}

namespace detail {

struct CliOptions {
  std::string command;
  std::string target;
  bool json = false;
  std::optional<int> precision;
  std::string filtration = "m-adic";
  std::optional<int> stage;
  bool top = false;
  std::string expr;
};

inline TowerPtr load_tower(const CliOptions& opts) {
  if (!opts.target.empty() && opts.target.front() == '@') return builtin_tower(opts.target, opts.precision);
  std::ifstream in(opts.target);
  if (!in) throw Error(ErrorKind::SyntaxError, "cannot read " + opts.target);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_ring_file(buffer.str(), opts.precision);
}

inline void emit(std::ostream& out, const CliOptions& opts, const Json& j, const std::string& text) {
  if (opts.json) {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

inline int run(const CliOptions& opts, std::ostream& out) {
  const TowerPtr tower = load_tower(opts);
  const RingTower& t = *tower;
  Json j = tower_header_json(t);

  if (opts.command == "validate") {
    j["validation"] = to_json(validate_tower(tower));
    emit(out, opts, j, text_header(j) + text_validation(j["validation"]));
  } else if (opts.command == "report") {
    j = full_report(tower);
    emit(out, opts, j, text_full_report(j));
  } else if (opts.command == "gr") {
    const Filtration f = opts.filtration == "f" ? Filtration::F : Filtration::MAdic;
    j["graded"] = to_json(gr_presentation(tower, f));
    emit(out, opts, j, text_header(j) + text_graded(j["graded"]));
  } else if (opts.command == "stability") {
    j["stability"] = to_json(check_presentation_stability(tower), t);
    emit(out, opts, j, text_header(j) + text_stability(j["stability"]));
  } else if (opts.command == "obstruct") {
    j["obstruction"] = to_json(obstruction_search(tower), t);
    emit(out, opts, j, text_header(j) + text_obstruction(j["obstruction"]));
  } else if (opts.command == "quotient") {
    if (opts.top == opts.stage.has_value()) {
      throw Error(ErrorKind::SyntaxError, "quotient needs exactly one of --stage or --top");
    }
    const TowerPtr q = opts.top ? quotient_by_top(tower) : quotient_by_stage(tower, *opts.stage);
    const std::string file = render_ring_file(*q);
    j["quotient"] = tower_header_json(*q);
    j["quotient"]["ring_file"] = file;
    emit(out, opts, j, file);
  } else if (opts.command == "eval") {
    if (opts.expr.empty()) throw Error(ErrorKind::SyntaxError, "eval needs --expr");
    const Series a = parse_series(tower, opts.expr);
    const int v = valuation_m_adic(a);
    j["expr"] = opts.expr;
    j["value"] = render_series(a);
    j["valuation"] = v == kInfiniteValuation ? Json(nullptr) : Json(v);
    if (t.generator_count() > 0) {
      const int f = valuation_f(a);
      j["valuation_f"] = f == kInfiniteValuation ? Json(nullptr) : Json(f);
    }
    emit(out, opts, j, render_series(a) + "\n");
  }
  return kExitOk;
}

}  // namespace detail

inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact arithmetic, graded rings, stability and rigidity checks for skew power series towers",
               "skewtower"};
  app.require_subcommand(1);
  detail::CliOptions opts;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check locality and consistency of the skew data"},
      {"report", "full report with derived flags"},
      {"gr", "associated graded ring"},
      {"stability", "stability of the declared presentation"},
      {"obstruct", "degree-one obstruction search"},
      {"quotient", "quotient by a stage or by the top generator"},
      {"eval", "evaluate an expression in canonical form"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("tower", opts.target, "ring file or built-in (@e1 ... @e6)")->required();
    sub->add_flag("--json", opts.json, "machine-readable output");
    sub->add_option("--precision", opts.precision, "truncation degree N")->check(CLI::Range(1, kMaxPrecision));
    if (name == "gr") {
      sub->add_option("--filtration", opts.filtration, "m-adic or f")->check(CLI::IsMember({"m-adic", "f"}));
    }
    if (name == "quotient") {
      sub->add_option("--stage", opts.stage, "number of leading generators to kill");
      sub->add_flag("--top", opts.top, "quotient by the top generator");
    }
    if (name == "eval") sub->add_option("--expr", opts.expr, "expression to evaluate")->required();
    sub->callback([&opts, name = name] { opts.command = name; });
  }

  std::vector<std::string> argv_storage{"skewtower"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    return detail::run(opts, out);
  } catch (const Error& e) {
    err << "skewtower: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "skewtower: " << e.what() << "\n";
    return kExitPrecondition;
  }
}

}  // namespace skewtower

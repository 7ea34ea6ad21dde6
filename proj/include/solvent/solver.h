#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solvent/ast.h"
#include "solvent/diagnostics.h"
#include "solvent/encoder.h"

namespace solvent {

enum class SolverKind { Z3, Cvc5, Custom };

struct SolverConfig {
  SolverKind which = SolverKind::Z3;
  double timeout_s = 400;
  std::vector<std::string> extra_args;
  std::vector<std::string> command;  // Custom only: argv of the solver

  std::string name() const;
  static SolverConfig z3(double timeout_s = 400);
  static SolverConfig cvc5(double timeout_s = 400);
};

/// Default flags passed to each solver in addition to `extra_args`.
std::vector<std::string> default_solver_args(SolverKind k);

/// Resolves the argv used to launch a solver. Directories listed in
/// SOLVENT_SOLVER_PATH are searched before PATH. Throws SolventError when
/// nothing suitable is found.
std::vector<std::string> solver_command(const SolverConfig &cfg);

enum class SolverStatus { Sat, Unsat, Unknown, Timeout, Crash };

std::string to_string(SolverStatus s);

using ModelValue = std::variant<Int, bool>;

struct SolverAnswer {
  SolverStatus status = SolverStatus::Crash;
  std::string detail;  // crash reason, unknown reason, solver name
  std::map<std::string, ModelValue> model;
  double elapsed_s = 0;

  bool definitive() const
  {
    return status == SolverStatus::Sat || status == SolverStatus::Unsat;
  }
};

/// Interprets raw solver stdout. `requested` lists the get-value terms of the
/// script in order; values are matched to them by position.
SolverAnswer parse_solver_output(const std::string &out,
                                 const std::vector<std::string> &requested);

/// Parses an SMT-LIB constant: numeral, `(- numeral)`, `true`, `false`.
std::optional<ModelValue> parse_model_value(const std::string &text);

struct ProcessResult {
  std::string out;
  std::string err;
  int wait_status = 0;  // as returned by waitpid
  bool timed_out = false;
  double elapsed_s = 0;
};

/// Feeds `script` to the configured solver and collects its output. The
/// child is killed at the timeout and always reaped.
ProcessResult run_solver_process(const std::string &script, const SolverConfig &cfg);

SolverAnswer run_script(const std::string &script,
                        const std::vector<std::string> &requested,
                        const SolverConfig &cfg);
SolverAnswer run_query(const EncodedQuery &q, const SolverConfig &cfg);

/// Runs every configuration concurrently. Returns the first definitive answer
/// in configuration order; two conflicting definitive answers yield
/// crash("solver-disagreement").
SolverAnswer cross_check(const EncodedQuery &q,
                         const std::vector<SolverConfig> &cfgs);

}  // namespace solvent

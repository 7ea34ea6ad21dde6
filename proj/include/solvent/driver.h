#pragma once

#include <map>
#include <string>
#include <vector>

#include "solvent/ast.h"
#include "solvent/encoder.h"
#include "solvent/interp.h"
#include "solvent/solver.h"

namespace solvent {

enum class VerdictKind { Violated, HoldsUnbounded, HoldsBounded, Unknown };

enum class UnknownReason { None, Timeout, SolverUnknown, Crash, ParseError };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  int n = 0;                        // Violated: trace length; HoldsBounded: depth
  std::vector<Transaction> trace;   // Violated
  QEnv qvars;                       // Violated: binder values
  Int xa = 0;                       // Violated: the actor
  std::map<Int, Int> genesis;       // Violated: account balances before deployment
  UnknownReason reason = UnknownReason::None;
  std::string detail;

  /// ✗(N), ✓, ✓(N) or ?
  std::string mark() const;
  /// Crashes, solver disagreements and replay mismatches.
  bool internal_error() const { return kind == VerdictKind::Unknown && reason == UnknownReason::Crash; }
};

std::string to_string(VerdictKind k);
std::string to_string(UnknownReason r);

struct PhaseRecord {
  std::string name;  // abstract, bmc, inv-init, inv-step, crosscheck
  int depth = 0;
  std::string status;
  double elapsed_s = 0;
  std::string dump;  // path of the dumped script, if any
};

struct RunReport {
  std::string contract;
  std::string property;
  std::string solver;
  Verdict verdict;
  Logic logic = Logic::LinearArrays;
  double elapsed_s = 0;
  std::vector<PhaseRecord> phases;
  std::string file;
  std::vector<std::string> diagnostics;  // parse errors of the input file
};

struct VerifyOptions {
  int max_depth = 10;
  double budget_s = 400;       // per (property, solver) task
  bool replay_check = true;
  FiniteDomains domains;
  std::string dump_dir;        // empty: no dumps
  bool test_mode = false;      // re-check unbounded proofs with BMC up to depth 3
  int jobs = 1;
  std::vector<std::string> properties;  // empty: all
};

/// Everything read back from a satisfying BMC model.
struct DecodedModel {
  std::vector<Transaction> trace;
  QEnv qvars;
  std::map<Int, Int> genesis_accounts;
  /// per frame: scalar state variables plus "$bal" and "$block"
  std::vector<std::map<std::string, Value>> frames;
};

/// Throws SolventError when the model misses a decode_map entry or selects
/// Skip in the prefix.
DecodedModel decode_model(const SolverAnswer &answer, const EncodedQuery &q,
                          const Contract &c);
std::pair<std::vector<Transaction>, Int> decode_trace(const SolverAnswer &answer,
                                                      const EncodedQuery &q,
                                                      const Contract &c,
                                                      const Property &p);

struct ReplayResult {
  bool ok = false;
  std::string detail;
};

/// Re-executes a counterexample. The prefix must deploy and not revert, the
/// reached state must satisfy the antecedent, and exhaustive search over
/// `dom` (widened with the addresses and amounts in the trace) must find no
/// liquidating suffix. `frames`, when given, must agree with the interpreter.
ReplayResult replay_validate(const Contract &c, const Property &p,
                             const std::vector<Transaction> &trace,
                             const QEnv &qvars,
                             const std::map<Int, Int> &genesis_accounts,
                             const FiniteDomains &dom,
                             const std::vector<std::map<std::string, Value>> *frames = nullptr);

/// Abstract proof attempt, then BMC for k = 1..max_depth within the budget.
RunReport verify(const Contract &c, const Property &p,
                 const std::vector<ExprPtr> &invariants, const SolverConfig &cfg,
                 const VerifyOptions &opts);

/// One report per selected property and solver, in that order. Definitive
/// verdicts of different solvers on the same property are cross-checked.
std::vector<RunReport> verify_suite(const SourceUnit &u,
                                    const std::vector<SolverConfig> &cfgs,
                                    const VerifyOptions &opts,
                                    const std::string &file = "");

/// Marks conflicting verdicts on the same (contract, property) as crashes.
void flag_inconsistent(std::vector<RunReport> &reports);

/// Two verdicts conflict when they cannot both be correct.
bool verdicts_conflict(const Verdict &a, const Verdict &b);

/// 0 all hold, 1 some violated, 3 internal error, 4 only unknowns remain.
int exit_code(const std::vector<RunReport> &reports);

std::string render_table(const std::vector<RunReport> &reports);
/// Counterexample traces of the violated reports.
std::string render_traces(const std::vector<RunReport> &reports);

std::string reports_to_json(const std::vector<RunReport> &reports);
std::vector<RunReport> reports_from_json(const std::string &text);

}  // namespace solvent

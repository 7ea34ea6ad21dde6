#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "solvent/ast.h"
#include "solvent/diagnostics.h"

namespace solvent {

struct Address {
  Int v;
  bool operator==(const Address &) const = default;
};

using Value = std::variant<Int, bool, Address>;

std::string to_string(const Value &v);

/// Ground blockchain state. Mapping and account maps are total with default
/// 0; zero entries are never stored so that equality is structural.
struct ConcreteState {
  std::map<std::string, Value> scalars;
  std::map<std::string, std::map<Int, Int>> mappings;
  Int contract_balance = 0;
  std::map<Int, Int> accounts;
  Int block_number = 0;
  bool deployed = false;

  Int account(const Int &a) const;
  void set_account(const Int &a, const Int &v);
  Int map_get(const std::string &m, const Int &key) const;
  void map_set(const std::string &m, const Int &key, const Int &v);
  /// contract_balance plus the sum of all account balances
  Int total_funds() const;

  bool operator==(const ConcreteState &) const = default;
};

/// Pre-deployment state: storage defaults, empty contract balance.
ConcreteState genesis_state(const Contract &c, std::map<Int, Int> accounts,
                            Int block = 0);

enum class TxKind { Constructor, Call, Selfdestruct, Skip };

struct Transaction {
  TxKind kind = TxKind::Call;
  std::string method;  // Call only
  std::vector<Value> args;
  Int sender = 0;
  Int value = 0;
  Int block = 0;

  bool operator==(const Transaction &) const = default;
  std::string display_name() const;
};

struct StepOutcome {
  ConcreteState next;
  bool reverted = false;
};

/// Precondition violations (wrong block order, unknown method, bad arity,
/// insufficient sender funds, ...). Distinct from a revert.
class InterpError : public SolventError {
 public:
  using SolventError::SolventError;
};

class TraceError : public InterpError {
 public:
  TraceError(std::size_t index, const std::string &msg)
      : InterpError("step " + std::to_string(index) + ": " + msg), index(index)
  {
  }
  std::size_t index;
};

StepOutcome apply_tx(const Contract &c, const ConcreteState &s,
                     const Transaction &t);

/// Deploys with `txs[0]` (a Constructor) from a genesis state holding
/// `initial_accounts`, then folds apply_tx over the rest.
std::vector<StepOutcome> run_trace(const Contract &c,
                                   const std::vector<Transaction> &txs,
                                   const std::map<Int, Int> &initial_accounts);

using QEnv = std::map<std::string, Int>;

/// Property-side evaluation. Division by zero is an InterpError here.
Value eval_pre(const Contract &c, const ConcreteState &s, const ExprPtr &e,
               const QEnv &env);
Value eval_post(const Contract &c, const ConcreteState &pre,
                const ConcreteState &post, const ExprPtr &e, const QEnv &env);

struct FiniteDomains {
  std::vector<Int> values{0, 1, 2, 3};       // numeric args and msg.value
  std::vector<Int> addresses{0, 1, 2, 3, 4, 5};
  std::vector<Int> block_offsets{0, 1, 1000000};
  std::size_t max_traces = 2000000;

  /// "values=0,1,2;addresses=0-5;blocks=0,1,1000;max=100000"
  static FiniteDomains parse(const std::string &spec);
};

struct LiquidityWitness {
  bool found = false;
  std::vector<Transaction> suffix;
};

/// Exhaustively searches traces of at most p.bound_m transactions, all sent
/// by the actor bound in `env`, for one that makes the consequent true.
/// Throws InterpError when more than dom.max_traces traces would be needed.
LiquidityWitness find_liquidating_suffix(const Contract &c,
                                         const ConcreteState &s,
                                         const Property &p, const QEnv &env,
                                         const FiniteDomains &dom);

bool bruteforce_liquid(const Contract &c, const ConcreteState &s,
                       const Property &p, const QEnv &env,
                       const FiniteDomains &dom);

/// `[i] name(args)  msg.sender=address(k)  msg.value=v  block=b`
std::string format_tx(std::size_t index, const Transaction &t);
std::string format_trace(const std::vector<Transaction> &trace);

/// Inverse of format_trace; argument types come from the contract.
Parsed<std::vector<Transaction>> parse_trace(const Contract &c,
                                             const std::string &text);

}  // namespace solvent

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "solvent/ast.h"
#include "solvent/interp.h"

namespace solvent::testgen {

using Rng = std::mt19937_64;

/// Small well-formed contract: at most 4 state variables, 3 methods and
/// 2 parameters per method, bodies nested at most one `if` deep.
Contract random_contract(Rng &rng);

/// Well-formed property over `c` with one or two binders.
Property random_property(const Contract &c, Rng &rng, const std::string &name);

/// Contract, 0-2 properties and 0-1 invariant blocks.
SourceUnit random_unit(Rng &rng);

/// Random argument vector for `m` (values in 0..4, addresses in 0..3).
std::vector<Value> random_args(const Method &m, Rng &rng);

/// Funded genesis accounts for addresses 0..3.
std::map<Int, Int> random_accounts(Rng &rng);

/// Constructor transaction followed by `steps` calls and selfdestructs that
/// the interpreter accepts (reverts allowed after the constructor, but the
/// constructor itself succeeds). Returns false if no such trace was found.
bool random_trace(const Contract &c, const std::map<Int, Int> &accounts,
                  std::size_t steps, Rng &rng, std::vector<Transaction> &out);


struct InvariantStats {
  std::size_t transactions = 0;
  std::size_t reverts = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
};

/// Applies at least `transactions` random transactions to random contracts
/// and checks on every step: total funds are conserved, a revert changes
/// nothing but the block number, the block number never decreases, and no
/// balance or unsigned value is negative.
InvariantStats check_interp_invariants(std::size_t transactions, std::uint64_t seed);

}  // namespace solvent::testgen

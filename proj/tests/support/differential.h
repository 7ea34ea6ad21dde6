#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solvent/interp.h"
#include "solvent/solver.h"

namespace solvent::testgen {

/// SMT term of a concrete frame value for state variable `name`.
std::string frame_term(const Contract &c, const ConcreteState &s, const std::string &name);

/// Conjunction fixing the frame `prefix` (e.g. "f2") to `s`.
std::string frame_is(const Contract &c, const std::string &prefix, const ConcreteState &s);

/// Conjunction fixing the transaction variables `prefix` to `t`.
std::string tx_is(const Contract &c, const std::string &prefix, const Transaction &t);

struct DiffStats {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;  // first few failures
};

/// Runs `pairs` random (contract, trace) pairs through both the interpreter
/// and the encoder. With the transaction variables fixed, the interpreter
/// frames must satisfy the chain, and any other final frame must not.
DiffStats run_differential(std::size_t pairs, std::uint64_t seed, const SolverConfig &cfg);

}  // namespace solvent::testgen

#pragma once

#include <optional>
#include <vector>

#include "solvent/ast.h"
#include "solvent/diagnostics.h"

namespace solvent {

/// Type and binding rules for a contract and its properties. Returns an empty
/// list iff everything is well formed. Deterministic: diagnostics come out in
/// source traversal order.
std::vector<Diagnostic> check_wellformed(const Contract &c,
                                         const std::vector<Property> &props);
std::vector<Diagnostic> check_wellformed(const SourceUnit &u);

/// Static type of an expression; nullopt when ill-typed. `params` is the
/// method in scope (null in property/invariant context).
std::optional<Ty> type_of(const Contract &c, const Method *params,
                          const ExprPtr &e);

}  // namespace solvent

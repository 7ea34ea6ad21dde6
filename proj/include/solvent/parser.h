#pragma once

#include <string_view>

#include "solvent/ast.h"
#include "solvent/diagnostics.h"

namespace solvent {

/// Parses one contract followed by any number of `property` and `invariant`
/// blocks. Identifiers are resolved while parsing: method parameters become
/// Param, property binders become QVar, everything else is a StateVar
/// (existence is checked by check_wellformed, not here).
///
/// On error the value is empty and the diagnostics hold the first error plus
/// whatever could be recovered after it.
Parsed<SourceUnit> parse_file(std::string_view src);

/// Parses a standalone expression in property context with the given binders.
/// Mostly useful for tests and for `--oracle-domain` style inputs.
Parsed<ExprPtr> parse_expression(std::string_view src,
                                 const std::vector<std::string> &qvars = {});

}  // namespace solvent

#pragma once

#include <string>

#include "solvent/ast.h"

namespace solvent {

// Canonical concrete syntax. parse_file(pretty_print(u)) == u for every
// well-formed unit.
std::string pretty_print(const Contract &c);
std::string pretty_print_property(const Property &p);
std::string pretty_print_invariant(const Invariant &inv);
std::string pretty_print(const SourceUnit &u);
std::string pretty_print(const ExprPtr &e);

}  // namespace solvent

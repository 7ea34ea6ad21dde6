#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "solvent/ast.h"

namespace solvent {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
  std::string rule_id;

  bool operator==(const Diagnostic &o) const
  {
    return severity == o.severity && span.line == o.span.line
           && span.column == o.span.column && span.length == o.span.length
           && message == o.message && rule_id == o.rule_id;
  }
};

/// `path:line:col: error[rule_id]: message`
std::string format_diagnostic(const std::string &path, const Diagnostic &d);

template <typename T>
struct Parsed {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
};

/// Raised for inputs that violate a precondition of an API (as opposed to
/// in-band outcomes such as a transaction revert).
class SolventError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace solvent

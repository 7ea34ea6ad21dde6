#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "solvent/ast.h"

namespace solvent::smt {

inline const std::string kIntSort = "Int";
inline const std::string kBoolSort = "Bool";
inline const std::string kArraySort = "(Array Int Int)";

std::string lit(const Int &v);
inline std::string lit(bool b) { return b ? "true" : "false"; }

/// `(op a b ...)`
std::string app(const std::string &op, std::initializer_list<std::string> args);
std::string app(const std::string &op, const std::vector<std::string> &args);

/// n-ary and/or with the trivial cases folded
std::string conj(const std::vector<std::string> &xs);
std::string disj(const std::vector<std::string> &xs);
std::string ite(const std::string &c, const std::string &t, const std::string &e);
std::string select(const std::string &arr, const std::string &idx);
std::string store(const std::string &arr, const std::string &idx,
                  const std::string &v);
std::string const_array(const Int &v);

/// Introduces names for intermediate terms. At top level these become
/// `define-fun` constants; under a quantifier they become nested lets.
class Binder {
 public:
  enum class Mode { TopLevel, Let };

  Binder(Mode mode, std::string prefix, int *counter)
      : mode_(mode), prefix_(std::move(prefix)), counter_(counter)
  {
  }

  /// Returns a fresh name bound to `term`. Atoms are returned unchanged.
  std::string bind(const std::string &sort, const std::string &term);

  Mode mode() const { return mode_; }

  /// TopLevel: the define-fun commands emitted so far.
  const std::vector<std::string> &commands() const { return commands_; }

  /// Let: wraps `body` in the recorded bindings.
  std::string wrap(const std::string &body) const;

 private:
  Mode mode_;
  std::string prefix_;
  int *counter_;
  std::vector<std::string> commands_;
  std::vector<std::pair<std::string, std::string>> lets_;
};

bool is_atom(const std::string &term);

}  // namespace solvent::smt

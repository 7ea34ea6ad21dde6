#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace solvent {

/// Mathematical integers: contract arithmetic never wraps.
using Int = boost::multiprecision::cpp_int;

/// 1-based source position. Spans are carried for diagnostics only and never
/// take part in structural equality of AST nodes.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int length = 0;

  bool operator==(const SourceSpan &) const { return true; }
};

enum class TyKind { Int, UInt, Bool, Address, Mapping };

struct Ty {
  TyKind kind = TyKind::Int;
  // value type when kind == Mapping (keys are always addresses)
  TyKind map_value = TyKind::UInt;

  static Ty int_ty() { return {TyKind::Int, TyKind::UInt}; }
  static Ty uint_ty() { return {TyKind::UInt, TyKind::UInt}; }
  static Ty bool_ty() { return {TyKind::Bool, TyKind::UInt}; }
  static Ty address_ty() { return {TyKind::Address, TyKind::UInt}; }
  static Ty mapping_ty(TyKind value) { return {TyKind::Mapping, value}; }

  bool is_numeric() const
  {
    return kind == TyKind::Int || kind == TyKind::UInt;
  }
  bool operator==(const Ty &o) const
  {
    return kind == o.kind && (kind != TyKind::Mapping || map_value == o.map_value);
  }
};

std::string to_string(const Ty &ty);
std::string to_string(TyKind kind);

enum class ExprKind {
  IntLit,
  BoolLit,
  AddressLit,
  StateVar,
  Param,
  QVar,  // property binder (`Forall xa`)
  MapGet,
  MsgSender,
  MsgValue,
  BlockNumber,
  ContractBalance,
  AccountBalance,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
  Post,  // `<tx>e`: e evaluated in the state after the liquidating suffix
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  Int value = 0;       // IntLit, AddressLit
  bool bool_value = false;
  std::string name;    // StateVar, Param, QVar, MapGet
  std::vector<ExprPtr> args;
  SourceSpan span;

  bool operator==(const Expr &o) const;
};

bool is_binary(ExprKind k);
bool is_comparison(ExprKind k);
bool is_arithmetic(ExprKind k);

// Node constructors. All return immutable shared nodes.
ExprPtr mk_int(Int v, SourceSpan span = {});
ExprPtr mk_bool(bool v, SourceSpan span = {});
ExprPtr mk_address(Int v, SourceSpan span = {});
ExprPtr mk_var(ExprKind kind, std::string name, SourceSpan span = {});
ExprPtr mk_map_get(std::string name, ExprPtr key, SourceSpan span = {});
ExprPtr mk_leaf(ExprKind kind, SourceSpan span = {});
ExprPtr mk_unary(ExprKind kind, ExprPtr e, SourceSpan span = {});
ExprPtr mk_binary(ExprKind kind, ExprPtr a, ExprPtr b, SourceSpan span = {});

bool expr_equal(const ExprPtr &a, const ExprPtr &b);

struct LValue {
  std::string name;
  ExprPtr key;  // non-null for mapping entries
  SourceSpan span;

  bool operator==(const LValue &o) const
  {
    return name == o.name && expr_equal(key, o.key);
  }
};

enum class StmtKind { Require, Assign, Transfer, If };

struct Stmt;
using Block = std::vector<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Require;
  ExprPtr cond;       // Require, If
  LValue target;      // Assign
  ExprPtr value;      // Assign: rhs; Transfer: amount
  ExprPtr recipient;  // Transfer
  Block then_body;
  Block else_body;
  SourceSpan span;

  bool operator==(const Stmt &o) const;
};

struct Param {
  std::string name;
  Ty ty;
  SourceSpan span;

  bool operator==(const Param &) const = default;
};

struct Method {
  std::string name;  // empty for the constructor
  std::vector<Param> params;
  bool payable = false;
  Block body;
  SourceSpan span;

  bool operator==(const Method &) const = default;
};

struct VarDecl {
  std::string name;
  Ty ty;
  bool immutable = false;
  SourceSpan span;

  bool operator==(const VarDecl &) const = default;
};

struct Contract {
  std::string name;
  std::vector<VarDecl> state_vars;
  Method ctor;
  std::vector<Method> methods;
  SourceSpan span;

  bool operator==(const Contract &) const = default;

  const VarDecl *find_var(const std::string &n) const;
  const Method *find_method(const std::string &n) const;
  int method_index(const std::string &n) const;
  std::size_t max_arity() const;
};

/// `Forall qvars [ antecedent -> Exists tx [bound_m, actor] [ consequent ] ]`
struct Property {
  std::string name;
  std::vector<std::string> qvars;
  ExprPtr antecedent;
  int bound_m = 1;
  std::string actor;
  ExprPtr consequent;
  SourceSpan span;

  bool operator==(const Property &o) const;
};

/// `invariant { e; ... }`: candidate state invariants used to strengthen the
/// abstract proof. They are only used after being checked inductive.
struct Invariant {
  std::vector<ExprPtr> conjuncts;
  SourceSpan span;

  bool operator==(const Invariant &o) const;
};

struct SourceUnit {
  Contract contract;
  std::vector<Property> properties;
  std::vector<Invariant> invariants;

  bool operator==(const SourceUnit &) const = default;

  const Property *find_property(const std::string &n) const;
};

/// Visits every node of `e` in pre-order.
template <typename F>
void walk(const ExprPtr &e, F &&f)
{
  if (!e) return;
  f(*e);
  for (const auto &a : e->args) walk(a, f);
}

template <typename F>
void walk_block(const Block &b, F &&f)
{
  for (const auto &s : b) {
    walk(s.cond, f);
    walk(s.target.key, f);
    walk(s.value, f);
    walk(s.recipient, f);
    walk_block(s.then_body, f);
    walk_block(s.else_body, f);
  }
}

}  // namespace solvent

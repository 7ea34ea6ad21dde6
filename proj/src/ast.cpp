#include "solvent/ast.h"

#include <algorithm>

namespace solvent {

std::string to_string(TyKind kind)
{
  switch (kind) {
    case TyKind::Int: return "int";
    case TyKind::UInt: return "uint";
    case TyKind::Bool: return "bool";
    case TyKind::Address: return "address";
    case TyKind::Mapping: return "mapping";
  }
  return "?";
}

std::string to_string(const Ty &ty)
{
  if (ty.kind == TyKind::Mapping)
    return "mapping(address => " + to_string(ty.map_value) + ")";
  return to_string(ty.kind);
}

bool is_comparison(ExprKind k)
{
  switch (k) {
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return true;
    default: return false;
  }
}

bool is_arithmetic(ExprKind k)
{
  return k == ExprKind::Add || k == ExprKind::Sub || k == ExprKind::Mul
         || k == ExprKind::Div;
}

bool is_binary(ExprKind k)
{
  return is_comparison(k) || is_arithmetic(k) || k == ExprKind::And
         || k == ExprKind::Or;
}

bool expr_equal(const ExprPtr &a, const ExprPtr &b)
{
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool Expr::operator==(const Expr &o) const
{
  if (kind != o.kind || value != o.value || bool_value != o.bool_value
      || name != o.name || args.size() != o.args.size())
    return false;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!expr_equal(args[i], o.args[i])) return false;
  return true;
}

bool Stmt::operator==(const Stmt &o) const
{
  return kind == o.kind && expr_equal(cond, o.cond) && target == o.target
         && expr_equal(value, o.value) && expr_equal(recipient, o.recipient)
         && then_body == o.then_body && else_body == o.else_body;
}

bool Property::operator==(const Property &o) const
{
  return name == o.name && qvars == o.qvars
         && expr_equal(antecedent, o.antecedent) && bound_m == o.bound_m
         && actor == o.actor && expr_equal(consequent, o.consequent);
}

bool Invariant::operator==(const Invariant &o) const
{
  if (conjuncts.size() != o.conjuncts.size()) return false;
  for (std::size_t i = 0; i < conjuncts.size(); ++i)
    if (!expr_equal(conjuncts[i], o.conjuncts[i])) return false;
  return true;
}

ExprPtr mk_int(Int v, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::IntLit;
  e->value = std::move(v);
  e->span = span;
  return e;
}

ExprPtr mk_bool(bool v, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::BoolLit;
  e->bool_value = v;
  e->span = span;
  return e;
}

ExprPtr mk_address(Int v, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::AddressLit;
  e->value = std::move(v);
  e->span = span;
  return e;
}

ExprPtr mk_var(ExprKind kind, std::string name, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(name);
  e->span = span;
  return e;
}

ExprPtr mk_map_get(std::string name, ExprPtr key, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::MapGet;
  e->name = std::move(name);
  e->args = {std::move(key)};
  e->span = span;
  return e;
}

ExprPtr mk_leaf(ExprKind kind, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = span;
  return e;
}

ExprPtr mk_unary(ExprKind kind, ExprPtr a, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = {std::move(a)};
  e->span = span;
  return e;
}

ExprPtr mk_binary(ExprKind kind, ExprPtr a, ExprPtr b, SourceSpan span)
{
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = {std::move(a), std::move(b)};
  e->span = span;
  return e;
}

const VarDecl *Contract::find_var(const std::string &n) const
{
  auto it = std::find_if(state_vars.begin(), state_vars.end(),
                         [&](const VarDecl &v) { return v.name == n; });
  return it == state_vars.end() ? nullptr : &*it;
}

const Method *Contract::find_method(const std::string &n) const
{
  auto it = std::find_if(methods.begin(), methods.end(),
                         [&](const Method &m) { return m.name == n; });
  return it == methods.end() ? nullptr : &*it;
}

int Contract::method_index(const std::string &n) const
{
  for (std::size_t i = 0; i < methods.size(); ++i)
    if (methods[i].name == n) return static_cast<int>(i);
  return -1;
}

std::size_t Contract::max_arity() const
{
  std::size_t n = ctor.params.size();
  for (const auto &m : methods) n = std::max(n, m.params.size());
  return n;
}

const Property *SourceUnit::find_property(const std::string &n) const
{
  for (const auto &p : properties)
    if (p.name == n) return &p;
  return nullptr;
}

}  // namespace solvent

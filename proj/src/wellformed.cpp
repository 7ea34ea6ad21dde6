#include "solvent/wellformed.h"

#include <algorithm>
#include <set>

namespace solvent {

namespace {

enum class Ctx { Method, Antecedent, Consequent, Invariant };

class Checker {
 public:
  explicit Checker(const Contract &c) : c_(c) {}

  std::vector<Diagnostic> diags;

  void check_contract()
  {
    std::set<std::string> seen;
    for (const auto &v : c_.state_vars) {
      if (!seen.insert(v.name).second)
        report(v.span, "duplicate state variable '" + v.name + "'",
               "duplicate-state-var");
      if (v.name == "balance" || v.name == "st")
        report(v.span, "'" + v.name + "' is a reserved name", "reserved-name");
    }
    std::set<std::string> methods;
    for (const auto &m : c_.methods) {
      if (m.name == "selfdestruct" || m.name == "constructor" || m.name == "skip")
        report(m.span, "method name '" + m.name + "' is reserved", "reserved-name");
      if (!methods.insert(m.name).second)
        report(m.span, "duplicate method '" + m.name + "'", "duplicate-method");
    }
    check_method(c_.ctor, true);
    for (const auto &m : c_.methods) check_method(m, false);
  }

  void check_property(const Property &p)
  {
    qvars_ = p.qvars;
    method_ = nullptr;
    std::set<std::string> seen;
    for (const auto &q : p.qvars) {
      if (!seen.insert(q).second)
        report(p.span, "duplicate binder '" + q + "'", "duplicate-qvar");
      if (c_.find_var(q))
        report(p.span, "binder '" + q + "' shadows a state variable",
               "shadowed-state-var");
    }
    if (std::find(p.qvars.begin(), p.qvars.end(), p.actor) == p.qvars.end())
      report(p.span, "actor '" + p.actor + "' is not bound by Forall",
             "unbound-actor");
    if (p.bound_m < 1)
      report(p.span, "trace bound must be at least 1", "bad-bound");
    ctx_ = Ctx::Antecedent;
    expect_bool(p.antecedent, "property antecedent");
    ctx_ = Ctx::Consequent;
    expect_bool(p.consequent, "property consequent");
  }

  void check_invariant(const Invariant &inv)
  {
    qvars_.clear();
    method_ = nullptr;
    ctx_ = Ctx::Invariant;
    for (const auto &e : inv.conjuncts) expect_bool(e, "invariant");
  }

  std::optional<Ty> infer(const ExprPtr &e)
  {
    in_post_ = false;
    return infer_rec(e);
  }

  void set_method(const Method *m)
  {
    method_ = m;
    ctx_ = m ? Ctx::Method : Ctx::Invariant;
  }

 private:
  const Contract &c_;
  const Method *method_ = nullptr;
  bool in_ctor_ = false;
  Ctx ctx_ = Ctx::Method;
  std::vector<std::string> qvars_;
  bool in_post_ = false;

  void report(SourceSpan span, std::string msg, std::string rule)
  {
    diags.push_back({Severity::Error, span, std::move(msg), std::move(rule)});
  }

  void check_method(const Method &m, bool is_ctor)
  {
    method_ = &m;
    in_ctor_ = is_ctor;
    ctx_ = Ctx::Method;
    qvars_.clear();
    std::set<std::string> seen;
    for (const auto &p : m.params) {
      if (!seen.insert(p.name).second)
        report(p.span, "duplicate parameter '" + p.name + "'", "duplicate-param");
      if (p.ty.kind == TyKind::Mapping)
        report(p.span, "parameters cannot have mapping type", "mapping-param");
    }
    check_block(m.body);
  }

  void check_block(const Block &b)
  {
    for (const auto &s : b) check_stmt(s);
  }

  void expect_bool(const ExprPtr &e, const char *what)
  {
    auto t = infer(e);
    if (t && t->kind != TyKind::Bool)
      report(e->span, std::string(what) + " must be bool, found " + to_string(*t),
             "type-mismatch");
  }

  void check_stmt(const Stmt &s)
  {
    switch (s.kind) {
      case StmtKind::Require: expect_bool(s.cond, "require condition"); break;
      case StmtKind::If:
        expect_bool(s.cond, "if condition");
        check_block(s.then_body);
        check_block(s.else_body);
        break;
      case StmtKind::Transfer: {
        auto r = infer(s.recipient);
        if (r && r->kind != TyKind::Address)
          report(s.recipient->span, "transfer recipient must be an address",
                 "type-mismatch");
        auto a = infer(s.value);
        if (a && !a->is_numeric())
          report(s.value->span, "transfer amount must be numeric",
                 "type-mismatch");
        break;
      }
      case StmtKind::Assign: check_assign(s); break;
    }
  }

  void check_assign(const Stmt &s)
  {
    const auto &lv = s.target;
    const VarDecl *v = c_.find_var(lv.name);
    auto rhs = infer(s.value);
    if (!v) {
      report(lv.span, "unknown state variable '" + lv.name + "'",
             "unknown-identifier");
      return;
    }
    if (v->immutable && !in_ctor_)
      report(lv.span,
             "immutable variable '" + lv.name
                 + "' can only be assigned in the constructor",
             "immutable-assign");
    Ty slot = v->ty;
    if (v->ty.kind == TyKind::Mapping) {
      if (!lv.key) {
        report(lv.span, "cannot assign a whole mapping", "mapping-as-value");
        return;
      }
      auto k = infer(lv.key);
      if (k && k->kind != TyKind::Address)
        report(lv.key->span, "mapping key must be an address", "type-mismatch");
      slot = Ty{v->ty.map_value, TyKind::UInt};
    } else if (lv.key) {
      report(lv.span, "'" + lv.name + "' is not a mapping", "not-a-mapping");
      return;
    }
    if (rhs && !assignable(slot, *rhs))
      report(s.value->span,
             "cannot assign " + to_string(*rhs) + " to " + to_string(slot),
             "type-mismatch");
  }

  static bool assignable(const Ty &slot, const Ty &v)
  {
    if (slot.is_numeric()) return v.is_numeric();
    return slot.kind == v.kind;
  }

  std::optional<Ty> fail(const Expr &e, std::string msg, std::string rule)
  {
    report(e.span, std::move(msg), std::move(rule));
    return std::nullopt;
  }

  std::optional<Ty> infer_rec(const ExprPtr &ep)
  {
    const Expr &e = *ep;
    switch (e.kind) {
      case ExprKind::IntLit: return Ty::int_ty();
      case ExprKind::BoolLit: return Ty::bool_ty();
      case ExprKind::AddressLit:
        if (e.value < 0) return fail(e, "negative address", "type-mismatch");
        return Ty::address_ty();
      case ExprKind::StateVar: {
        const VarDecl *v = c_.find_var(e.name);
        if (!v)
          return fail(e, "unknown identifier '" + e.name + "'",
                      "unknown-identifier");
        if (v->ty.kind == TyKind::Mapping)
          return fail(e, "mapping '" + e.name + "' used as a value",
                      "mapping-as-value");
        return v->ty;
      }
      case ExprKind::Param: {
        if (method_)
          for (const auto &p : method_->params)
            if (p.name == e.name) return p.ty;
        return fail(e, "unknown parameter '" + e.name + "'", "unknown-identifier");
      }
      case ExprKind::QVar:
        if (std::find(qvars_.begin(), qvars_.end(), e.name) == qvars_.end())
          return fail(e, "unbound variable '" + e.name + "'", "unknown-identifier");
        return Ty::address_ty();
      case ExprKind::MapGet: {
        const VarDecl *v = c_.find_var(e.name);
        auto k = infer_rec(e.args[0]);
        if (!v)
          return fail(e, "unknown identifier '" + e.name + "'",
                      "unknown-identifier");
        if (v->ty.kind != TyKind::Mapping)
          return fail(e, "'" + e.name + "' is not a mapping", "not-a-mapping");
        if (!k) return std::nullopt;
        if (k->kind != TyKind::Address)
          return fail(*e.args[0], "mapping key must be an address",
                      "type-mismatch");
        return Ty{v->ty.map_value, TyKind::UInt};
      }
      case ExprKind::MsgSender:
      case ExprKind::MsgValue:
        if (ctx_ != Ctx::Method)
          return fail(e, "msg.sender/msg.value are only available in methods",
                      "builtin-context");
        return e.kind == ExprKind::MsgSender ? Ty::address_ty() : Ty::uint_ty();
      case ExprKind::BlockNumber:
      case ExprKind::ContractBalance: return Ty::uint_ty();
      case ExprKind::AccountBalance: {
        auto a = infer_rec(e.args[0]);
        if (!a) return std::nullopt;
        if (a->kind != TyKind::Address)
          return fail(*e.args[0], "balance[...] expects an address",
                      "type-mismatch");
        return Ty::uint_ty();
      }
      case ExprKind::Post: {
        if (ctx_ != Ctx::Consequent)
          return fail(e, "<tx> may only appear in a property consequent",
                      "post-outside-consequent");
        if (in_post_) return fail(e, "<tx> markers cannot nest", "nested-post");
        in_post_ = true;
        auto t = infer_rec(e.args[0]);
        in_post_ = false;
        return t;
      }
      case ExprKind::Neg: {
        auto a = infer_rec(e.args[0]);
        if (!a) return std::nullopt;
        if (!a->is_numeric())
          return fail(e, "unary minus expects a number", "type-mismatch");
        return Ty::int_ty();
      }
      case ExprKind::Not: {
        auto a = infer_rec(e.args[0]);
        if (!a) return std::nullopt;
        if (a->kind != TyKind::Bool)
          return fail(e, "'!' expects a bool", "type-mismatch");
        return Ty::bool_ty();
      }
      default: break;
    }

    auto a = infer_rec(e.args[0]);
    auto b = infer_rec(e.args[1]);
    if (!a || !b) return std::nullopt;
    if (is_arithmetic(e.kind)) {
      if (!a->is_numeric() || !b->is_numeric())
        return fail(e, "arithmetic on non-numeric operands", "type-mismatch");
      return Ty::int_ty();
    }
    if (e.kind == ExprKind::And || e.kind == ExprKind::Or) {
      if (a->kind != TyKind::Bool || b->kind != TyKind::Bool)
        return fail(e, "logical operator expects bools", "type-mismatch");
      return Ty::bool_ty();
    }
    if (e.kind == ExprKind::Eq || e.kind == ExprKind::Ne) {
      bool ok = (a->is_numeric() && b->is_numeric()) || a->kind == b->kind;
      if (!ok)
        return fail(e,
                    "cannot compare " + to_string(*a) + " with " + to_string(*b),
                    "type-mismatch");
      return Ty::bool_ty();
    }
    if (!a->is_numeric() || !b->is_numeric())
      return fail(e, "ordering comparison expects numbers", "type-mismatch");
    return Ty::bool_ty();
  }
};

}  // namespace

std::vector<Diagnostic> check_wellformed(const Contract &c,
                                         const std::vector<Property> &props)
{
  Checker ck(c);
  ck.check_contract();
  std::set<std::string> names;
  for (const auto &p : props) {
    if (!names.insert(p.name).second)
      ck.diags.push_back({Severity::Error, p.span,
                          "duplicate property '" + p.name + "'",
                          "duplicate-property"});
    ck.check_property(p);
  }
  return ck.diags;
}

std::vector<Diagnostic> check_wellformed(const SourceUnit &u)
{
  auto diags = check_wellformed(u.contract, u.properties);
  Checker ck(u.contract);
  for (const auto &inv : u.invariants) ck.check_invariant(inv);
  diags.insert(diags.end(), ck.diags.begin(), ck.diags.end());
  return diags;
}

std::optional<Ty> type_of(const Contract &c, const Method *params,
                          const ExprPtr &e)
{
  Checker ck(c);
  ck.set_method(params);
  return ck.infer(e);
}

}  // namespace solvent

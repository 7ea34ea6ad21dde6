#include "solvent/encoder.h"

#include <set>

#include "solvent/diagnostics.h"

namespace solvent {

using namespace smt;

std::string to_string(Logic l)
{
  return l == Logic::LinearArrays ? "LIA+arrays" : "NIA+arrays";
}

std::string to_string(QueryKind k)
{
  switch (k) {
    case QueryKind::Bmc: return "bmc";
    case QueryKind::Abstract: return "abstract";
    case QueryKind::InductiveInit: return "inv-init";
    case QueryKind::InductiveStep: return "inv-step";
    case QueryKind::Custom: return "custom";
  }
  return "?";
}

namespace {

bool is_constant(const ExprPtr &e)
{
  bool constant = true;
  walk(e, [&](const Expr &n) {
    switch (n.kind) {
      case ExprKind::IntLit:
      case ExprKind::Neg:
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: break;
      default: constant = false;
    }
  });
  return constant;
}

bool nonlinear(const ExprPtr &e)
{
  bool nl = false;
  walk(e, [&](const Expr &n) {
    if (n.kind == ExprKind::Mul && !is_constant(n.args[0])
        && !is_constant(n.args[1]))
      nl = true;
    if (n.kind == ExprKind::Div && !is_constant(n.args[1])) nl = true;
  });
  return nl;
}

bool is_positive_literal(const ExprPtr &e)
{
  return e->kind == ExprKind::IntLit && e->value > 0;
}

}  // namespace

Logic select_logic(const Contract &c, const Property *p)
{
  bool nl = false;
  auto visit = [&](const Expr &n) {
    if (n.kind == ExprKind::Mul && !is_constant(n.args[0])
        && !is_constant(n.args[1]))
      nl = true;
    if (n.kind == ExprKind::Div && !is_constant(n.args[1])) nl = true;
  };
  walk_block(c.ctor.body, visit);
  for (const auto &m : c.methods) walk_block(m.body, visit);
  if (p) {
    nl = nl || nonlinear(p->antecedent) || nonlinear(p->consequent);
  }
  return nl ? Logic::NonlinearArrays : Logic::LinearArrays;
}

// --- script builder ------------------------------------------------------

ScriptBuilder::ScriptBuilder()
{
  lines_.push_back("(set-option :produce-models true)");
  lines_.push_back("(set-logic ALL)");
}

void ScriptBuilder::declare(const std::string &name, const std::string &sort)
{
  lines_.push_back("(declare-fun " + name + " () " + sort + ")");
}

void ScriptBuilder::add(const std::string &command) { lines_.push_back(command); }

void ScriptBuilder::assert_term(const std::string &term)
{
  if (term == "true") return;
  lines_.push_back("(assert " + term + ")");
}

void ScriptBuilder::absorb(const Binder &b)
{
  for (const auto &c : b.commands()) lines_.push_back(c);
}

std::string ScriptBuilder::text() const
{
  std::string out;
  for (const auto &l : lines_) out += l + "\n";
  return out;
}

std::string ScriptBuilder::finish(const std::vector<std::string> &terms) const
{
  std::string out = text() + "(check-sat)\n";
  if (!terms.empty()) {
    out += "(get-value (";
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) out += ' ';
      out += terms[i];
    }
    out += "))\n";
  }
  return out;
}

// --- encoder -------------------------------------------------------------

struct Encoder::ExprCtx {
  const SymState *cur = nullptr;
  const SymState *post = nullptr;
  const TxVars *tx = nullptr;
  const Method *method = nullptr;
  const std::map<std::string, std::string> *qvars = nullptr;
};

Encoder::Encoder(const Contract &c) : c_(c)
{
  auto count = [&](const Method &m, std::size_t &ints, std::size_t &bools) {
    std::size_t ni = 0, nb = 0;
    for (const auto &p : m.params) (p.ty.kind == TyKind::Bool ? nb : ni)++;
    ints = std::max(ints, ni);
    bools = std::max(bools, nb);
  };
  count(c.ctor, ctor_int_slots_, ctor_bool_slots_);
  for (const auto &m : c.methods) count(m, int_slots_, bool_slots_);
}

std::pair<bool, std::size_t> Encoder::slot_of(const Method &m, std::size_t i) const
{
  std::size_t ni = 0, nb = 0;
  for (std::size_t k = 0; k < i; ++k)
    (m.params[k].ty.kind == TyKind::Bool ? nb : ni)++;
  if (m.params[i].ty.kind == TyKind::Bool) return {true, nb};
  return {false, ni};
}

std::string Encoder::sort_of(const Ty &ty)
{
  switch (ty.kind) {
    case TyKind::Bool: return kBoolSort;
    case TyKind::Mapping: return kArraySort;
    default: return kIntSort;
  }
}

SymState Encoder::frame_names(const std::string &prefix) const
{
  SymState f;
  for (const auto &v : c_.state_vars) f.vars[v.name] = prefix + "." + v.name;
  f.balance = prefix + "$bal";
  f.accounts = prefix + "$acc";
  f.block = prefix + "$block";
  return f;
}

TxVars Encoder::tx_names(const std::string &prefix, bool ctor) const
{
  std::size_t ni = ctor ? ctor_int_slots_ : int_slots_;
  std::size_t nb = ctor ? ctor_bool_slots_ : bool_slots_;
  TxVars t;
  t.selector = prefix + "$sel";
  t.sender = prefix + "$sender";
  t.value = prefix + "$value";
  t.block = prefix + "$block";
  for (std::size_t i = 0; i < ni; ++i)
    t.int_args.push_back(prefix + "$i" + std::to_string(i));
  for (std::size_t i = 0; i < nb; ++i)
    t.bool_args.push_back(prefix + "$b" + std::to_string(i));
  return t;
}

void Encoder::declare_frame(ScriptBuilder &s, const SymState &f) const
{
  for (const auto &v : c_.state_vars) s.declare(f.vars.at(v.name), sort_of(v.ty));
  s.declare(f.balance, kIntSort);
  s.declare(f.accounts, kArraySort);
  s.declare(f.block, kIntSort);
}

std::vector<std::pair<std::string, std::string>> Encoder::tx_bindings(
    const TxVars &t, bool with_sender) const
{
  std::vector<std::pair<std::string, std::string>> out{
      {t.selector, kIntSort}, {t.value, kIntSort}, {t.block, kIntSort}};
  if (with_sender) out.emplace_back(t.sender, kIntSort);
  for (const auto &a : t.int_args) out.emplace_back(a, kIntSort);
  for (const auto &a : t.bool_args) out.emplace_back(a, kBoolSort);
  return out;
}

void Encoder::declare_tx(ScriptBuilder &s, const TxVars &t) const
{
  for (const auto &[n, sort] : tx_bindings(t, true)) s.declare(n, sort);
}

std::string Encoder::tr(const ExprPtr &ep, const ExprCtx &ctx,
                        const std::string &path,
                        std::vector<std::string> *zero_divs, Binder &b)
{
  const Expr &e = *ep;
  auto sub = [&](std::size_t i) { return tr(e.args[i], ctx, path, zero_divs, b); };
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::AddressLit: return lit(e.value);
    case ExprKind::BoolLit: return lit(e.bool_value);
    case ExprKind::StateVar: return ctx.cur->vars.at(e.name);
    case ExprKind::Param: {
      if (!ctx.method || !ctx.tx) throw SolventError("parameter outside a method");
      for (std::size_t i = 0; i < ctx.method->params.size(); ++i) {
        if (ctx.method->params[i].name != e.name) continue;
        auto [is_bool, slot] = slot_of(*ctx.method, i);
        return is_bool ? ctx.tx->bool_args[slot] : ctx.tx->int_args[slot];
      }
      throw SolventError("unknown parameter " + e.name);
    }
    case ExprKind::QVar: {
      if (!ctx.qvars) throw SolventError("binder outside a property");
      return ctx.qvars->at(e.name);
    }
    case ExprKind::MapGet: return select(ctx.cur->vars.at(e.name), sub(0));
    case ExprKind::MsgSender:
      if (!ctx.tx) throw SolventError("msg.sender outside a method");
      return ctx.tx->sender;
    case ExprKind::MsgValue:
      if (!ctx.tx) throw SolventError("msg.value outside a method");
      return ctx.tx->value;
    case ExprKind::BlockNumber: return ctx.cur->block;
    case ExprKind::ContractBalance: return ctx.cur->balance;
    case ExprKind::AccountBalance: return select(ctx.cur->accounts, sub(0));
    case ExprKind::Post: {
      if (!ctx.post) throw SolventError("<tx> outside a property consequent");
      ExprCtx inner = ctx;
      inner.cur = ctx.post;
      return tr(e.args[0], inner, path, zero_divs, b);
    }
    case ExprKind::Neg: return app("-", {sub(0)});
    case ExprKind::Not: return app("not", {sub(0)});
    case ExprKind::And: {
      std::string a = sub(0);
      std::string c = tr(e.args[1], ctx, conj({path, a}), zero_divs, b);
      return app("and", {a, c});
    }
    case ExprKind::Or: {
      std::string a = sub(0);
      std::string c = tr(e.args[1], ctx, conj({path, app("not", {a})}), zero_divs, b);
      return app("or", {a, c});
    }
    case ExprKind::Div: {
      std::string num = b.bind(kIntSort, sub(0));
      if (is_positive_literal(e.args[1])) {
        std::string d = lit(e.args[1]->value);
        return ite(app(">=", {num, "0"}), app("div", {num, d}),
                   app("-", {app("div", {app("-", {num}), d})}));
      }
      std::string den = b.bind(kIntSort, sub(1));
      if (zero_divs) zero_divs->push_back(conj({path, app("=", {den, "0"})}));
      // truncation toward zero: |q| = |num| div |den|, sign from operands
      std::string q = b.bind(kIntSort, app("div", {app("abs", {num}), app("abs", {den})}));
      return ite(app("=", {app(">=", {num, "0"}), app(">", {den, "0"})}), q,
                 app("-", {q}));
    }
    default: break;
  }
  std::string a = sub(0);
  std::string c = sub(1);
  switch (e.kind) {
    case ExprKind::Add: return app("+", {a, c});
    case ExprKind::Sub: return app("-", {a, c});
    case ExprKind::Mul: return app("*", {a, c});
    case ExprKind::Eq: return app("=", {a, c});
    case ExprKind::Ne: return app("not", {app("=", {a, c})});
    case ExprKind::Lt: return app("<", {a, c});
    case ExprKind::Le: return app("<=", {a, c});
    case ExprKind::Gt: return app(">", {a, c});
    case ExprKind::Ge: return app(">=", {a, c});
    default: break;
  }
  throw SolventError("cannot translate expression");
}

std::string Encoder::translate(const ExprPtr &e, const SymState &cur,
                               const SymState *post, const TxVars *tx,
                               const Method *method,
                               const std::map<std::string, std::string> *qvars,
                               Binder &b)
{
  ExprCtx ctx{&cur, post, tx, method, qvars};
  return tr(e, ctx, "true", nullptr, b);
}

void Encoder::encode_block(const Block &body, SymState &st, std::string &revert,
                           const ExprCtx &base, Binder &b)
{
  for (const auto &s : body) {
    ExprCtx ctx = base;
    ctx.cur = &st;
    std::vector<std::string> zdivs;
    switch (s.kind) {
      case StmtKind::Require: {
        std::string c = tr(s.cond, ctx, "true", &zdivs, b);
        zdivs.insert(zdivs.begin(), revert);
        zdivs.push_back(app("not", {c}));
        revert = b.bind(kBoolSort, disj(zdivs));
        break;
      }
      case StmtKind::Assign: {
        const VarDecl *v = c_.find_var(s.target.name);
        if (!v) throw SolventError("unknown state variable " + s.target.name);
        std::string val = tr(s.value, ctx, "true", &zdivs, b);
        bool is_uint = v->ty.kind == TyKind::UInt
                       || (v->ty.kind == TyKind::Mapping
                           && v->ty.map_value == TyKind::UInt);
        if (v->ty.kind == TyKind::Mapping) {
          std::string key = tr(s.target.key, ctx, "true", &zdivs, b);
          val = b.bind(kIntSort, val);
          if (is_uint) zdivs.push_back(app("<", {val, "0"}));
          std::string arr = b.bind(kArraySort, store(st.vars.at(v->name), key, val));
          zdivs.insert(zdivs.begin(), revert);
          revert = b.bind(kBoolSort, disj(zdivs));
          st.vars[v->name] = arr;
        } else {
          val = b.bind(sort_of(v->ty), val);
          if (is_uint) zdivs.push_back(app("<", {val, "0"}));
          zdivs.insert(zdivs.begin(), revert);
          revert = b.bind(kBoolSort, disj(zdivs));
          st.vars[v->name] = val;
        }
        break;
      }
      case StmtKind::Transfer: {
        std::string to = b.bind(kIntSort, tr(s.recipient, ctx, "true", &zdivs, b));
        std::string amt = b.bind(kIntSort, tr(s.value, ctx, "true", &zdivs, b));
        zdivs.insert(zdivs.begin(), revert);
        zdivs.push_back(app("<", {amt, "0"}));
        zdivs.push_back(app(">", {amt, st.balance}));
        revert = b.bind(kBoolSort, disj(zdivs));
        st.balance = b.bind(kIntSort, app("-", {st.balance, amt}));
        st.accounts = b.bind(
            kArraySort,
            store(st.accounts, to, app("+", {select(st.accounts, to), amt})));
        break;
      }
      case StmtKind::If: {
        std::string c = b.bind(kBoolSort, tr(s.cond, ctx, "true", &zdivs, b));
        zdivs.insert(zdivs.begin(), revert);
        revert = b.bind(kBoolSort, disj(zdivs));
        SymState then_st = st, else_st = st;
        std::string then_r = revert, else_r = revert;
        encode_block(s.then_body, then_st, then_r, base, b);
        encode_block(s.else_body, else_st, else_r, base, b);
        revert = b.bind(kBoolSort, ite(c, then_r, else_r));
        for (const auto &v : c_.state_vars) {
          const std::string &t = then_st.vars.at(v.name);
          const std::string &e = else_st.vars.at(v.name);
          st.vars[v.name] = t == e ? t : b.bind(sort_of(v.ty), ite(c, t, e));
        }
        st.balance = b.bind(kIntSort, ite(c, then_st.balance, else_st.balance));
        st.accounts =
            b.bind(kArraySort, ite(c, then_st.accounts, else_st.accounts));
        break;
      }
    }
  }
}

SymState Encoder::credit(const SymState &pre, const TxVars &tx, Binder &b) const
{
  SymState st = pre;
  st.accounts = b.bind(
      kArraySort,
      store(pre.accounts, tx.sender,
            app("-", {select(pre.accounts, tx.sender), tx.value})));
  st.balance = b.bind(kIntSort, app("+", {pre.balance, tx.value}));
  st.block = tx.block;
  return st;
}

SymState Encoder::method_post(const Method &m, const SymState &pre,
                              const TxVars &tx, Binder &b, std::string *revert,
                              const SymState *credited)
{
  SymState st = credited ? *credited : credit(pre, tx, b);
  std::string r = m.payable ? "false" : app(">", {tx.value, "0"});
  ExprCtx ctx;
  ctx.tx = &tx;
  ctx.method = &m;
  encode_block(m.body, st, r, ctx, b);
  r = b.bind(kBoolSort, r);
  if (revert) *revert = r;

  SymState out;
  for (const auto &v : c_.state_vars)
    out.vars[v.name] = ite(r, pre.vars.at(v.name), st.vars.at(v.name));
  out.balance = ite(r, pre.balance, st.balance);
  out.accounts = ite(r, pre.accounts, st.accounts);
  out.block = tx.block;
  return out;
}

SymState Encoder::transition_post(const SymState &pre, const TxVars &tx,
                                  bool allow_skip, Binder &b,
                                  std::string *revert)
{
  SymState sd = credit(pre, tx, b);
  std::vector<SymState> cases;
  std::vector<std::string> reverts(c_.methods.size());
  for (std::size_t i = 0; i < c_.methods.size(); ++i)
    cases.push_back(method_post(c_.methods[i], pre, tx, b, &reverts[i], &sd));
  SymState skip = pre;
  skip.block = tx.block;

  auto tag = [&](int i) { return app("=", {tx.selector, std::to_string(i)}); };
  if (revert) {
    std::string r = "false";
    for (int i = static_cast<int>(cases.size()) - 1; i >= 0; --i)
      r = ite(tag(i), reverts[i], r);
    *revert = b.bind(kBoolSort, r);
  }
  auto combine = [&](auto field, const std::string &sort) {
    std::string term = allow_skip ? field(skip) : field(sd);
    if (allow_skip) term = ite(tag(selfdestruct_tag()), field(sd), term);
    for (int i = static_cast<int>(cases.size()) - 1; i >= 0; --i)
      term = ite(tag(i), field(cases[i]), term);
    return b.bind(sort, term);
  };

  SymState out;
  for (const auto &v : c_.state_vars) {
    out.vars[v.name] = combine(
        [&](const SymState &s) -> const std::string & { return s.vars.at(v.name); },
        sort_of(v.ty));
  }
  out.balance = combine(
      [](const SymState &s) -> const std::string & { return s.balance; }, kIntSort);
  out.accounts = combine(
      [](const SymState &s) -> const std::string & { return s.accounts; },
      kArraySort);
  out.block = tx.block;
  return out;
}

namespace {

std::string typed_params(const Encoder &enc, const Method &m, const TxVars &tx)
{
  std::vector<std::string> cs;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    auto kind = m.params[i].ty.kind;
    if (kind != TyKind::UInt && kind != TyKind::Address) continue;
    cs.push_back(app(">=", {tx.int_args[enc.slot_of(m, i).second], "0"}));
  }
  return conj(cs);
}

}  // namespace

std::string Encoder::env_constraint(const SymState &pre, const TxVars &tx,
                                    bool allow_skip) const
{
  int max_tag = allow_skip ? skip_tag() : selfdestruct_tag();
  std::vector<std::string> cs{
      app(">=", {tx.value, "0"}),
      app(">=", {tx.sender, "0"}),
      app(">=", {select(pre.accounts, tx.sender), tx.value}),
      app(">=", {tx.block, pre.block}),
      app(">=", {tx.selector, "0"}),
      app("<=", {tx.selector, std::to_string(max_tag)}),
  };
  for (std::size_t i = 0; i < c_.methods.size(); ++i) {
    std::string t = typed_params(*this, c_.methods[i], tx);
    if (t != "true")
      cs.push_back(app("=>", {app("=", {tx.selector, std::to_string(i)}), t}));
  }
  return conj(cs);
}

std::string Encoder::frame_equal(const SymState &a, const SymState &b) const
{
  std::vector<std::string> cs;
  for (const auto &v : c_.state_vars)
    cs.push_back(app("=", {a.vars.at(v.name), b.vars.at(v.name)}));
  cs.push_back(app("=", {a.balance, b.balance}));
  cs.push_back(app("=", {a.accounts, b.accounts}));
  cs.push_back(app("=", {a.block, b.block}));
  return conj(cs);
}

std::string Encoder::encode_method(const Method &m, const SymState &pre,
                                   const TxVars &tx, const SymState &post)
{
  Binder b(Binder::Mode::Let, "m" + std::to_string(counter_) + "_", &counter_);
  SymState s = method_post(m, pre, tx, b, nullptr);
  return b.wrap(frame_equal(post, s));
}

std::string Encoder::encode_transition(const SymState &pre, const TxVars &tx,
                                       const SymState &post, bool allow_skip)
{
  Binder b(Binder::Mode::Let, "x", &counter_);
  SymState s = transition_post(pre, tx, allow_skip, b);
  return b.wrap(conj({env_constraint(pre, tx, allow_skip), frame_equal(post, s)}));
}

namespace {

SymState genesis_terms(const Contract &c, const std::string &accounts,
                       const std::string &block)
{
  SymState g;
  for (const auto &v : c.state_vars) {
    switch (v.ty.kind) {
      case TyKind::Bool: g.vars[v.name] = "false"; break;
      case TyKind::Mapping: g.vars[v.name] = const_array(0); break;
      default: g.vars[v.name] = "0"; break;
    }
  }
  g.balance = "0";
  g.accounts = accounts;
  g.block = block;
  return g;
}

std::string ctor_env(const Encoder &enc, const Contract &c, const TxVars &tx,
                     const std::string &accounts)
{
  return conj({app(">=", {tx.value, "0"}), app(">=", {tx.sender, "0"}),
               app(">=", {select(accounts, tx.sender), tx.value}),
               app(">=", {tx.block, "0"}), typed_params(enc, c.ctor, tx)});
}

}  // namespace

std::string Encoder::encode_init(const SymState &frame0, const TxVars &ctor,
                                 const std::string &genesis_accounts)
{
  Binder b(Binder::Mode::Let, "x", &counter_);
  SymState g = genesis_terms(c_, genesis_accounts, ctor.block);
  std::string revert;
  SymState s = method_post(c_.ctor, g, ctor, b, &revert);
  return b.wrap(conj({ctor_env(*this, c_, ctor, genesis_accounts),
                      app("not", {revert}), frame_equal(frame0, s)}));
}

std::string Encoder::encode_negated_property(
    const Property &p, const SymState &reached,
    const std::map<std::string, std::string> &qvar_terms)
{
  Binder ab(Binder::Mode::Let, "x", &counter_);
  std::string ante =
      ab.wrap(translate(p.antecedent, reached, nullptr, nullptr, nullptr,
                        &qvar_terms, ab));

  Binder b(Binder::Mode::Let, "x", &counter_);
  std::vector<std::pair<std::string, std::string>> bound;
  std::vector<std::string> envs;
  SymState cur = reached;
  const std::string &actor = qvar_terms.at(p.actor);
  for (int j = 1; j <= p.bound_m; ++j) {
    TxVars u = tx_names("u" + std::to_string(j));
    auto binds = tx_bindings(u, false);
    bound.insert(bound.end(), binds.begin(), binds.end());
    u.sender = actor;
    envs.push_back(env_constraint(cur, u, true));
    cur = transition_post(cur, u, true, b);
  }
  std::string cons =
      translate(p.consequent, reached, &cur, nullptr, nullptr, &qvar_terms, b);
  std::string body = b.wrap(app("=>", {conj(envs), app("not", {cons})}));

  std::string vars;
  for (const auto &[n, s] : bound) vars += "(" + n + " " + s + ")";
  return conj({ante, "(forall (" + vars + ") " + body + ")"});
}

std::string Encoder::structural_invariants(const SymState &f) const
{
  std::vector<std::string> cs{app(">=", {f.balance, "0"}),
                              app(">=", {f.block, "0"})};
  std::vector<std::string> cells{app(">=", {select(f.accounts, "k!"), "0"})};
  for (const auto &v : c_.state_vars) {
    const std::string &n = f.vars.at(v.name);
    if (v.ty.kind == TyKind::UInt || v.ty.kind == TyKind::Address)
      cs.push_back(app(">=", {n, "0"}));
    if (v.ty.kind == TyKind::Mapping && v.ty.map_value == TyKind::UInt)
      cells.push_back(app(">=", {select(n, "k!"), "0"}));
  }
  cs.push_back("(forall ((k! Int)) " + conj(cells) + ")");
  return conj(cs);
}

Prefix Encoder::encode_prefix(ScriptBuilder &s, int k)
{
  if (k < 1) throw SolventError("BMC depth must be at least 1");
  Prefix pre;
  pre.genesis_accounts = "g$acc";
  s.declare(pre.genesis_accounts, kArraySort);
  s.assert_term("(forall ((k! Int)) (>= (select g$acc k!) 0))");
  for (int i = 0; i < k; ++i) {
    pre.frames.push_back(frame_names("f" + std::to_string(i)));
    pre.txs.push_back(tx_names("t" + std::to_string(i), i == 0));
    declare_frame(s, pre.frames.back());
    declare_tx(s, pre.txs.back());
  }

  {
    Binder b(Binder::Mode::TopLevel, "a", &counter_);
    SymState g = genesis_terms(c_, pre.genesis_accounts, pre.txs[0].block);
    std::string revert;
    SymState s0 = method_post(c_.ctor, g, pre.txs[0], b, &revert);
    s.absorb(b);
    s.assert_term(ctor_env(*this, c_, pre.txs[0], pre.genesis_accounts));
    s.assert_term(app("not", {revert}));
    s.assert_term(frame_equal(pre.frames[0], s0));
  }
  for (int i = 1; i < k; ++i) {
    Binder b(Binder::Mode::TopLevel, "a", &counter_);
    std::string revert;
    SymState si = transition_post(pre.frames[i - 1], pre.txs[i], false, b, &revert);
    s.absorb(b);
    s.assert_term(env_constraint(pre.frames[i - 1], pre.txs[i], false));
    s.assert_term(app("not", {revert}));
    s.assert_term(frame_equal(pre.frames[i], si));
  }
  return pre;
}

std::string smt_frame_value(const std::map<Int, Int> &m)
{
  std::string arr = const_array(0);
  for (const auto &[k, v] : m) arr = store(arr, lit(k), lit(v));
  return arr;
}

namespace {

void collect_address_literals(const Contract &c, const Property *p,
                              std::set<Int> &out)
{
  auto visit = [&](const Expr &e) {
    if (e.kind == ExprKind::AddressLit) out.insert(e.value);
  };
  walk_block(c.ctor.body, visit);
  for (const auto &m : c.methods) walk_block(m.body, visit);
  if (p) {
    walk(p->antecedent, visit);
    walk(p->consequent, visit);
  }
}

std::map<std::string, std::string> declare_qvars(ScriptBuilder &s,
                                                 const Property &p)
{
  std::map<std::string, std::string> q;
  for (const auto &v : p.qvars) {
    q[v] = "q$" + v;
    s.declare(q[v], kIntSort);
    s.assert_term(app(">=", {q[v], "0"}));
  }
  return q;
}

void add_frame_entries(const Contract &c, const SymState &f, int index,
                       std::vector<DecodeEntry> &out)
{
  for (const auto &v : c.state_vars) {
    if (v.ty.kind == TyKind::Mapping) continue;
    out.push_back({f.vars.at(v.name), DecodeField::FrameVar, index, -1, v.name, ""});
  }
  out.push_back({f.balance, DecodeField::FrameBalance, index, -1, "", ""});
  out.push_back({f.block, DecodeField::FrameBlock, index, -1, "", ""});
}

std::vector<std::string> terms_of(const std::vector<DecodeEntry> &entries)
{
  std::vector<std::string> t;
  for (const auto &e : entries) t.push_back(e.term);
  return t;
}

}  // namespace

EncodedQuery build_bmc_query(const Contract &c, const Property &p, int k)
{
  ScriptBuilder s;
  Encoder enc(c);
  Prefix pre = enc.encode_prefix(s, k);
  auto q = declare_qvars(s, p);
  s.assert_term(enc.encode_negated_property(p, pre.frames.back(), q));

  EncodedQuery out;
  out.kind = QueryKind::Bmc;
  out.property = p.name;
  out.depth = k;
  out.logic = select_logic(c, &p);

  auto &dm = out.decode_map;
  std::vector<std::string> addr_refs;
  for (int i = 0; i < k; ++i) {
    const TxVars &t = pre.txs[i];
    if (i == 0) {
      for (std::size_t j = 0; j < c.ctor.params.size(); ++j) {
        auto [is_bool, slot] = enc.slot_of(c.ctor, j);
        dm.push_back({is_bool ? t.bool_args[slot] : t.int_args[slot],
                      is_bool ? DecodeField::BoolArg : DecodeField::IntArg, i,
                      static_cast<int>(slot), "", ""});
        if (c.ctor.params[j].ty.kind == TyKind::Address)
          addr_refs.push_back(t.int_args[slot]);
      }
    } else {
      dm.push_back({t.selector, DecodeField::Selector, i, -1, "", ""});
      for (std::size_t j = 0; j < t.int_args.size(); ++j) {
        dm.push_back({t.int_args[j], DecodeField::IntArg, i, static_cast<int>(j), "", ""});
        addr_refs.push_back(t.int_args[j]);
      }
      for (std::size_t j = 0; j < t.bool_args.size(); ++j)
        dm.push_back({t.bool_args[j], DecodeField::BoolArg, i, static_cast<int>(j), "", ""});
    }
    dm.push_back({t.sender, DecodeField::Sender, i, -1, "", ""});
    dm.push_back({t.value, DecodeField::Value, i, -1, "", ""});
    dm.push_back({t.block, DecodeField::Block, i, -1, "", ""});
    addr_refs.push_back(t.sender);
  }
  for (int i = 0; i < k; ++i) {
    add_frame_entries(c, pre.frames[i], i, dm);
    for (const auto &v : c.state_vars)
      if (v.ty.kind == TyKind::Address) addr_refs.push_back(pre.frames[i].vars.at(v.name));
  }
  for (const auto &v : p.qvars) {
    dm.push_back({q.at(v), DecodeField::QVar, -1, -1, v, ""});
    addr_refs.push_back(q.at(v));
  }
  std::set<Int> lits;
  collect_address_literals(c, &p, lits);
  for (const auto &l : lits) addr_refs.push_back(smt::lit(l));

  std::set<std::string> seen;
  for (const auto &r : addr_refs) {
    if (!seen.insert(r).second) continue;
    dm.push_back({select(pre.genesis_accounts, r), DecodeField::GenesisAccount,
                  -1, -1, "", r});
  }
  out.script = s.finish(terms_of(dm));
  return out;
}

namespace {

std::string invariants_at(Encoder &enc, const std::vector<ExprPtr> &invs,
                          const SymState &f, ScriptBuilder &s, int *counter)
{
  Binder b(Binder::Mode::TopLevel, "inv", counter);
  std::vector<std::string> cs;
  for (const auto &e : invs)
    cs.push_back(enc.translate(e, f, nullptr, nullptr, nullptr, nullptr, b));
  s.absorb(b);
  return conj(cs);
}

}  // namespace

EncodedQuery build_abstract_query(const Contract &c, const Property &p,
                                  const std::vector<ExprPtr> &extra_invariants)
{
  ScriptBuilder s;
  Encoder enc(c);
  int counter = 0;
  SymState h = enc.frame_names("h");
  enc.declare_frame(s, h);
  s.assert_term(enc.structural_invariants(h));
  s.assert_term(invariants_at(enc, extra_invariants, h, s, &counter));
  auto q = declare_qvars(s, p);
  s.assert_term(enc.encode_negated_property(p, h, q));

  EncodedQuery out;
  out.kind = QueryKind::Abstract;
  out.property = p.name;
  out.logic = select_logic(c, &p);
  add_frame_entries(c, h, 0, out.decode_map);
  for (const auto &v : p.qvars)
    out.decode_map.push_back({q.at(v), DecodeField::QVar, -1, -1, v, ""});
  out.script = s.finish(terms_of(out.decode_map));
  return out;
}

EncodedQuery build_invariant_init_query(const Contract &c,
                                        const std::vector<ExprPtr> &invariants)
{
  ScriptBuilder s;
  Encoder enc(c);
  int counter = 0;
  Prefix pre = enc.encode_prefix(s, 1);
  s.assert_term(app("not", {invariants_at(enc, invariants, pre.frames[0], s, &counter)}));
  EncodedQuery out;
  out.kind = QueryKind::InductiveInit;
  out.logic = select_logic(c);
  out.depth = 1;
  out.script = s.finish({});
  return out;
}

EncodedQuery build_invariant_step_query(const Contract &c,
                                        const std::vector<ExprPtr> &invariants)
{
  ScriptBuilder s;
  Encoder enc(c);
  int counter = 0;
  SymState h = enc.frame_names("h");
  SymState n = enc.frame_names("n");
  TxVars t = enc.tx_names("t1");
  enc.declare_frame(s, h);
  enc.declare_frame(s, n);
  enc.declare_tx(s, t);
  s.assert_term(enc.structural_invariants(h));
  s.assert_term(invariants_at(enc, invariants, h, s, &counter));
  s.assert_term(enc.encode_transition(h, t, n, false));
  s.assert_term(app("not", {invariants_at(enc, invariants, n, s, &counter)}));
  EncodedQuery out;
  out.kind = QueryKind::InductiveStep;
  out.logic = select_logic(c);
  out.depth = 1;
  out.script = s.finish({});
  return out;
}

}  // namespace solvent

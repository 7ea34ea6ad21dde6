#include "gen.h"

#include "solvent/interp.h"

namespace solvent::testgen {

namespace {

enum class Want { Num, Bool, Addr };

int pick(Rng &rng, int n)
{
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

bool coin(Rng &rng, double p = 0.5)
{
  return std::bernoulli_distribution(p)(rng);
}

Ty random_scalar_ty(Rng &rng)
{
  switch (pick(rng, 4)) {
    case 0: return Ty::uint_ty();
    case 1: return Ty::int_ty();
    case 2: return Ty::bool_ty();
    default: return Ty::address_ty();
  }
}

bool fits(const Ty &t, Want w)
{
  switch (w) {
    case Want::Num: return t.is_numeric();
    case Want::Bool: return t.kind == TyKind::Bool;
    case Want::Addr: return t.kind == TyKind::Address;
  }
  return false;
}

/// Names visible to the expression generator.
struct Scope {
  const Contract *c = nullptr;
  const Method *m = nullptr;  // parameters in scope
  bool in_method = false;     // msg.sender and msg.value allowed
  std::vector<std::string> qvars;
  bool allow_post = false;
};

ExprPtr gen(const Scope &sc, Want w, int depth, Rng &rng);

ExprPtr leaf(const Scope &sc, Want w, Rng &rng)
{
  std::vector<ExprPtr> opts;
  for (const auto &v : sc.c->state_vars)
    if (v.ty.kind != TyKind::Mapping && fits(v.ty, w))
      opts.push_back(mk_var(ExprKind::StateVar, v.name));
  if (sc.m)
    for (const auto &p : sc.m->params)
      if (fits(p.ty, w)) opts.push_back(mk_var(ExprKind::Param, p.name));
  switch (w) {
    case Want::Num:
      opts.push_back(mk_int(pick(rng, 6)));
      opts.push_back(mk_leaf(ExprKind::ContractBalance));
      opts.push_back(mk_leaf(ExprKind::BlockNumber));
      if (sc.in_method) opts.push_back(mk_leaf(ExprKind::MsgValue));
      break;
    case Want::Bool: opts.push_back(mk_bool(coin(rng))); break;
    case Want::Addr:
      opts.push_back(mk_address(pick(rng, 4)));
      if (sc.in_method) opts.push_back(mk_leaf(ExprKind::MsgSender));
      for (const auto &q : sc.qvars) opts.push_back(mk_var(ExprKind::QVar, q));
      break;
  }
  return opts[pick(rng, static_cast<int>(opts.size()))];
}

ExprPtr gen_num(const Scope &sc, int depth, Rng &rng)
{
  switch (pick(rng, 9)) {
    case 0: {
      std::vector<const VarDecl *> maps;
      for (const auto &v : sc.c->state_vars)
        if (v.ty.kind == TyKind::Mapping) maps.push_back(&v);
      if (maps.empty()) break;
      const VarDecl *v = maps[pick(rng, static_cast<int>(maps.size()))];
      return mk_map_get(v->name, gen(sc, Want::Addr, depth - 1, rng));
    }
    case 1: return mk_unary(ExprKind::AccountBalance, gen(sc, Want::Addr, depth - 1, rng));
    case 2: return mk_unary(ExprKind::Neg, gen(sc, Want::Num, depth - 1, rng));
    case 3:
    case 4:
      return mk_binary(coin(rng) ? ExprKind::Add : ExprKind::Sub,
                       gen(sc, Want::Num, depth - 1, rng), gen(sc, Want::Num, depth - 1, rng));
    case 5:
      return mk_binary(ExprKind::Mul, gen(sc, Want::Num, depth - 1, rng),
                       gen(sc, Want::Num, depth - 1, rng));
    case 6:
      return mk_binary(ExprKind::Div, gen(sc, Want::Num, depth - 1, rng),
                       gen(sc, Want::Num, depth - 1, rng));
    case 7:
      if (!sc.allow_post) break;
      {
        Scope inner = sc;
        inner.allow_post = false;
        return mk_unary(ExprKind::Post, gen(inner, Want::Num, depth - 1, rng));
      }
    default: break;
  }
  return leaf(sc, Want::Num, rng);
}

ExprPtr gen_bool(const Scope &sc, int depth, Rng &rng)
{
  static const ExprKind cmps[] = {ExprKind::Eq, ExprKind::Ne, ExprKind::Lt,
                                  ExprKind::Le, ExprKind::Gt, ExprKind::Ge};
  switch (pick(rng, 7)) {
    case 0:
    case 1:
      return mk_binary(cmps[pick(rng, 6)], gen(sc, Want::Num, depth - 1, rng),
                       gen(sc, Want::Num, depth - 1, rng));
    case 2:
      return mk_binary(coin(rng) ? ExprKind::Eq : ExprKind::Ne,
                       gen(sc, Want::Addr, depth - 1, rng), gen(sc, Want::Addr, depth - 1, rng));
    case 3: return mk_unary(ExprKind::Not, gen(sc, Want::Bool, depth - 1, rng));
    case 4:
      return mk_binary(coin(rng) ? ExprKind::And : ExprKind::Or,
                       gen(sc, Want::Bool, depth - 1, rng), gen(sc, Want::Bool, depth - 1, rng));
    default: return leaf(sc, Want::Bool, rng);
  }
}

ExprPtr gen(const Scope &sc, Want w, int depth, Rng &rng)
{
  if (depth <= 0) return leaf(sc, w, rng);
  switch (w) {
    case Want::Num: return gen_num(sc, depth, rng);
    case Want::Bool: return gen_bool(sc, depth, rng);
    case Want::Addr: return leaf(sc, w, rng);
  }
  return leaf(sc, w, rng);
}

Want want_of(TyKind k)
{
  switch (k) {
    case TyKind::Bool: return Want::Bool;
    case TyKind::Address: return Want::Addr;
    default: return Want::Num;
  }
}

Stmt gen_assign(const Scope &sc, bool ctor, Rng &rng)
{
  std::vector<const VarDecl *> targets;
  for (const auto &v : sc.c->state_vars)
    if (ctor || !v.immutable) targets.push_back(&v);
  Stmt s;
  if (targets.empty()) {
    s.kind = StmtKind::Require;
    s.cond = gen(sc, Want::Bool, 2, rng);
    return s;
  }
  const VarDecl *v = targets[pick(rng, static_cast<int>(targets.size()))];
  s.kind = StmtKind::Assign;
  s.target.name = v->name;
  if (v->ty.kind == TyKind::Mapping) {
    s.target.key = gen(sc, Want::Addr, 1, rng);
    s.value = gen(sc, Want::Num, 2, rng);
  } else {
    s.value = gen(sc, want_of(v->ty.kind), 2, rng);
  }
  return s;
}

Block gen_block(const Scope &sc, bool ctor, int len, int nest, Rng &rng)
{
  Block b;
  for (int i = 0; i < len; ++i) {
    Stmt s;
    switch (pick(rng, nest > 0 ? 6 : 5)) {
      case 0:
        s.kind = StmtKind::Require;
        s.cond = gen(sc, Want::Bool, 2, rng);
        break;
      case 1:
        s.kind = StmtKind::Transfer;
        s.recipient = gen(sc, Want::Addr, 1, rng);
        s.value = gen(sc, Want::Num, 2, rng);
        break;
      case 5:
        s.kind = StmtKind::If;
        s.cond = gen(sc, Want::Bool, 2, rng);
        s.then_body = gen_block(sc, ctor, 1 + pick(rng, 2), nest - 1, rng);
        if (coin(rng)) s.else_body = gen_block(sc, ctor, 1 + pick(rng, 2), nest - 1, rng);
        break;
      default: s = gen_assign(sc, ctor, rng); break;
    }
    b.push_back(std::move(s));
  }
  return b;
}

std::vector<Param> gen_params(Rng &rng, int max)
{
  std::vector<Param> ps;
  int n = pick(rng, max + 1);
  for (int i = 0; i < n; ++i) ps.push_back({"p" + std::to_string(i), random_scalar_ty(rng), {}});
  return ps;
}

}  // namespace

Contract random_contract(Rng &rng)
{
  Contract c;
  c.name = "Gen";
  int nvars = 1 + pick(rng, 4);
  for (int i = 0; i < nvars; ++i) {
    VarDecl v;
    v.name = "v" + std::to_string(i);
    if (coin(rng, 0.3)) {
      v.ty = Ty::mapping_ty(coin(rng) ? TyKind::UInt : TyKind::Int);
    } else {
      v.ty = random_scalar_ty(rng);
      v.immutable = coin(rng, 0.25);
    }
    c.state_vars.push_back(v);
  }

  c.ctor.params = gen_params(rng, 2);
  c.ctor.payable = coin(rng, 0.3);
  {
    Scope sc{&c, &c.ctor, true, {}, false};
    c.ctor.body = gen_block(sc, true, pick(rng, 3), 0, rng);
  }

  int nmethods = 1 + pick(rng, 3);
  for (int i = 0; i < nmethods; ++i) {
    Method m;
    m.name = "f" + std::to_string(i);
    m.params = gen_params(rng, 2);
    m.payable = coin(rng);
    c.methods.push_back(m);
  }
  for (auto &m : c.methods) {
    Scope sc{&c, &m, true, {}, false};
    m.body = gen_block(sc, false, 1 + pick(rng, 3), 1, rng);
  }
  return c;
}

Property random_property(const Contract &c, Rng &rng, const std::string &name)
{
  Property p;
  p.name = name;
  p.qvars = {"xa"};
  if (coin(rng, 0.3)) p.qvars.push_back("xb");
  p.actor = p.qvars[pick(rng, static_cast<int>(p.qvars.size()))];
  p.bound_m = 1 + pick(rng, 2);
  Scope sc{&c, nullptr, false, p.qvars, false};
  p.antecedent = gen(sc, Want::Bool, 2, rng);
  sc.allow_post = true;
  // the consequent always mentions the post-state
  ExprPtr post = mk_unary(ExprKind::Post, gen(Scope{&c, nullptr, false, p.qvars, false},
                                              Want::Num, 2, rng));
  p.consequent = mk_binary(ExprKind::Ge, post, gen(sc, Want::Num, 2, rng));
  if (coin(rng)) p.consequent = mk_binary(ExprKind::And, p.consequent, gen(sc, Want::Bool, 2, rng));
  return p;
}

SourceUnit random_unit(Rng &rng)
{
  SourceUnit u;
  u.contract = random_contract(rng);
  int nprops = pick(rng, 3);
  for (int i = 0; i < nprops; ++i)
    u.properties.push_back(random_property(u.contract, rng, "prop" + std::to_string(i)));
  if (coin(rng, 0.3)) {
    Invariant inv;
    Scope sc{&u.contract, nullptr, false, {}, false};
    int n = 1 + pick(rng, 2);
    for (int i = 0; i < n; ++i) inv.conjuncts.push_back(gen(sc, Want::Bool, 2, rng));
    u.invariants.push_back(inv);
  }
  return u;
}

std::vector<Value> random_args(const Method &m, Rng &rng)
{
  std::vector<Value> args;
  for (const auto &p : m.params) {
    switch (p.ty.kind) {
      case TyKind::Bool: args.emplace_back(coin(rng)); break;
      case TyKind::Address: args.emplace_back(Address{pick(rng, 4)}); break;
      case TyKind::Int: args.emplace_back(Int(pick(rng, 9) - 4)); break;
      default: args.emplace_back(Int(pick(rng, 5))); break;
    }
  }
  return args;
}

std::map<Int, Int> random_accounts(Rng &rng)
{
  std::map<Int, Int> acc;
  for (int a = 0; a < 4; ++a) {
    int v = pick(rng, 8);
    if (v) acc[a] = v;
  }
  return acc;
}

bool random_trace(const Contract &c, const std::map<Int, Int> &accounts,
                  std::size_t steps, Rng &rng, std::vector<Transaction> &out)
{
  ConcreteState s = genesis_state(c, accounts, 0);
  out.clear();
  for (int attempt = 0; attempt < 20 && out.empty(); ++attempt) {
    Transaction t;
    t.kind = TxKind::Constructor;
    t.args = random_args(c.ctor, rng);
    t.sender = pick(rng, 4);
    t.value = c.ctor.payable ? Int(pick(rng, 3)) : Int(0);
    if (s.account(t.sender) < t.value) t.value = 0;
    t.block = pick(rng, 3);
    StepOutcome o = apply_tx(c, s, t);
    if (o.reverted) continue;
    s = o.next;
    out.push_back(t);
  }
  if (out.empty()) return false;

  while (out.size() < steps + 1) {
    Transaction t;
    t.sender = pick(rng, 4);
    t.block = s.block_number + (coin(rng, 0.7) ? pick(rng, 3) : 1000);
    Int funds = s.account(t.sender);
    Int v = pick(rng, 4);
    t.value = v <= funds ? v : funds;
    if (coin(rng, 0.15)) {
      t.kind = TxKind::Selfdestruct;
    } else {
      const Method &m = c.methods[pick(rng, static_cast<int>(c.methods.size()))];
      t.kind = TxKind::Call;
      t.method = m.name;
      t.args = random_args(m, rng);
      if (!m.payable && coin(rng, 0.8)) t.value = 0;
    }
    s = apply_tx(c, s, t).next;
    out.push_back(t);
  }
  return true;
}


namespace {

std::string nonnegative_violation(const Contract &c, const ConcreteState &s)
{
  if (s.contract_balance < 0) return "negative contract balance";
  for (const auto &[a, v] : s.accounts)
    if (v < 0) return "negative balance of address(" + a.str() + ")";
  for (const auto &v : c.state_vars) {
    if (v.ty.kind == TyKind::UInt && std::get<Int>(s.scalars.at(v.name)) < 0)
      return "negative uint " + v.name;
    if (v.ty.kind == TyKind::Mapping && v.ty.map_value == TyKind::UInt) {
      auto it = s.mappings.find(v.name);
      if (it == s.mappings.end()) continue;
      for (const auto &[k, x] : it->second)
        if (x < 0) return "negative entry " + v.name + "[" + k.str() + "]";
    }
  }
  return "";
}

}  // namespace

InvariantStats check_interp_invariants(std::size_t transactions, std::uint64_t seed)
{
  Rng rng(seed);
  InvariantStats st;
  auto fail = [&st](const std::string &msg) {
    ++st.failures;
    if (st.messages.size() < 5) st.messages.push_back(msg);
  };
  while (st.transactions < transactions) {
    Contract c = random_contract(rng);
    for (int run = 0; run < 10 && st.transactions < transactions; ++run) {
      auto accounts = random_accounts(rng);
      std::vector<Transaction> tr;
      if (!random_trace(c, accounts, 30, rng, tr)) break;
      ConcreteState s = genesis_state(c, accounts, tr[0].block);
      for (std::size_t i = 0; i < tr.size(); ++i) {
        const Transaction &t = tr[i];
        StepOutcome o = apply_tx(c, s, t);
        ++st.transactions;
        std::string where = "step " + std::to_string(i) + " " + format_tx(i, t) + ": ";
        if (o.next.total_funds() != s.total_funds()) fail(where + "total funds changed");
        if (o.next.block_number < s.block_number) fail(where + "block went back");
        if (o.next.block_number != t.block) fail(where + "block not advanced to the tx block");
        if (o.reverted) {
          ++st.reverts;
          ConcreteState expect = s;
          expect.block_number = t.block;
          if (!(o.next == expect)) fail(where + "revert modified the state");
        }
        std::string neg = nonnegative_violation(c, o.next);
        if (!neg.empty()) fail(where + neg);
        s = std::move(o.next);
      }
    }
  }
  return st;
}

}  // namespace solvent::testgen

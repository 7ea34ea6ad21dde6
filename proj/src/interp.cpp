#include "solvent/interp.h"

#include <algorithm>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace solvent {

std::string to_string(const Value &v)
{
  if (auto i = std::get_if<Int>(&v)) return i->str();
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<Address>(v).v.str();
}

Int ConcreteState::account(const Int &a) const
{
  auto it = accounts.find(a);
  return it == accounts.end() ? Int(0) : it->second;
}

void ConcreteState::set_account(const Int &a, const Int &v)
{
  if (v == 0)
    accounts.erase(a);
  else
    accounts[a] = v;
}

Int ConcreteState::map_get(const std::string &m, const Int &key) const
{
  auto it = mappings.find(m);
  if (it == mappings.end()) return 0;
  auto jt = it->second.find(key);
  return jt == it->second.end() ? Int(0) : jt->second;
}

void ConcreteState::map_set(const std::string &m, const Int &key, const Int &v)
{
  auto &mp = mappings[m];
  if (v == 0)
    mp.erase(key);
  else
    mp[key] = v;
}

Int ConcreteState::total_funds() const
{
  Int t = contract_balance;
  for (const auto &[a, v] : accounts) t += v;
  return t;
}

ConcreteState genesis_state(const Contract &c, std::map<Int, Int> accounts,
                            Int block)
{
  ConcreteState s;
  for (const auto &v : c.state_vars) {
    switch (v.ty.kind) {
      case TyKind::Int:
      case TyKind::UInt: s.scalars[v.name] = Int(0); break;
      case TyKind::Bool: s.scalars[v.name] = false; break;
      case TyKind::Address: s.scalars[v.name] = Address{0}; break;
      case TyKind::Mapping: s.mappings[v.name]; break;
    }
  }
  for (auto &[a, v] : accounts) {
    if (a < 0 || v < 0) throw InterpError("negative address or balance in genesis");
    s.set_account(a, v);
  }
  s.block_number = std::move(block);
  return s;
}

std::string Transaction::display_name() const
{
  switch (kind) {
    case TxKind::Constructor: return "constructor";
    case TxKind::Selfdestruct: return "selfdestruct";
    case TxKind::Skip: return "skip";
    case TxKind::Call: return method;
  }
  return "?";
}

namespace {

struct Revert {};

struct EvalError : InterpError {
  using InterpError::InterpError;
};

const Int &as_int(const Value &v)
{
  if (auto i = std::get_if<Int>(&v)) return *i;
  throw InterpError("expected a number, found " + to_string(v));
}

bool as_bool(const Value &v)
{
  if (auto b = std::get_if<bool>(&v)) return *b;
  throw InterpError("expected a bool, found " + to_string(v));
}

const Int &as_address(const Value &v)
{
  if (auto a = std::get_if<Address>(&v)) return a->v;
  throw InterpError("expected an address, found " + to_string(v));
}

// Evaluation context shared by method bodies and properties.
struct Evaluator {
  const Contract &contract;
  const ConcreteState *cur;
  const ConcreteState *post = nullptr;  // properties only
  const std::map<std::string, Value> *params = nullptr;
  const QEnv *qenv = nullptr;
  const Transaction *tx = nullptr;
  bool in_method = false;
  bool in_post = false;

  const ConcreteState &state() const { return in_post ? *post : *cur; }

  Value eval(const ExprPtr &ep)
  {
    const Expr &e = *ep;
    switch (e.kind) {
      case ExprKind::IntLit: return e.value;
      case ExprKind::BoolLit: return e.bool_value;
      case ExprKind::AddressLit: return Address{e.value};
      case ExprKind::StateVar: {
        auto it = state().scalars.find(e.name);
        if (it == state().scalars.end())
          throw InterpError("unknown state variable " + e.name);
        return it->second;
      }
      case ExprKind::Param: {
        if (!params) throw InterpError("parameter outside a method");
        auto it = params->find(e.name);
        if (it == params->end()) throw InterpError("unknown parameter " + e.name);
        return it->second;
      }
      case ExprKind::QVar: {
        if (!qenv) throw InterpError("binder outside a property");
        auto it = qenv->find(e.name);
        if (it == qenv->end()) throw InterpError("unbound variable " + e.name);
        return Address{it->second};
      }
      case ExprKind::MapGet:
        return state().map_get(e.name, as_address(eval(e.args[0])));
      case ExprKind::MsgSender:
        if (!tx) throw InterpError("msg.sender outside a method");
        return Address{tx->sender};
      case ExprKind::MsgValue:
        if (!tx) throw InterpError("msg.value outside a method");
        return tx->value;
      case ExprKind::BlockNumber: return state().block_number;
      case ExprKind::ContractBalance: return state().contract_balance;
      case ExprKind::AccountBalance:
        return state().account(as_address(eval(e.args[0])));
      case ExprKind::Post: {
        if (!post) throw InterpError("<tx> outside a property consequent");
        bool saved = in_post;
        in_post = true;
        Value v = eval(e.args[0]);
        in_post = saved;
        return v;
      }
      case ExprKind::Neg: return Int(-as_int(eval(e.args[0])));
      case ExprKind::Not: return !as_bool(eval(e.args[0]));
      case ExprKind::And: {
        // both sides are total, so no short-circuit is needed for semantics,
        // but it avoids spurious division errors in guarded properties
        if (!as_bool(eval(e.args[0]))) return false;
        return as_bool(eval(e.args[1]));
      }
      case ExprKind::Or: {
        if (as_bool(eval(e.args[0]))) return true;
        return as_bool(eval(e.args[1]));
      }
      default: break;
    }
    Value a = eval(e.args[0]);
    Value b = eval(e.args[1]);
    switch (e.kind) {
      case ExprKind::Add: return Int(as_int(a) + as_int(b));
      case ExprKind::Sub: return Int(as_int(a) - as_int(b));
      case ExprKind::Mul: return Int(as_int(a) * as_int(b));
      case ExprKind::Div: {
        const Int &d = as_int(b);
        if (d == 0) {
          if (in_method) throw Revert{};
          throw EvalError("division by zero");
        }
        return Int(as_int(a) / d);  // cpp_int truncates toward zero
      }
      case ExprKind::Eq: return a == b;
      case ExprKind::Ne: return !(a == b);
      case ExprKind::Lt: return as_int(a) < as_int(b);
      case ExprKind::Le: return as_int(a) <= as_int(b);
      case ExprKind::Gt: return as_int(a) > as_int(b);
      case ExprKind::Ge: return as_int(a) >= as_int(b);
      default: break;
    }
    throw InterpError("cannot evaluate expression");
  }
};

void exec_block(const Contract &c, const Block &b, ConcreteState &st,
                Evaluator &ev);

void exec_stmt(const Contract &c, const Stmt &s, ConcreteState &st,
               Evaluator &ev)
{
  switch (s.kind) {
    case StmtKind::Require:
      if (!as_bool(ev.eval(s.cond))) throw Revert{};
      return;
    case StmtKind::If:
      if (as_bool(ev.eval(s.cond)))
        exec_block(c, s.then_body, st, ev);
      else
        exec_block(c, s.else_body, st, ev);
      return;
    case StmtKind::Transfer: {
      Int to = as_address(ev.eval(s.recipient));
      Int amount = as_int(ev.eval(s.value));
      if (amount < 0 || amount > st.contract_balance) throw Revert{};
      st.contract_balance -= amount;
      st.set_account(to, st.account(to) + amount);
      return;
    }
    case StmtKind::Assign: {
      const VarDecl *v = c.find_var(s.target.name);
      if (!v) throw InterpError("unknown state variable " + s.target.name);
      Value val = ev.eval(s.value);
      if (v->ty.kind == TyKind::Mapping) {
        Int key = as_address(ev.eval(s.target.key));
        const Int &n = as_int(val);
        if (v->ty.map_value == TyKind::UInt && n < 0) throw Revert{};
        st.map_set(v->name, key, n);
      } else {
        if (v->ty.kind == TyKind::UInt && as_int(val) < 0) throw Revert{};
        st.scalars[v->name] = val;
      }
      return;
    }
  }
}

void exec_block(const Contract &c, const Block &b, ConcreteState &st,
                Evaluator &ev)
{
  for (const auto &s : b) exec_stmt(c, s, st, ev);
}

void check_arg(const Param &p, const Value &v)
{
  bool ok = false;
  switch (p.ty.kind) {
    case TyKind::Int: ok = std::holds_alternative<Int>(v); break;
    case TyKind::UInt:
      ok = std::holds_alternative<Int>(v) && std::get<Int>(v) >= 0;
      break;
    case TyKind::Bool: ok = std::holds_alternative<bool>(v); break;
    case TyKind::Address:
      ok = std::holds_alternative<Address>(v) && std::get<Address>(v).v >= 0;
      break;
    case TyKind::Mapping: ok = false; break;
  }
  if (!ok)
    throw InterpError("argument " + to_string(v) + " does not fit parameter "
                      + p.name + " : " + to_string(p.ty));
}

}  // namespace

StepOutcome apply_tx(const Contract &c, const ConcreteState &s,
                     const Transaction &t)
{
  if (t.kind == TxKind::Constructor) {
    if (s.deployed) throw InterpError("contract already deployed");
  } else if (!s.deployed) {
    throw InterpError("contract not deployed");
  }
  if (t.block < s.block_number)
    throw InterpError("block " + t.block.str() + " precedes current block "
                      + s.block_number.str());
  if (t.sender < 0) throw InterpError("negative sender address");
  if (t.value < 0) throw InterpError("negative msg.value");

  StepOutcome out{s, false};
  out.next.block_number = t.block;

  if (t.kind == TxKind::Skip) {
    if (!t.args.empty() || t.value != 0)
      throw InterpError("skip carries no arguments or value");
    return out;
  }
  if (s.account(t.sender) < t.value)
    throw InterpError("sender address(" + t.sender.str()
                      + ") cannot cover msg.value " + t.value.str());

  const Method *m = nullptr;
  if (t.kind == TxKind::Constructor) {
    m = &c.ctor;
  } else if (t.kind == TxKind::Call) {
    m = c.find_method(t.method);
    if (!m) throw InterpError("unknown method " + t.method);
  } else if (!t.args.empty()) {
    throw InterpError("selfdestruct takes no arguments");
  }

  std::map<std::string, Value> params;
  if (m) {
    if (t.args.size() != m->params.size())
      throw InterpError("method " + t.display_name() + " expects "
                        + std::to_string(m->params.size()) + " arguments, got "
                        + std::to_string(t.args.size()));
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      check_arg(m->params[i], t.args[i]);
      params[m->params[i].name] = t.args[i];
    }
  }

  ConcreteState work = out.next;
  work.set_account(t.sender, work.account(t.sender) - t.value);
  work.contract_balance += t.value;
  if (!m) {
    out.next = std::move(work);  // selfdestruct: funds injected, no code
    return out;
  }

  try {
    if (!m->payable && t.value > 0) throw Revert{};
    Evaluator ev{c, &work};
    ev.params = &params;
    ev.tx = &t;
    ev.in_method = true;
    exec_block(c, m->body, work, ev);
  } catch (const Revert &) {
    out.reverted = true;
    return out;
  }
  if (t.kind == TxKind::Constructor) work.deployed = true;
  out.next = std::move(work);
  return out;
}

std::vector<StepOutcome> run_trace(const Contract &c,
                                   const std::vector<Transaction> &txs,
                                   const std::map<Int, Int> &initial_accounts)
{
  if (txs.empty() || txs[0].kind != TxKind::Constructor)
    throw TraceError(0, "trace must start with the constructor");
  std::vector<StepOutcome> out;
  ConcreteState s = genesis_state(c, initial_accounts, txs[0].block);
  for (std::size_t i = 0; i < txs.size(); ++i) {
    if (i > 0 && txs[i].kind == TxKind::Constructor)
      throw TraceError(i, "constructor may only be the first transaction");
    try {
      out.push_back(apply_tx(c, s, txs[i]));
    } catch (const TraceError &) {
      throw;
    } catch (const InterpError &e) {
      throw TraceError(i, e.what());
    }
    s = out.back().next;
  }
  return out;
}

Value eval_pre(const Contract &c, const ConcreteState &s, const ExprPtr &e,
               const QEnv &env)
{
  Evaluator ev{c, &s};
  ev.qenv = &env;
  return ev.eval(e);
}

Value eval_post(const Contract &c, const ConcreteState &pre,
                const ConcreteState &post, const ExprPtr &e, const QEnv &env)
{
  Evaluator ev{c, &pre};
  ev.post = &post;
  ev.qenv = &env;
  return ev.eval(e);
}

namespace {

std::vector<Int> parse_int_list(const std::string &s)
{
  std::vector<Int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      Int lo(item.substr(0, dash)), hi(item.substr(dash + 1));
      if (hi - lo > 10000) throw SolventError("domain range too large: " + item);
      for (Int v = lo; v <= hi; ++v) out.push_back(v);
    } else if (!item.empty()) {
      out.emplace_back(item);
    }
  }
  return out;
}

}  // namespace

FiniteDomains FiniteDomains::parse(const std::string &spec)
{
  FiniteDomains d;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string::npos)
      throw SolventError("bad oracle domain entry '" + part + "'");
    std::string key = part.substr(0, eq), val = part.substr(eq + 1);
    try {
      if (key == "values")
        d.values = parse_int_list(val);
      else if (key == "addresses")
        d.addresses = parse_int_list(val);
      else if (key == "blocks")
        d.block_offsets = parse_int_list(val);
      else if (key == "max")
        d.max_traces = std::stoull(val);
      else
        throw SolventError("unknown oracle domain key '" + key + "'");
    } catch (const std::runtime_error &e) {
      throw SolventError("bad oracle domain entry '" + part + "': " + e.what());
    } catch (const std::logic_error &) {
      throw SolventError("bad oracle domain entry '" + part + "'");
    }
  }
  return d;
}

namespace {

std::vector<std::vector<Value>> arg_tuples(const Method &m,
                                           const FiniteDomains &dom)
{
  std::vector<std::vector<Value>> out{{}};
  for (const auto &p : m.params) {
    std::vector<Value> choices;
    switch (p.ty.kind) {
      case TyKind::Bool: choices = {false, true}; break;
      case TyKind::Address:
        for (const auto &a : dom.addresses) choices.push_back(Address{a});
        break;
      case TyKind::UInt:
        for (const auto &v : dom.values)
          if (v >= 0) choices.push_back(v);
        break;
      default:
        for (const auto &v : dom.values) choices.push_back(v);
        break;
    }
    std::vector<std::vector<Value>> next;
    for (const auto &prefix : out)
      for (const auto &c : choices) {
        auto t = prefix;
        t.push_back(c);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

LiquidityWitness find_liquidating_suffix(const Contract &c,
                                         const ConcreteState &s,
                                         const Property &p, const QEnv &env,
                                         const FiniteDomains &dom)
{
  auto actor_it = env.find(p.actor);
  if (actor_it == env.end()) throw InterpError("actor " + p.actor + " unbound");
  const Int actor = actor_it->second;

  // candidate transactions, without the block which is chosen per step
  std::vector<Transaction> moves;
  std::set<Int> tx_values(dom.values.begin(), dom.values.end());
  for (const auto &m : c.methods) {
    for (auto &args : arg_tuples(m, dom)) {
      for (const auto &v : tx_values) {
        if (v < 0 || (!m.payable && v > 0)) continue;
        moves.push_back({TxKind::Call, m.name, args, actor, v, 0});
      }
    }
  }
  for (const auto &v : tx_values)
    if (v > 0) moves.push_back({TxKind::Selfdestruct, "", {}, actor, v, 0});
  moves.push_back({TxKind::Skip, "", {}, actor, 0, 0});

  std::vector<Int> offsets(dom.block_offsets.begin(), dom.block_offsets.end());
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

  std::size_t explored = 0;
  LiquidityWitness w;
  std::vector<Transaction> path;

  std::function<bool(const ConcreteState &, int)> dfs =
      [&](const ConcreteState &cur, int depth) -> bool {
    if (as_bool(eval_post(c, s, cur, p.consequent, env))) return true;
    if (depth == p.bound_m) return false;
    for (const auto &off : offsets) {
      if (off < 0) continue;
      for (const auto &mv : moves) {
        if (++explored > dom.max_traces)
          throw InterpError("oracle domain exceeds "
                            + std::to_string(dom.max_traces) + " traces");
        Transaction t = mv;
        t.block = cur.block_number + off;
        StepOutcome o;
        try {
          o = apply_tx(c, cur, t);
        } catch (const InterpError &) {
          continue;  // e.g. the actor cannot cover msg.value
        }
        path.push_back(t);
        if (dfs(o.next, depth + 1)) return true;
        path.pop_back();
      }
    }
    return false;
  };

  if (dfs(s, 0)) {
    w.found = true;
    w.suffix = path;
  }
  return w;
}

bool bruteforce_liquid(const Contract &c, const ConcreteState &s,
                       const Property &p, const QEnv &env,
                       const FiniteDomains &dom)
{
  return find_liquidating_suffix(c, s, p, env, dom).found;
}

std::string format_tx(std::size_t index, const Transaction &t)
{
  std::ostringstream os;
  std::ostringstream call;
  call << t.display_name() << '(';
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) call << ',';
    call << to_string(t.args[i]);
  }
  call << ')';
  std::string head = "[" + std::to_string(index) + "] " + call.str();
  os << head;
  if (head.size() < 24) os << std::string(24 - head.size(), ' ');
  os << "  msg.sender=address(" << t.sender << ")  msg.value=" << t.value
     << "  block=" << t.block;
  return os.str();
}

std::string format_trace(const std::vector<Transaction> &trace)
{
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += format_tx(i + 1, trace[i]) + "\n";
  return out;
}

Parsed<std::vector<Transaction>> parse_trace(const Contract &c,
                                             const std::string &text)
{
  static const std::regex line_re(
      R"(^\s*\[(\d+)\]\s+([A-Za-z_][A-Za-z0-9_]*)\(([^)]*)\)\s+msg\.sender=address\((\d+)\)\s+msg\.value=(\d+)\s+block=(\d+)\s*$)");
  Parsed<std::vector<Transaction>> out;
  std::vector<Transaction> txs;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string &msg) {
    out.diagnostics.push_back(
        {Severity::Error, {lineno, 1, static_cast<int>(line.size())}, msg,
         "bad-trace-line"});
  };
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) {
      bad("malformed trace line");
      continue;
    }
    Transaction t;
    std::string name = m[2];
    t.sender = Int(m[4].str());
    t.value = Int(m[5].str());
    t.block = Int(m[6].str());
    const Method *meth = nullptr;
    if (name == "constructor") {
      t.kind = TxKind::Constructor;
      meth = &c.ctor;
    } else if (name == "selfdestruct") {
      t.kind = TxKind::Selfdestruct;
    } else if (name == "skip") {
      t.kind = TxKind::Skip;
    } else {
      t.kind = TxKind::Call;
      t.method = name;
      meth = c.find_method(name);
      if (!meth) {
        bad("unknown method '" + name + "'");
        continue;
      }
    }
    std::vector<std::string> raw;
    std::stringstream as(m[3].str());
    std::string a;
    while (std::getline(as, a, ','))
      if (a.find_first_not_of(' ') != std::string::npos) raw.push_back(a);
    std::size_t arity = meth ? meth->params.size() : 0;
    if (raw.size() != arity) {
      bad("wrong number of arguments for '" + name + "'");
      continue;
    }
    try {
      for (std::size_t i = 0; i < raw.size(); ++i) {
        std::string v = raw[i];
        v.erase(0, v.find_first_not_of(' '));
        v.erase(v.find_last_not_of(' ') + 1);
        switch (meth->params[i].ty.kind) {
          case TyKind::Bool: t.args.emplace_back(v == "true"); break;
          case TyKind::Address: t.args.emplace_back(Address{Int(v)}); break;
          default: t.args.emplace_back(Int(v)); break;
        }
      }
    } catch (const std::exception &) {
      bad("malformed argument");
      continue;
    }
    txs.push_back(std::move(t));
  }
  if (out.diagnostics.empty()) out.value = std::move(txs);
  return out;
}

}  // namespace solvent

#include "differential.h"

#include <sstream>

#include "gen.h"
#include "solvent/encoder.h"
#include "solvent/printer.h"
#include "solvent/smt.h"

namespace solvent::testgen {

using smt::app;
using smt::lit;

namespace {

std::string value_term(const Value &v)
{
  if (const auto *i = std::get_if<Int>(&v)) return lit(*i);
  if (const auto *b = std::get_if<bool>(&v)) return lit(*b);
  return lit(std::get<Address>(v).v);
}

}  // namespace

std::string frame_term(const Contract &c, const ConcreteState &s, const std::string &name)
{
  const VarDecl *v = c.find_var(name);
  if (v->ty.kind == TyKind::Mapping) {
    auto it = s.mappings.find(name);
    return smt_frame_value(it == s.mappings.end() ? std::map<Int, Int>{} : it->second);
  }
  return value_term(s.scalars.at(name));
}

std::string frame_is(const Contract &c, const std::string &prefix, const ConcreteState &s)
{
  Encoder enc(c);
  SymState f = enc.frame_names(prefix);
  std::vector<std::string> cs;
  for (const auto &v : c.state_vars)
    cs.push_back(app("=", {f.vars.at(v.name), frame_term(c, s, v.name)}));
  cs.push_back(app("=", {f.balance, lit(s.contract_balance)}));
  cs.push_back(app("=", {f.accounts, smt_frame_value(s.accounts)}));
  cs.push_back(app("=", {f.block, lit(s.block_number)}));
  return smt::conj(cs);
}

std::string tx_is(const Contract &c, const std::string &prefix, const Transaction &t)
{
  Encoder enc(c);
  bool ctor = t.kind == TxKind::Constructor;
  TxVars x = enc.tx_names(prefix, ctor);
  std::vector<std::string> cs{app("=", {x.sender, lit(t.sender)}),
                              app("=", {x.value, lit(t.value)}),
                              app("=", {x.block, lit(t.block)})};
  const Method *m = nullptr;
  switch (t.kind) {
    case TxKind::Constructor: m = &c.ctor; break;
    case TxKind::Call:
      m = c.find_method(t.method);
      cs.push_back(app("=", {x.selector, std::to_string(c.method_index(t.method))}));
      break;
    case TxKind::Selfdestruct:
      cs.push_back(app("=", {x.selector, std::to_string(enc.selfdestruct_tag())}));
      break;
    case TxKind::Skip: cs.push_back(app("=", {x.selector, std::to_string(enc.skip_tag())})); break;
  }
  if (m) {
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      auto [is_bool, slot] = enc.slot_of(*m, i);
      const std::string &var = is_bool ? x.bool_args[slot] : x.int_args[slot];
      cs.push_back(app("=", {var, value_term(t.args[i])}));
    }
  }
  return smt::conj(cs);
}

namespace {

struct Case {
  std::vector<Transaction> trace;
  std::map<Int, Int> accounts;
  std::vector<ConcreteState> states;  // after each transaction
};

constexpr std::size_t kMaxSteps = 4;
constexpr std::size_t kTracesPerContract = 5;

/// One script per contract; each trace contributes a sat check (frames fixed
/// to the interpreter) and an unsat check (final frame differs).
std::string build_script(const Contract &c, const std::vector<Case> &cases)
{
  Encoder enc(c);
  ScriptBuilder s;
  s.declare("g$acc", smt::kArraySort);
  std::vector<SymState> frames;
  std::vector<TxVars> txs;
  for (std::size_t i = 0; i <= kMaxSteps; ++i) {
    frames.push_back(enc.frame_names("f" + std::to_string(i)));
    enc.declare_frame(s, frames.back());
    txs.push_back(enc.tx_names("t" + std::to_string(i), i == 0));
    enc.declare_tx(s, txs.back());
  }
  for (const auto &k : cases) {
    s.add("(push 1)");
    s.assert_term(app("=", {"g$acc", smt_frame_value(k.accounts)}));
    s.assert_term(enc.encode_init(frames[0], txs[0], "g$acc"));
    s.assert_term(tx_is(c, "t0", k.trace[0]));
    for (std::size_t i = 1; i < k.trace.size(); ++i) {
      s.assert_term(enc.encode_transition(frames[i - 1], txs[i], frames[i], false));
      s.assert_term(tx_is(c, "t" + std::to_string(i), k.trace[i]));
    }
    std::size_t last = k.trace.size() - 1;
    s.add("(push 1)");
    for (std::size_t i = 0; i <= last; ++i)
      s.assert_term(frame_is(c, "f" + std::to_string(i), k.states[i]));
    s.add("(check-sat)");
    s.add("(pop 1)");
    s.add("(push 1)");
    s.assert_term(app("not", {frame_is(c, "f" + std::to_string(last), k.states[last])}));
    s.add("(check-sat)");
    s.add("(pop 1)");
    s.add("(pop 1)");
  }
  return s.text();
}

}  // namespace

DiffStats run_differential(std::size_t pairs, std::uint64_t seed, const SolverConfig &cfg)
{
  Rng rng(seed);
  DiffStats st;
  auto fail = [&st](const std::string &msg) {
    ++st.failures;
    if (st.messages.size() < 5) st.messages.push_back(msg);
  };
  while (st.pairs < pairs) {
    Contract c = random_contract(rng);
    std::vector<Case> cases;
    for (std::size_t j = 0; j < kTracesPerContract && st.pairs + cases.size() < pairs; ++j) {
      Case k;
      k.accounts = random_accounts(rng);
      std::size_t steps = std::uniform_int_distribution<std::size_t>(0, kMaxSteps)(rng);
      if (!random_trace(c, k.accounts, steps, rng, k.trace)) continue;
      for (const auto &o : run_trace(c, k.trace, k.accounts)) k.states.push_back(o.next);
      cases.push_back(std::move(k));
    }
    if (cases.empty()) continue;
    std::string script = build_script(c, cases);
    ProcessResult r = run_solver_process(script, cfg);
    std::istringstream in(r.out);
    std::vector<std::string> answers;
    for (std::string line; std::getline(in, line);)
      if (line == "sat" || line == "unsat" || line == "unknown") answers.push_back(line);
    st.pairs += cases.size();
    for (std::size_t j = 0; j < cases.size(); ++j) {
      std::string sat = 2 * j < answers.size() ? answers[2 * j] : "missing";
      std::string unsat = 2 * j + 1 < answers.size() ? answers[2 * j + 1] : "missing";
      if (sat != "sat" || unsat != "unsat")
        fail("contract " + std::to_string(st.pairs) + " trace " + std::to_string(j) + ": got "
             + sat + "/" + unsat + (r.err.empty() ? "" : " stderr: " + r.err.substr(0, 200))
             + "\n" + pretty_print(c) + format_trace(cases[j].trace));
    }
  }
  return st;
}

}  // namespace solvent::testgen

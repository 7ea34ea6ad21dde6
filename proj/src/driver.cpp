#include "solvent/driver.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "solvent/diagnostics.h"

namespace solvent {

using json = nlohmann::json;

std::string Verdict::mark() const
{
  switch (kind) {
    case VerdictKind::Violated: return "✗(" + std::to_string(n) + ")";
    case VerdictKind::HoldsUnbounded: return "✓";
    case VerdictKind::HoldsBounded: return "✓(" + std::to_string(n) + ")";
    case VerdictKind::Unknown: return "?";
  }
  return "?";
}

std::string to_string(VerdictKind k)
{
  switch (k) {
    case VerdictKind::Violated: return "violated";
    case VerdictKind::HoldsUnbounded: return "holds-unbounded";
    case VerdictKind::HoldsBounded: return "holds-bounded";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(UnknownReason r)
{
  switch (r) {
    case UnknownReason::None: return "";
    case UnknownReason::Timeout: return "timeout";
    case UnknownReason::SolverUnknown: return "solver-unknown";
    case UnknownReason::Crash: return "crash";
    case UnknownReason::ParseError: return "parse-error";
  }
  return "?";
}

namespace {

template <typename E>
E enum_from(const std::string &s, std::initializer_list<E> all)
{
  for (E e : all)
    if (to_string(e) == s) return e;
  throw SolventError("unknown enum value '" + s + "'");
}

Int as_int(const Value &v)
{
  if (const auto *i = std::get_if<Int>(&v)) return *i;
  if (const auto *a = std::get_if<Address>(&v)) return a->v;
  return std::get<bool>(v) ? 1 : 0;
}

Value typed(const Ty &ty, const ModelValue &v)
{
  if (ty.kind == TyKind::Bool) {
    if (!std::holds_alternative<bool>(v)) throw SolventError("expected a Boolean model value");
    return std::get<bool>(v);
  }
  if (!std::holds_alternative<Int>(v)) throw SolventError("expected an integer model value");
  if (ty.kind == TyKind::Address) return Address{std::get<Int>(v)};
  return std::get<Int>(v);
}

Value scalar_of(const Contract &c, const ConcreteState &s, const std::string &name)
{
  auto it = s.scalars.find(name);
  if (it != s.scalars.end()) return it->second;
  const VarDecl *v = c.find_var(name);
  if (v && v->ty.kind == TyKind::Bool) return false;
  if (v && v->ty.kind == TyKind::Address) return Address{0};
  return Int(0);
}

}  // namespace

// --- decoding ------------------------------------------------------------

DecodedModel decode_model(const SolverAnswer &answer, const EncodedQuery &q,
                          const Contract &c)
{
  if (answer.status != SolverStatus::Sat) throw SolventError("decoding a non-sat answer");
  auto value = [&](const std::string &term) -> const ModelValue & {
    auto it = answer.model.find(term);
    if (it == answer.model.end()) throw SolventError("model lacks a value for " + term);
    return it->second;
  };
  auto int_value = [&](const std::string &term) {
    const ModelValue &v = value(term);
    if (!std::holds_alternative<Int>(v)) throw SolventError(term + " is not an integer");
    return std::get<Int>(v);
  };

  struct RawStep {
    std::optional<Int> selector;
    std::map<int, ModelValue> ints, bools;
    Int sender = 0, value = 0, block = 0;
  };
  int k = q.depth;
  std::vector<RawStep> steps(static_cast<std::size_t>(std::max(k, 0)));
  DecodedModel out;
  out.frames.resize(steps.size());

  for (const auto &e : q.decode_map) {
    bool per_step = e.field != DecodeField::QVar && e.field != DecodeField::GenesisAccount;
    if (per_step && (e.step < 0 || e.step >= k))
      throw SolventError("decode entry out of range: " + e.term);
    switch (e.field) {
      case DecodeField::Selector: steps[e.step].selector = int_value(e.term); break;
      case DecodeField::IntArg: steps[e.step].ints[e.slot] = value(e.term); break;
      case DecodeField::BoolArg: steps[e.step].bools[e.slot] = value(e.term); break;
      case DecodeField::Sender: steps[e.step].sender = int_value(e.term); break;
      case DecodeField::Value: steps[e.step].value = int_value(e.term); break;
      case DecodeField::Block: steps[e.step].block = int_value(e.term); break;
      case DecodeField::QVar: out.qvars[e.name] = int_value(e.term); break;
      case DecodeField::FrameVar: {
        const VarDecl *v = c.find_var(e.name);
        if (!v) throw SolventError("unknown state variable " + e.name);
        out.frames[e.step][e.name] = typed(v->ty, value(e.term));
        break;
      }
      case DecodeField::FrameBalance: out.frames[e.step]["$bal"] = int_value(e.term); break;
      case DecodeField::FrameBlock: out.frames[e.step]["$block"] = int_value(e.term); break;
      case DecodeField::GenesisAccount: {
        Int addr;
        if (answer.model.count(e.ref)) {
          addr = int_value(e.ref);
        } else {
          auto lit = parse_model_value(e.ref);
          if (!lit || !std::holds_alternative<Int>(*lit))
            throw SolventError("cannot resolve address " + e.ref);
          addr = std::get<Int>(*lit);
        }
        Int bal = int_value(e.term);
        if (bal != 0) out.genesis_accounts[addr] = bal;
        break;
      }
    }
  }

  Encoder enc(c);
  auto args_of = [&](const Method &m, const RawStep &s) {
    std::vector<Value> args;
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      auto [is_bool, slot] = enc.slot_of(m, i);
      const auto &pool = is_bool ? s.bools : s.ints;
      auto it = pool.find(static_cast<int>(slot));
      if (it == pool.end()) throw SolventError("model lacks argument " + std::to_string(i));
      args.push_back(typed(m.params[i].ty, it->second));
    }
    return args;
  };

  for (int i = 0; i < k; ++i) {
    const RawStep &s = steps[i];
    Transaction t;
    t.sender = s.sender;
    t.value = s.value;
    t.block = s.block;
    if (i == 0) {
      t.kind = TxKind::Constructor;
      t.args = args_of(c.ctor, s);
    } else {
      if (!s.selector) throw SolventError("model lacks the selector of step " + std::to_string(i));
      Int sel = *s.selector;
      if (sel >= 0 && sel < static_cast<int>(c.methods.size())) {
        const Method &m = c.methods[static_cast<std::size_t>(sel)];
        t.kind = TxKind::Call;
        t.method = m.name;
        t.args = args_of(m, s);
      } else if (sel == enc.selfdestruct_tag()) {
        t.kind = TxKind::Selfdestruct;
      } else {
        throw SolventError("selector " + sel.str() + " is not a prefix transaction");
      }
    }
    out.trace.push_back(std::move(t));
  }
  return out;
}

std::pair<std::vector<Transaction>, Int> decode_trace(const SolverAnswer &answer,
                                                      const EncodedQuery &q,
                                                      const Contract &c,
                                                      const Property &p)
{
  DecodedModel m = decode_model(answer, q, c);
  auto it = m.qvars.find(p.actor);
  if (it == m.qvars.end()) throw SolventError("model lacks the actor " + p.actor);
  return {m.trace, it->second};
}

// --- replay --------------------------------------------------------------

namespace {

FiniteDomains widen(const FiniteDomains &base, const Contract &c,
                    const std::vector<Transaction> &trace, const QEnv &qvars,
                    const ConcreteState &s)
{
  std::set<Int> values(base.values.begin(), base.values.end());
  std::set<Int> addrs(base.addresses.begin(), base.addresses.end());
  std::set<Int> offsets(base.block_offsets.begin(), base.block_offsets.end());
  for (const auto &t : trace) {
    addrs.insert(t.sender);
    if (t.value >= 0) values.insert(t.value);
    for (const auto &a : t.args) {
      if (const auto *ad = std::get_if<Address>(&a)) addrs.insert(ad->v);
      if (const auto *i = std::get_if<Int>(&a)) values.insert(*i);
    }
  }
  for (const auto &[_, v] : qvars) addrs.insert(v);
  for (const auto &v : c.state_vars) {
    if (v.ty.kind == TyKind::Mapping) continue;
    Value x = scalar_of(c, s, v.name);
    if (const auto *ad = std::get_if<Address>(&x)) addrs.insert(ad->v);
    if (const auto *i = std::get_if<Int>(&x)) {
      values.insert(*i);
      // thresholds such as deadlines are relative to the current block
      if (*i >= s.block_number) offsets.insert(*i - s.block_number + 1);
    }
  }
  values.insert(s.contract_balance);
  for (const auto &[_, a] : qvars) {
    for (const auto &v : c.state_vars)
      if (v.ty.kind == TyKind::Mapping) values.insert(s.map_get(v.name, a));
    values.insert(s.account(a));
  }
  FiniteDomains d = base;
  d.values.assign(values.begin(), values.end());
  d.addresses.assign(addrs.begin(), addrs.end());
  d.block_offsets.assign(offsets.begin(), offsets.end());
  return d;
}

}  // namespace

ReplayResult replay_validate(const Contract &c, const Property &p,
                             const std::vector<Transaction> &trace,
                             const QEnv &qvars,
                             const std::map<Int, Int> &genesis_accounts,
                             const FiniteDomains &dom,
                             const std::vector<std::map<std::string, Value>> *frames)
{
  ReplayResult r;
  if (trace.empty() || trace[0].kind != TxKind::Constructor) {
    r.detail = "trace does not start with a constructor";
    return r;
  }
  std::vector<StepOutcome> outs;
  try {
    outs = run_trace(c, trace, genesis_accounts);
  } catch (const InterpError &e) {
    r.detail = e.what();
    return r;
  }
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (outs[i].reverted) {
      r.detail = "step " + std::to_string(i + 1) + " reverts";
      return r;
    }
  }
  if (frames) {
    for (std::size_t i = 0; i < frames->size() && i < outs.size(); ++i) {
      const ConcreteState &s = outs[i].next;
      for (const auto &[name, v] : (*frames)[i]) {
        Value actual = name == "$bal"     ? Value(s.contract_balance)
                       : name == "$block" ? Value(s.block_number)
                                          : scalar_of(c, s, name);
        bool same = std::holds_alternative<bool>(v)
                        ? std::holds_alternative<bool>(actual)
                              && std::get<bool>(v) == std::get<bool>(actual)
                        : !std::holds_alternative<bool>(actual)
                              && as_int(v) == as_int(actual);
        if (!same) {
          r.detail = "frame " + std::to_string(i) + ": " + name + " is "
                     + to_string(actual) + " but the model says " + to_string(v);
          return r;
        }
      }
    }
  }
  const ConcreteState &reached = outs.back().next;
  try {
    Value ante = eval_pre(c, reached, p.antecedent, qvars);
    if (!std::get<bool>(ante)) {
      r.detail = "antecedent is false in the reached state";
      return r;
    }
    FiniteDomains d = widen(dom, c, trace, qvars, reached);
    LiquidityWitness w;
    try {
      w = find_liquidating_suffix(c, reached, p, qvars, d);
    } catch (const InterpError &) {
      // widened domain too large: fall back to the configured one
      w = find_liquidating_suffix(c, reached, p, qvars, dom);
    }
    if (w.found) {
      r.detail = "a liquidating suffix exists:\n" + format_trace(w.suffix);
      return r;
    }
  } catch (const InterpError &e) {
    r.detail = e.what();
    return r;
  }
  r.ok = true;
  return r;
}

// --- verification --------------------------------------------------------

namespace {

std::mutex dump_mutex;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t)
{
  return std::chrono::duration<double>(Clock::now() - t).count();
}

class Task {
 public:
  Task(const Contract &c, const SolverConfig &cfg, const VerifyOptions &opts,
       RunReport &report)
      : c_(c), cfg_(cfg), opts_(opts), report_(report), start_(Clock::now())
  {
  }

  double remaining() const { return opts_.budget_s - seconds_since(start_); }

  /// Runs `q` with at most `cap` seconds (and never past the budget).
  SolverAnswer run(const EncodedQuery &q, const std::string &phase, double cap = 1e18)
  {
    PhaseRecord rec;
    rec.name = phase;
    rec.depth = q.depth;
    if (!opts_.dump_dir.empty()) rec.dump = dump(q);
    double limit = std::min(remaining(), cap);
    SolverAnswer a;
    if (limit <= 0) {
      a.status = SolverStatus::Timeout;
      a.detail = "budget exhausted";
    } else {
      SolverConfig cfg = cfg_;
      cfg.timeout_s = limit;
      a = run_query(q, cfg);
    }
    rec.status = to_string(a.status);
    rec.elapsed_s = a.elapsed_s;
    report_.phases.push_back(rec);
    return a;
  }

  double elapsed() const { return seconds_since(start_); }

 private:
  std::string dump(const EncodedQuery &q)
  {
    namespace fs = std::filesystem;
    std::string kind = to_string(q.kind);
    for (auto &ch : kind)
      if (ch == '-') ch = '_';
    std::string name = "query_" + (q.property.empty() ? c_.name : q.property) + "_"
                       + kind + "_" + std::to_string(q.depth) + ".smt2";
    fs::path path = fs::path(opts_.dump_dir) / name;
    std::lock_guard<std::mutex> lock(dump_mutex);
    fs::create_directories(opts_.dump_dir);
    std::ofstream(path) << q.script;
    return path.string();
  }

  const Contract &c_;
  const SolverConfig &cfg_;
  const VerifyOptions &opts_;
  RunReport &report_;
  Clock::time_point start_;
};

Verdict unknown(UnknownReason r, std::string detail)
{
  Verdict v;
  v.kind = VerdictKind::Unknown;
  v.reason = r;
  v.detail = std::move(detail);
  return v;
}

Verdict unknown_from(const SolverAnswer &a)
{
  switch (a.status) {
    case SolverStatus::Timeout: return unknown(UnknownReason::Timeout, a.detail);
    case SolverStatus::Unknown: return unknown(UnknownReason::SolverUnknown, a.detail);
    default: return unknown(UnknownReason::Crash, a.detail);
  }
}

// share of the budget that the proof attempts may use
constexpr double kAbstractShare = 0.25;
constexpr double kInvariantShare = 0.1;

Verdict run_phases(const Contract &c, const Property &p,
                   const std::vector<ExprPtr> &invariants, const VerifyOptions &opts,
                   Task &task)
{
  std::vector<ExprPtr> usable;
  if (!invariants.empty()) {
    auto init = task.run(build_invariant_init_query(c, invariants), "inv-init",
                         opts.budget_s * kInvariantShare);
    if (init.status == SolverStatus::Unsat) {
      auto step = task.run(build_invariant_step_query(c, invariants), "inv-step",
                           opts.budget_s * kInvariantShare);
      if (step.status == SolverStatus::Unsat) usable = invariants;
    }
  }

  auto abs = task.run(build_abstract_query(c, p, usable), "abstract",
                      opts.budget_s * kAbstractShare);
  if (abs.status == SolverStatus::Unsat) {
    if (opts.test_mode) {
      for (int k = 1; k <= std::min(3, opts.max_depth); ++k) {
        auto a = task.run(build_bmc_query(c, p, k), "crosscheck");
        if (a.status == SolverStatus::Sat)
          return unknown(UnknownReason::Crash,
                         "unsound-encoding: unbounded proof but BMC depth "
                             + std::to_string(k) + " is sat");
      }
    }
    Verdict v;
    v.kind = VerdictKind::HoldsUnbounded;
    return v;
  }

  int checked = 0;
  for (int k = 1; k <= opts.max_depth; ++k) {
    if (task.remaining() <= 0) break;
    EncodedQuery q = build_bmc_query(c, p, k);
    SolverAnswer a = task.run(q, "bmc");
    if (a.status == SolverStatus::Unsat) {
      checked = k;
      continue;
    }
    // an inconclusive depth keeps the bound proved so far
    if (a.status == SolverStatus::Timeout || a.status == SolverStatus::Unknown) {
      if (checked == 0) return unknown_from(a);
      break;
    }
    if (a.status != SolverStatus::Sat) return unknown_from(a);

    DecodedModel m;
    try {
      m = decode_model(a, q, c);
    } catch (const SolventError &e) {
      return unknown(UnknownReason::Crash, std::string("model decoding: ") + e.what());
    }
    if (opts.replay_check) {
      ReplayResult r = replay_validate(c, p, m.trace, m.qvars, m.genesis_accounts,
                                       opts.domains, &m.frames);
      if (!r.ok) return unknown(UnknownReason::Crash, "unsound-encoding: " + r.detail);
    }
    Verdict v;
    v.kind = VerdictKind::Violated;
    v.n = k;
    v.trace = m.trace;
    v.qvars = m.qvars;
    v.xa = m.qvars.count(p.actor) ? m.qvars.at(p.actor) : Int(0);
    v.genesis = m.genesis_accounts;
    return v;
  }
  if (checked >= 1) {
    Verdict v;
    v.kind = VerdictKind::HoldsBounded;
    v.n = checked;
    return v;
  }
  return unknown(UnknownReason::Timeout, "budget exhausted before depth 1");
}

}  // namespace

RunReport verify(const Contract &c, const Property &p,
                 const std::vector<ExprPtr> &invariants, const SolverConfig &cfg,
                 const VerifyOptions &opts)
{
  if (opts.max_depth < 1) throw SolventError("max depth must be at least 1");
  RunReport report;
  report.contract = c.name;
  report.property = p.name;
  report.solver = cfg.name();
  report.logic = select_logic(c, &p);
  Task task(c, cfg, opts, report);
  try {
    report.verdict = run_phases(c, p, invariants, opts, task);
  } catch (const std::exception &e) {
    report.verdict = unknown(UnknownReason::Crash, e.what());
  }
  report.elapsed_s = task.elapsed();
  return report;
}

bool verdicts_conflict(const Verdict &a, const Verdict &b)
{
  auto one_way = [](const Verdict &x, const Verdict &y) {
    if (x.kind != VerdictKind::Violated) return false;
    switch (y.kind) {
      case VerdictKind::Violated: return x.n != y.n;
      case VerdictKind::HoldsUnbounded: return true;
      case VerdictKind::HoldsBounded: return y.n >= x.n;
      case VerdictKind::Unknown: return false;
    }
    return false;
  };
  return one_way(a, b) || one_way(b, a);
}

void flag_inconsistent(std::vector<RunReport> &reports)
{
  std::vector<bool> bad(reports.size(), false);
  for (std::size_t i = 0; i < reports.size(); ++i)
    for (std::size_t j = i + 1; j < reports.size(); ++j)
      if (reports[i].contract == reports[j].contract
          && reports[i].property == reports[j].property
          && verdicts_conflict(reports[i].verdict, reports[j].verdict))
        bad[i] = bad[j] = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!bad[i]) continue;
    std::string was = reports[i].verdict.mark();
    reports[i].verdict = unknown(UnknownReason::Crash, "solver-disagreement (was " + was + ")");
  }
}

std::vector<RunReport> verify_suite(const SourceUnit &u,
                                    const std::vector<SolverConfig> &cfgs,
                                    const VerifyOptions &opts,
                                    const std::string &file)
{
  std::vector<const Property *> props;
  if (opts.properties.empty()) {
    for (const auto &p : u.properties) props.push_back(&p);
  } else {
    for (const auto &n : opts.properties)
      if (const Property *p = u.find_property(n)) props.push_back(p);
  }
  std::vector<ExprPtr> invariants;
  for (const auto &inv : u.invariants)
    invariants.insert(invariants.end(), inv.conjuncts.begin(), inv.conjuncts.end());

  struct Job {
    const Property *p;
    const SolverConfig *cfg;
  };
  std::vector<Job> jobs;
  for (const auto *p : props)
    for (const auto &cfg : cfgs) jobs.push_back({p, &cfg});

  std::vector<RunReport> reports(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      reports[i] = verify(u.contract, *jobs[i].p, invariants, *jobs[i].cfg, opts);
      reports[i].file = file;
    }
  };
  std::size_t n = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opts.jobs, 1)),
                                          1, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();
  flag_inconsistent(reports);
  return reports;
}

int exit_code(const std::vector<RunReport> &reports)
{
  bool internal = false, parse = false, violated = false, unknown = false;
  for (const auto &r : reports) {
    const Verdict &v = r.verdict;
    internal |= v.internal_error();
    parse |= v.kind == VerdictKind::Unknown && v.reason == UnknownReason::ParseError;
    violated |= v.kind == VerdictKind::Violated;
    unknown |= v.kind == VerdictKind::Unknown;
  }
  if (internal) return 3;
  if (parse) return 2;
  if (violated) return 1;
  if (unknown) return 4;
  return 0;
}

// --- rendering -----------------------------------------------------------

namespace {

std::size_t display_width(const std::string &s)
{
  std::size_t n = 0;
  for (unsigned char ch : s)
    if ((ch & 0xC0) != 0x80) ++n;
  return n;
}

std::string pad(const std::string &s, std::size_t w)
{
  std::size_t d = display_width(s);
  return d >= w ? s : s + std::string(w - d, ' ');
}

std::string time_cell(const RunReport &r)
{
  if (r.verdict.kind == VerdictKind::HoldsBounded) return "---";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", r.elapsed_s);
  return buf;
}

}  // namespace

std::string render_table(const std::vector<RunReport> &reports)
{
  std::vector<std::vector<std::string>> rows{{"Contract", "Property", "Solver", "Result", "Time"}};
  for (const auto &r : reports)
    rows.push_back({r.contract, r.property, r.solver, r.verdict.mark(), time_cell(r)});
  std::vector<std::size_t> w(5, 0);
  for (const auto &row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], display_width(row[i]));
  std::string out;
  for (const auto &row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i)
      line += i + 1 < row.size() ? pad(row[i], w[i]) + "  " : row[i];
    out += line + "\n";
  }
  return out;
}

std::string render_traces(const std::vector<RunReport> &reports)
{
  std::string out;
  for (const auto &r : reports) {
    const Verdict &v = r.verdict;
    if (v.kind == VerdictKind::Violated) {
      out += r.contract + "." + r.property + " (" + r.solver + "): " + v.mark()
             + ", counterexample for xa=address(" + v.xa.str() + ")\n";
      out += format_trace(v.trace);
    } else if (v.kind == VerdictKind::Unknown && !v.detail.empty()) {
      out += r.contract + "." + r.property + " (" + r.solver + "): ? " + to_string(v.reason)
             + ": " + v.detail + "\n";
    }
  }
  return out;
}

// --- JSON ----------------------------------------------------------------

namespace {

json int_json(const Int &v)
{
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

Int int_from(const json &j)
{
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw SolventError("expected an integer in JSON");
}

json value_json(const Value &v)
{
  if (const auto *b = std::get_if<bool>(&v)) return *b;
  if (const auto *a = std::get_if<Address>(&v)) return "address(" + a->v.str() + ")";
  return int_json(std::get<Int>(v));
}

Value value_from(const json &j)
{
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.rfind("address(", 0) == 0 && s.back() == ')')
      return Address{Int(s.substr(8, s.size() - 9))};
  }
  return int_from(j);
}

std::string tx_kind_name(TxKind k)
{
  switch (k) {
    case TxKind::Constructor: return "constructor";
    case TxKind::Call: return "call";
    case TxKind::Selfdestruct: return "selfdestruct";
    case TxKind::Skip: return "skip";
  }
  return "?";
}

TxKind tx_kind_from(const std::string &s)
{
  for (TxKind k : {TxKind::Constructor, TxKind::Call, TxKind::Selfdestruct, TxKind::Skip})
    if (tx_kind_name(k) == s) return k;
  throw SolventError("unknown transaction kind " + s);
}

}  // namespace

std::string reports_to_json(const std::vector<RunReport> &reports)
{
  json arr = json::array();
  for (const auto &r : reports) {
    const Verdict &v = r.verdict;
    json verdict{{"kind", to_string(v.kind)}, {"mark", v.mark()}};
    if (v.kind == VerdictKind::Violated || v.kind == VerdictKind::HoldsBounded) verdict["n"] = v.n;
    if (v.kind == VerdictKind::Violated) {
      json trace = json::array();
      for (const auto &t : v.trace) {
        json args = json::array();
        for (const auto &a : t.args) args.push_back(value_json(a));
        json tj{{"kind", tx_kind_name(t.kind)}, {"args", args}, {"sender", int_json(t.sender)},
                {"value", int_json(t.value)}, {"block", int_json(t.block)}};
        if (t.kind == TxKind::Call) tj["method"] = t.method;
        trace.push_back(tj);
      }
      verdict["trace"] = trace;
      verdict["xa"] = int_json(v.xa);
      json q = json::object();
      for (const auto &[name, val] : v.qvars) q[name] = int_json(val);
      verdict["qvars"] = q;
      json g = json::array();
      for (const auto &[a, b] : v.genesis)
        g.push_back(json{{"address", int_json(a)}, {"balance", int_json(b)}});
      verdict["genesis"] = g;
    }
    if (v.kind == VerdictKind::Unknown) {
      verdict["reason"] = to_string(v.reason);
      verdict["detail"] = v.detail;
    }
    json phases = json::array();
    for (const auto &p : r.phases) {
      json pj{{"name", p.name}, {"depth", p.depth}, {"status", p.status},
              {"elapsed_s", p.elapsed_s}};
      if (!p.dump.empty()) pj["dump"] = p.dump;
      phases.push_back(pj);
    }
    json rj{{"contract", r.contract}, {"property", r.property}, {"solver", r.solver},
            {"verdict", verdict}, {"logic", to_string(r.logic)},
            {"elapsed_s", r.elapsed_s}, {"phases", phases}};
    if (!r.file.empty()) rj["file"] = r.file;
    if (!r.diagnostics.empty()) rj["diagnostics"] = r.diagnostics;
    arr.push_back(rj);
  }
  return arr.dump(2) + "\n";
}

std::vector<RunReport> reports_from_json(const std::string &text)
{
  std::vector<RunReport> out;
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception &e) {
    throw SolventError(std::string("invalid report JSON: ") + e.what());
  }
  if (!arr.is_array()) throw SolventError("report JSON must be an array");
  try {
    for (const auto &rj : arr) {
      RunReport r;
      r.contract = rj.at("contract").get<std::string>();
      r.property = rj.at("property").get<std::string>();
      r.solver = rj.at("solver").get<std::string>();
      r.elapsed_s = rj.at("elapsed_s").get<double>();
      std::string logic = rj.at("logic").get<std::string>();
      r.logic = logic == to_string(Logic::NonlinearArrays) ? Logic::NonlinearArrays
                                                           : Logic::LinearArrays;
      r.file = rj.value("file", "");
      if (rj.contains("diagnostics"))
        r.diagnostics = rj.at("diagnostics").get<std::vector<std::string>>();
      const json &vj = rj.at("verdict");
      Verdict &v = r.verdict;
      v.kind = enum_from(vj.at("kind").get<std::string>(),
                         {VerdictKind::Violated, VerdictKind::HoldsUnbounded,
                          VerdictKind::HoldsBounded, VerdictKind::Unknown});
      v.n = vj.value("n", 0);
      if (vj.contains("trace")) {
        for (const auto &tj : vj.at("trace")) {
          Transaction t;
          t.kind = tx_kind_from(tj.at("kind").get<std::string>());
          t.method = tj.value("method", "");
          for (const auto &a : tj.at("args")) t.args.push_back(value_from(a));
          t.sender = int_from(tj.at("sender"));
          t.value = int_from(tj.at("value"));
          t.block = int_from(tj.at("block"));
          v.trace.push_back(std::move(t));
        }
      }
      if (vj.contains("xa")) v.xa = int_from(vj.at("xa"));
      if (vj.contains("qvars"))
        for (const auto &[name, val] : vj.at("qvars").items()) v.qvars[name] = int_from(val);
      if (vj.contains("genesis"))
        for (const auto &gj : vj.at("genesis"))
          v.genesis[int_from(gj.at("address"))] = int_from(gj.at("balance"));
      if (vj.contains("reason"))
        v.reason = enum_from(vj.at("reason").get<std::string>(),
                             {UnknownReason::None, UnknownReason::Timeout,
                              UnknownReason::SolverUnknown, UnknownReason::Crash,
                              UnknownReason::ParseError});
      v.detail = vj.value("detail", "");
      for (const auto &pj : rj.at("phases")) {
        PhaseRecord p;
        p.name = pj.at("name").get<std::string>();
        p.depth = pj.at("depth").get<int>();
        p.status = pj.at("status").get<std::string>();
        p.elapsed_s = pj.at("elapsed_s").get<double>();
        p.dump = pj.value("dump", "");
        r.phases.push_back(p);
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw SolventError(std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

}  // namespace solvent

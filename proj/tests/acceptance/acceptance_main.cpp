// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "differential.h"
#include "gen.h"
#include "solvent/driver.h"
#include "solvent/parser.h"

using namespace solvent;
namespace fs = std::filesystem;

namespace {

SourceUnit load(const std::string &name)
{
  std::ifstream in(std::string(SOLVENT_BENCH_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  auto p = parse_file(ss.str());
  if (!p.ok()) throw std::runtime_error("cannot parse " + name);
  return *p.value;
}

std::vector<ExprPtr> invariants(const SourceUnit &u)
{
  std::vector<ExprPtr> inv;
  for (const auto &i : u.invariants) inv.insert(inv.end(), i.conjuncts.begin(), i.conjuncts.end());
  return inv;
}

VerifyOptions opts(int depth, double budget)
{
  VerifyOptions o;
  o.max_depth = depth;
  o.budget_s = budget;
  return o;
}

RunReport run(const SourceUnit &u, const std::string &prop, int depth, const SolverConfig &cfg)
{
  return verify(u.contract, *u.find_property(prop), invariants(u), cfg, opts(depth, 300));
}

struct Check {
  bool ok = false;
  std::string detail;
};

struct SuiteEntry {
  SourceUnit unit;
  RunReport report;
  SolverConfig cfg;
};

int failures = 0;

void report(int id, const std::string &title, const std::function<Check()> &f)
{
  Check c;
  try {
    c = f();
  } catch (const std::exception &e) {
    c = {false, std::string("exception: ") + e.what()};
  }
  if (!c.ok) ++failures;
  std::cout << (c.ok ? "PASS " : "FAIL ") << id << " " << title;
  if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
  std::cout << std::endl;
}

std::string describe(const RunReport &r)
{
  return r.contract + "." + r.property + "@" + r.solver + "=" + r.verdict.mark();
}

// every benchmark, both solvers, depth 4
std::vector<SuiteEntry> run_suite()
{
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(SOLVENT_BENCH_DIR))
    if (e.path().extension() == ".sol") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<SolverConfig> cfgs{SolverConfig::z3(90), SolverConfig::cvc5(90)};
  std::vector<SuiteEntry> out;
  for (const auto &f : files) {
    SourceUnit u = load(f.filename().string());
    for (auto &r : verify_suite(u, cfgs, opts(4, 90), f.string())) {
      const SolverConfig &cfg = r.solver == "cvc5" ? cfgs[1] : cfgs[0];
      std::cerr << "  " << describe(r) << " " << r.elapsed_s << "s\n";
      out.push_back({u, std::move(r), cfg});
    }
  }
  return out;
}

}  // namespace

int main()
{
  report(1, "crowdfund donor_wd has a validated 3-step counterexample", [] {
    SourceUnit u = load("crowdfund_bug.sol");
    std::string seen;
    for (const auto &cfg : {SolverConfig::z3(120), SolverConfig::cvc5(120)}) {
      RunReport r = run(u, "donor_wd", 5, cfg);
      seen += describe(r) + " ";
      const Verdict &v = r.verdict;
      if (v.kind != VerdictKind::Violated || v.n != 3 || v.trace.size() != 3) continue;
      bool shape = v.trace[0].kind == TxKind::Constructor && v.trace[1].method == "donate"
                   && v.trace[2].kind == TxKind::Selfdestruct;
      auto rv = replay_validate(u.contract, *u.find_property("donor_wd"), v.trace, v.qvars,
                                v.genesis, FiniteDomains{});
      if (shape && rv.ok) return Check{true, describe(r)};
      seen += rv.detail + " ";
    }
    return Check{false, seen};
  });

  report(2, "crowdfund owner_wd holds for all depths", [] {
    RunReport r = run(load("crowdfund_bug.sol"), "owner_wd", 4, SolverConfig::z3(120));
    return Check{r.verdict.kind == VerdictKind::HoldsUnbounded, describe(r)};
  });

  report(3, "fixed crowdfund donor_wd holds up to depth 4", [] {
    RunReport r = run(load("crowdfund_fix.sol"), "donor_wd", 4, SolverConfig::z3(300));
    bool ok = r.verdict.kind == VerdictKind::HoldsUnbounded
              || (r.verdict.kind == VerdictKind::HoldsBounded && r.verdict.n >= 4);
    return Check{ok, describe(r)};
  });

  report(4, "frozen funds found in the bug and absent in the fix", [] {
    RunReport bug = run(load("crowdfund_bug.sol"), "frozen_funds", 4, SolverConfig::z3(120));
    RunReport fix = run(load("crowdfund_fix2.sol"), "no_frozen_funds", 4, SolverConfig::z3(300));
    bool ok = bug.verdict.kind == VerdictKind::Violated && bug.verdict.n <= 3
              && (fix.verdict.kind == VerdictKind::HoldsUnbounded
                  || (fix.verdict.kind == VerdictKind::HoldsBounded && fix.verdict.n >= 3));
    return Check{ok, describe(bug) + " " + describe(fix)};
  });

  std::cerr << "running the benchmark suite\n";
  std::vector<SuiteEntry> suite;
  std::string suite_error;
  try {
    suite = run_suite();
  } catch (const std::exception &e) {
    suite_error = e.what();
  }
  auto suite_ok = [&]() -> Check {
    if (!suite_error.empty()) return {false, suite_error};
    if (suite.empty()) return {false, "no reports"};
    return {true, ""};
  };

  report(5, "every counterexample is minimal", [&] {
    Check c = suite_ok();
    if (!c.ok) return c;
    std::size_t n = 0;
    for (const auto &e : suite) {
      const Verdict &v = e.report.verdict;
      if (v.kind != VerdictKind::Violated || v.n <= 1) continue;
      ++n;
      const Property &p = *e.unit.find_property(e.report.property);
      auto a = run_query(build_bmc_query(e.unit.contract, p, v.n - 1), e.cfg);
      if (a.status != SolverStatus::Unsat)
        return Check{false, describe(e.report) + " depth " + std::to_string(v.n - 1)
                                + " not unsat"};
    }
    return Check{true, std::to_string(n) + " counterexamples"};
  });

  report(6, "encoder agrees with the interpreter on 1000 random pairs", [] {
    auto s = testgen::run_differential(1000, 7, SolverConfig::z3(60));
    std::string d = std::to_string(s.failures) + "/" + std::to_string(s.pairs) + " failures";
    if (!s.messages.empty()) d += ": " + s.messages.front();
    return Check{s.pairs >= 1000 && s.failures == 0, d};
  });

  report(7, "every counterexample replays", [&] {
    Check c = suite_ok();
    if (!c.ok) return c;
    std::size_t n = 0;
    for (const auto &e : suite) {
      const Verdict &v = e.report.verdict;
      if (v.kind != VerdictKind::Violated) continue;
      ++n;
      auto rv = replay_validate(e.unit.contract, *e.unit.find_property(e.report.property),
                                v.trace, v.qvars, v.genesis, FiniteDomains{});
      if (!rv.ok) return Check{false, describe(e.report) + ": " + rv.detail};
    }
    return Check{true, std::to_string(n) + " counterexamples"};
  });

  report(8, "solvers never disagree", [&] {
    Check c = suite_ok();
    if (!c.ok) return c;
    for (const auto &e : suite)
      if (e.report.verdict.detail.find("solver-disagreement") != std::string::npos)
        return Check{false, describe(e.report)};
    return Check{true, std::to_string(suite.size()) + " reports"};
  });

  report(9, "interpreter invariants hold on 100000 transactions", [] {
    auto s = testgen::check_interp_invariants(100000, 11);
    std::string d = std::to_string(s.failures) + " failures in "
                    + std::to_string(s.transactions) + " transactions";
    if (!s.messages.empty()) d += ": " + s.messages.front();
    return Check{s.transactions >= 100000 && s.failures == 0, d};
  });

  report(10, "payment splitter uses nonlinear arithmetic without internal errors", [] {
    SourceUnit u = load("payment_splitter.sol");
    if (select_logic(u.contract) != Logic::NonlinearArrays) return Check{false, "logic is linear"};
    std::string d;
    for (const auto &p : u.properties) {
      RunReport r = verify(u.contract, p, invariants(u), SolverConfig::z3(120), opts(4, 120));
      d += describe(r) + " ";
      if (r.verdict.internal_error()) return Check{false, d + r.verdict.detail};
    }
    return Check{true, d};
  });

  return failures == 0 ? 0 : 1;
}

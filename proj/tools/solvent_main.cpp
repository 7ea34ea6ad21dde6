// solvent: liquidity verifier for a small Solidity fragment.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "solvent/driver.h"
#include "solvent/parser.h"
#include "solvent/wellformed.h"

namespace fs = std::filesystem;
using namespace solvent;

namespace {

struct Options {
  std::vector<std::string> inputs;
  std::string solver = "z3";
  double timeout = 400;
  int max_depth = 10;
  std::vector<std::string> properties;
  std::string json_path;
  std::string dump_dir;
  std::string replay = "on";
  int jobs = 1;
  std::string oracle_domain;
  bool test_mode = false;
  bool quiet = false;
};

void add_common(CLI::App &app, Options &o)
{
  app.add_option("--solver", o.solver, "Backend solver")
      ->check(CLI::IsMember({"z3", "cvc5", "both"}))
      ->capture_default_str();
  app.add_option("--timeout", o.timeout, "Time budget per property and solver, in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-depth", o.max_depth, "Deepest BMC unrolling")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();
  app.add_option("--property", o.properties, "Only check this property (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--json", o.json_path, "Write the JSON report here ('-' for stdout)");
  app.add_option("--dump-smt", o.dump_dir, "Write every query to this directory");
  auto *replay = app.add_option("--replay-check", o.replay, "Replay counterexamples")
                     ->check(CLI::IsMember({"on", "off"}))
                     ->capture_default_str();
  app.add_option("--jobs", o.jobs, "Parallel verification tasks")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_option("--oracle-domain", o.oracle_domain,
                 "Replay search domain, e.g. 'values=0-3;addresses=0-5;blocks=0,1,1000000'");
  app.add_flag("--test-mode", o.test_mode, "Cross-check unbounded proofs with BMC");
  app.add_flag("-q,--quiet", o.quiet, "Do not print counterexample traces");
  app.callback([&o, replay] {
    if (o.replay == "off" && !o.oracle_domain.empty() && replay->count() > 0)
      throw CLI::ValidationError("--oracle-domain", "has no effect with --replay-check off");
    if (!o.oracle_domain.empty()) {
      try {
        FiniteDomains::parse(o.oracle_domain);
      } catch (const SolventError &e) {
        throw CLI::ValidationError("--oracle-domain", e.what());
      }
    }
  });
}

std::optional<std::string> read_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<SolverConfig> solver_configs(const Options &o)
{
  std::vector<SolverConfig> cfgs;
  if (o.solver == "z3" || o.solver == "both") cfgs.push_back(SolverConfig::z3(o.timeout));
  if (o.solver == "cvc5" || o.solver == "both") cfgs.push_back(SolverConfig::cvc5(o.timeout));
  return cfgs;
}

VerifyOptions verify_options(const Options &o)
{
  VerifyOptions v;
  v.max_depth = o.max_depth;
  v.budget_s = o.timeout;
  v.replay_check = o.replay == "on";
  v.dump_dir = o.dump_dir;
  v.test_mode = o.test_mode;
  v.jobs = o.jobs;
  v.properties = o.properties;
  if (!o.oracle_domain.empty()) v.domains = FiniteDomains::parse(o.oracle_domain);
  return v;
}

struct Loaded {
  std::optional<SourceUnit> unit;
  std::vector<std::string> diagnostics;
};

Loaded load(const std::string &path)
{
  Loaded l;
  auto text = read_file(path);
  if (!text) {
    l.diagnostics.push_back(path + ": cannot read file");
    return l;
  }
  auto parsed = parse_file(*text);
  for (const auto &d : parsed.diagnostics) l.diagnostics.push_back(format_diagnostic(path, d));
  if (!parsed.ok()) return l;
  auto wf = check_wellformed(*parsed.value);
  for (const auto &d : wf) l.diagnostics.push_back(format_diagnostic(path, d));
  bool errors = std::any_of(wf.begin(), wf.end(),
                            [](const Diagnostic &d) { return d.severity == Severity::Error; });
  if (!errors) l.unit = std::move(parsed.value);
  return l;
}

/// Rows standing in for a file that could not be loaded.
std::vector<RunReport> failed_file(const std::string &path, const Loaded &l,
                                   const std::vector<SolverConfig> &cfgs)
{
  std::vector<RunReport> out;
  for (const auto &cfg : cfgs) {
    RunReport r;
    r.contract = fs::path(path).stem().string();
    r.property = "-";
    r.solver = cfg.name();
    r.file = path;
    r.verdict.kind = VerdictKind::Unknown;
    r.verdict.reason = UnknownReason::ParseError;
    r.verdict.detail = l.diagnostics.empty() ? "" : l.diagnostics.front();
    r.diagnostics = l.diagnostics;
    out.push_back(r);
  }
  return out;
}

void emit(const Options &o, const std::vector<RunReport> &reports)
{
  std::cout << render_table(reports);
  if (!o.quiet) {
    std::string traces = render_traces(reports);
    if (!traces.empty()) std::cout << "\n" << traces;
  }
  if (o.json_path == "-") {
    std::cout << reports_to_json(reports);
  } else if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) throw SolventError("cannot write " + o.json_path);
    out << reports_to_json(reports);
  }
  std::cout.flush();
}

int check_solvers(const std::vector<SolverConfig> &cfgs)
{
  for (const auto &cfg : cfgs) {
    try {
      solver_command(cfg);
    } catch (const SolventError &e) {
      std::cerr << "solvent: " << e.what() << "\n";
      return 3;
    }
  }
  return 0;
}

int run_files(const Options &o)
{
  auto cfgs = solver_configs(o);
  VerifyOptions vo = verify_options(o);
  std::vector<std::pair<std::string, SourceUnit>> units;
  for (const auto &path : o.inputs) {
    Loaded l = load(path);
    for (const auto &d : l.diagnostics) std::cerr << d << "\n";
    if (!l.unit) return 2;
    units.emplace_back(path, std::move(*l.unit));
  }
  for (const auto &name : o.properties) {
    bool found = std::any_of(units.begin(), units.end(),
                             [&](const auto &u) { return u.second.find_property(name); });
    if (!found) {
      std::cerr << "solvent: no property named '" << name << "'\n";
      return 2;
    }
  }
  if (int rc = check_solvers(cfgs)) return rc;
  std::vector<RunReport> reports;
  for (const auto &[path, unit] : units) {
    auto rs = verify_suite(unit, cfgs, vo, path);
    reports.insert(reports.end(), rs.begin(), rs.end());
  }
  emit(o, reports);
  return exit_code(reports);
}

int run_bench(const Options &o, const std::string &dir)
{
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << "solvent: " << dir << " is not a directory\n";
    return 2;
  }
  std::vector<std::string> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".sol") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  auto cfgs = solver_configs(o);
  VerifyOptions vo = verify_options(o);
  if (!files.empty())
    if (int rc = check_solvers(cfgs)) return rc;
  std::vector<RunReport> reports;
  for (const auto &path : files) {
    Loaded l = load(path);
    std::vector<RunReport> rs =
        l.unit ? verify_suite(*l.unit, cfgs, vo, path) : failed_file(path, l, cfgs);
    reports.insert(reports.end(), rs.begin(), rs.end());
  }
  emit(o, reports);
  return exit_code(reports);
}

int render_json(const std::string &path)
{
  auto text = read_file(path);
  if (!text) {
    std::cerr << "solvent: cannot read " << path << "\n";
    return 2;
  }
  std::vector<RunReport> reports;
  try {
    reports = reports_from_json(*text);
  } catch (const SolventError &e) {
    std::cerr << "solvent: " << e.what() << "\n";
    return 2;
  }
  std::cout << render_table(reports);
  return exit_code(reports);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Liquidity verifier for Solidity contracts"};
  app.set_version_flag("--version", "solvent 1.0");
  Options o;
  add_common(app, o);
  app.add_option("inputs", o.inputs, "Contract files (.sol)");

  std::string bench_dir;
  auto *bench = app.add_subcommand("bench", "Verify every .sol file in a directory");
  bench->add_option("dir", bench_dir, "Benchmark directory")->required();
  Options bo;
  add_common(*bench, bo);

  std::string table_json;
  auto *table = app.add_subcommand("table", "Render the result table of a JSON report");
  table->add_option("report", table_json, "JSON report")->required();

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*table) return render_json(table_json);
    if (*bench) {
      if (!o.inputs.empty()) {
        std::cerr << "solvent: bench takes a directory, not input files\n";
        return 2;
      }
      return run_bench(bo, bench_dir);
    }
    if (o.inputs.empty()) {
      std::cerr << app.help();
      return 2;
    }
    return run_files(o);
  } catch (const std::exception &e) {
    std::cerr << "solvent: internal error: " << e.what() << "\n";
    return 3;
  }
}

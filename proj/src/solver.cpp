#include "solvent/solver.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <future>
#include <sstream>

#include "solvent/diagnostics.h"

#ifndef SOLVENT_CVC5_ADAPTER
#define SOLVENT_CVC5_ADAPTER "cvc5_smt2.py"
#endif

namespace solvent {

std::string SolverConfig::name() const
{
  switch (which) {
    case SolverKind::Z3: return "z3";
    case SolverKind::Cvc5: return "cvc5";
    case SolverKind::Custom: return command.empty() ? "custom" : command[0];
  }
  return "?";
}

SolverConfig SolverConfig::z3(double timeout_s)
{
  SolverConfig c;
  c.which = SolverKind::Z3;
  c.timeout_s = timeout_s;
  return c;
}

SolverConfig SolverConfig::cvc5(double timeout_s)
{
  SolverConfig c;
  c.which = SolverKind::Cvc5;
  c.timeout_s = timeout_s;
  return c;
}

std::string to_string(SolverStatus s)
{
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::Timeout: return "timeout";
    case SolverStatus::Crash: return "crash";
  }
  return "?";
}

std::vector<std::string> default_solver_args(SolverKind k)
{
  switch (k) {
    case SolverKind::Z3: return {"-in", "-smt2"};
    // constant arrays need the extended array solver; the default
    // instantiation strategies give up on the suffix quantifier
    case SolverKind::Cvc5: return {"--arrays-exp", "--mbqi", "--mbqi-enum"};
    case SolverKind::Custom: return {};
  }
  return {};
}

namespace {

std::vector<std::string> split_path(const char *var)
{
  std::vector<std::string> out;
  if (!var) return out;
  std::stringstream ss(var);
  std::string dir;
  while (std::getline(ss, dir, ':'))
    if (!dir.empty()) out.push_back(dir);
  return out;
}

bool executable(const std::string &path)
{
  struct stat st;
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode)
         && ::access(path.c_str(), X_OK) == 0;
}

std::optional<std::string> find_program(const std::string &name)
{
  if (name.find('/') != std::string::npos)
    return executable(name) ? std::optional(name) : std::nullopt;
  auto dirs = split_path(std::getenv("SOLVENT_SOLVER_PATH"));
  auto path = split_path(std::getenv("PATH"));
  dirs.insert(dirs.end(), path.begin(), path.end());
  for (const auto &d : dirs) {
    std::string p = d + "/" + name;
    if (executable(p)) return p;
  }
  return std::nullopt;
}

bool file_exists(const std::string &p)
{
  struct stat st;
  return ::stat(p.c_str(), &st) == 0;
}

}  // namespace

std::vector<std::string> solver_command(const SolverConfig &cfg)
{
  std::vector<std::string> argv;
  switch (cfg.which) {
    case SolverKind::Z3: {
      auto p = find_program("z3");
      if (!p) throw SolventError("z3 not found on SOLVENT_SOLVER_PATH or PATH");
      argv.push_back(*p);
      break;
    }
    case SolverKind::Cvc5: {
      if (auto p = find_program("cvc5")) {
        argv = {*p, "--lang=smt2"};
        break;
      }
      std::string adapter = SOLVENT_CVC5_ADAPTER;
      if (const char *env = std::getenv("SOLVENT_CVC5_ADAPTER")) adapter = env;
      auto py = find_program("python3");
      if (!py || !file_exists(adapter))
        throw SolventError("cvc5 not found on SOLVENT_SOLVER_PATH or PATH");
      argv = {*py, adapter};
      break;
    }
    case SolverKind::Custom: {
      if (cfg.command.empty()) throw SolventError("empty custom solver command");
      auto p = find_program(cfg.command[0]);
      if (!p) throw SolventError("solver not found: " + cfg.command[0]);
      argv = cfg.command;
      argv[0] = *p;
      break;
    }
  }
  for (const auto &a : default_solver_args(cfg.which)) argv.push_back(a);
  for (const auto &a : cfg.extra_args) argv.push_back(a);
  return argv;
}

// --- output parsing ------------------------------------------------------

namespace {

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> items;
  bool is_list = false;

  std::string str() const
  {
    if (!is_list) return atom;
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ' ';
      s += items[i].str();
    }
    return s + ")";
  }
};

class SexpReader {
 public:
  explicit SexpReader(const std::string &s) : s_(s) {}

  bool at_end()
  {
    skip_ws();
    return i_ >= s_.size();
  }

  std::optional<Sexp> next()
  {
    skip_ws();
    if (i_ >= s_.size()) return std::nullopt;
    char c = s_[i_];
    if (c == ')') return std::nullopt;
    if (c == '(') {
      ++i_;
      Sexp l;
      l.is_list = true;
      while (true) {
        skip_ws();
        if (i_ >= s_.size()) return std::nullopt;
        if (s_[i_] == ')') {
          ++i_;
          return l;
        }
        auto item = next();
        if (!item) return std::nullopt;
        l.items.push_back(std::move(*item));
      }
    }
    Sexp a;
    if (c == '"' || c == '|') {
      std::size_t start = i_++;
      while (i_ < s_.size()) {
        if (s_[i_] == c) {
          // "" escapes a quote inside strings
          if (c == '"' && i_ + 1 < s_.size() && s_[i_ + 1] == '"') {
            i_ += 2;
            continue;
          }
          break;
        }
        ++i_;
      }
      if (i_ >= s_.size()) return std::nullopt;
      ++i_;
      a.atom = s_.substr(start, i_ - start);
      return a;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_]))
           && s_[i_] != '(' && s_[i_] != ')')
      ++i_;
    a.atom = s_.substr(start, i_ - start);
    return a;
  }

 private:
  void skip_ws()
  {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  const std::string &s_;
  std::size_t i_ = 0;
};

bool is_numeral(const std::string &s)
{
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::optional<ModelValue> value_of(const Sexp &e)
{
  if (!e.is_list) {
    if (e.atom == "true") return ModelValue(true);
    if (e.atom == "false") return ModelValue(false);
    if (is_numeral(e.atom)) return ModelValue(Int(e.atom));
    return std::nullopt;
  }
  if (e.items.size() == 2 && !e.items[0].is_list && e.items[0].atom == "-") {
    auto inner = value_of(e.items[1]);
    if (inner && std::holds_alternative<Int>(*inner))
      return ModelValue(Int(-std::get<Int>(*inner)));
  }
  return std::nullopt;
}

bool is_error(const Sexp &e)
{
  return e.is_list && !e.items.empty() && !e.items[0].is_list
         && e.items[0].atom == "error";
}

std::string error_text(const Sexp &e)
{
  if (e.items.size() < 2) return "error";
  std::string m = e.items[1].atom;
  if (m.size() >= 2 && m.front() == '"') m = m.substr(1, m.size() - 2);
  return m;
}

}  // namespace

std::optional<ModelValue> parse_model_value(const std::string &text)
{
  SexpReader r(text);
  auto e = r.next();
  if (!e || !r.at_end()) return std::nullopt;
  return value_of(*e);
}

SolverAnswer parse_solver_output(const std::string &out,
                                 const std::vector<std::string> &requested)
{
  SolverAnswer ans;
  SexpReader r(out);
  std::vector<Sexp> items;
  while (auto e = r.next()) items.push_back(std::move(*e));
  if (!r.at_end()) {
    ans.detail = "unparseable solver output";
    return ans;
  }

  std::size_t i = 0;
  for (; i < items.size(); ++i) {
    const Sexp &e = items[i];
    if (is_error(e)) {
      ans.detail = error_text(e);
      return ans;
    }
    if (e.is_list) continue;  // e.g. responses to set-option
    if (e.atom == "sat") {
      ans.status = SolverStatus::Sat;
    } else if (e.atom == "unsat") {
      ans.status = SolverStatus::Unsat;
    } else if (e.atom == "unknown") {
      ans.status = SolverStatus::Unknown;
    } else if (e.atom == "success") {
      continue;
    } else {
      ans.detail = "unexpected solver output: " + e.atom;
      return ans;
    }
    ++i;
    break;
  }
  if (i == 0 || (ans.status != SolverStatus::Sat && ans.status != SolverStatus::Unsat
                 && ans.status != SolverStatus::Unknown)) {
    ans.status = SolverStatus::Crash;
    if (ans.detail.empty()) ans.detail = "no check-sat answer";
    return ans;
  }
  if (ans.status == SolverStatus::Unknown) {
    // cvc5 reports the reason as a trailing list: unknown (INCOMPLETE)
    if (i < items.size() && items[i].is_list && !is_error(items[i]))
      ans.detail = items[i].str();
    return ans;
  }
  if (ans.status != SolverStatus::Sat || requested.empty()) return ans;

  if (i >= items.size()) {
    ans.status = SolverStatus::Crash;
    ans.detail = "model missing";
    return ans;
  }
  const Sexp &vals = items[i];
  if (is_error(vals)) {
    ans.status = SolverStatus::Crash;
    ans.detail = "model unavailable: " + error_text(vals);
    return ans;
  }
  if (!vals.is_list || vals.items.size() != requested.size()) {
    ans.status = SolverStatus::Crash;
    ans.detail = "model does not match the requested terms";
    return ans;
  }
  for (std::size_t k = 0; k < requested.size(); ++k) {
    const Sexp &pair = vals.items[k];
    std::optional<ModelValue> v;
    if (pair.is_list && pair.items.size() == 2) v = value_of(pair.items[1]);
    if (!v) {
      ans.status = SolverStatus::Crash;
      ans.detail = "unparseable model value for " + requested[k];
      ans.model.clear();
      return ans;
    }
    ans.model[requested[k]] = *v;
  }
  return ans;
}

// --- process handling ----------------------------------------------------

namespace {

struct Child {
  pid_t pid = -1;
  int in = -1, out = -1, err = -1;

  ~Child()
  {
    close_fd(in);
    close_fd(out);
    close_fd(err);
    if (pid > 0) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      int st;
      while (::waitpid(pid, &st, 0) < 0 && errno == EINTR) {
      }
    }
  }

  static void close_fd(int &fd)
  {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

void spawn(Child &c, const std::vector<std::string> &argv)
{
  int pin[2], pout[2], perr[2];
  if (::pipe2(pin, O_CLOEXEC) || ::pipe2(pout, O_CLOEXEC) || ::pipe2(perr, O_CLOEXEC))
    throw SolventError(std::string("pipe: ") + std::strerror(errno));
  // reported through this pipe if exec fails
  int pexec[2];
  if (::pipe2(pexec, O_CLOEXEC))
    throw SolventError(std::string("pipe: ") + std::strerror(errno));

  std::vector<char *> args;
  for (const auto &a : argv) args.push_back(const_cast<char *>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SolventError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(pin[0], 0);
    ::dup2(pout[1], 1);
    ::dup2(perr[1], 2);
    ::setpgid(0, 0);
    ::execv(args[0], args.data());
    int e = errno;
    (void)!::write(pexec[1], &e, sizeof e);
    ::_exit(127);
  }
  ::close(pin[0]);
  ::close(pout[1]);
  ::close(perr[1]);
  ::close(pexec[1]);
  c.pid = pid;
  c.in = pin[1];
  c.out = pout[0];
  c.err = perr[0];
  int e = 0;
  ssize_t n = ::read(pexec[0], &e, sizeof e);
  ::close(pexec[0]);
  if (n == sizeof e)
    throw SolventError("cannot execute " + argv[0] + ": " + std::strerror(e));
  ::fcntl(c.in, F_SETFL, O_NONBLOCK);
}

}  // namespace

ProcessResult run_solver_process(const std::string &script, const SolverConfig &cfg)
{
  if (cfg.timeout_s <= 0) throw SolventError("solver timeout must be positive");
  auto argv = solver_command(cfg);
  ::signal(SIGPIPE, SIG_IGN);

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto deadline = start + std::chrono::duration_cast<clock::duration>(
                              std::chrono::duration<double>(cfg.timeout_s));

  ProcessResult res;
  Child child;
  spawn(child, argv);
  std::size_t written = 0;
  char buf[65536];

  while (child.out >= 0 || child.err >= 0) {
    auto now = clock::now();
    if (now >= deadline) {
      res.timed_out = true;
      break;
    }
    std::vector<pollfd> fds;
    if (child.in >= 0) fds.push_back({child.in, POLLOUT, 0});
    if (child.out >= 0) fds.push_back({child.out, POLLIN, 0});
    if (child.err >= 0) fds.push_back({child.err, POLLIN, 0});
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    int rc = ::poll(fds.data(), fds.size(), std::min(wait_ms, 1000));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw SolventError(std::string("poll: ") + std::strerror(errno));
    }
    for (const auto &p : fds) {
      if (!p.revents) continue;
      if (p.fd == child.in) {
        ssize_t n = ::write(child.in, script.data() + written, script.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) written = script.size();
        if (written == script.size()) Child::close_fd(child.in);
      } else {
        ssize_t n = ::read(p.fd, buf, sizeof buf);
        if (n > 0) {
          (p.fd == child.out ? res.out : res.err).append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
          Child::close_fd(p.fd == child.out ? child.out : child.err);
        }
      }
    }
  }

  if (res.timed_out) {
    ::kill(-child.pid, SIGKILL);
    ::kill(child.pid, SIGKILL);
  }
  while (::waitpid(child.pid, &res.wait_status, 0) < 0 && errno == EINTR) {
  }
  child.pid = -1;
  res.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();
  return res;
}

SolverAnswer run_script(const std::string &script,
                        const std::vector<std::string> &requested,
                        const SolverConfig &cfg)
{
  ProcessResult p = run_solver_process(script, cfg);
  SolverAnswer ans;
  if (p.timed_out) {
    ans.status = SolverStatus::Timeout;
    ans.detail = "timeout after " + std::to_string(cfg.timeout_s) + "s";
  } else {
    ans = parse_solver_output(p.out, requested);
    int status = p.wait_status;
    bool clean_exit = WIFEXITED(status) && WEXITSTATUS(status) == 0;
    if (!clean_exit && !ans.definitive()) {
      ans.status = SolverStatus::Crash;
      std::string why = WIFSIGNALED(status)
                            ? "killed by signal " + std::to_string(WTERMSIG(status))
                            : "exit status " + std::to_string(WEXITSTATUS(status));
      ans.detail = why + (ans.detail.empty() ? "" : ": " + ans.detail)
                   + (p.err.empty() ? "" : ": " + p.err.substr(0, 2000));
    } else if (ans.status == SolverStatus::Crash && !p.err.empty()) {
      ans.detail += ": " + p.err.substr(0, 2000);
    }
  }
  ans.elapsed_s = p.elapsed_s;
  return ans;
}

SolverAnswer run_query(const EncodedQuery &q, const SolverConfig &cfg)
{
  std::vector<std::string> terms;
  for (const auto &e : q.decode_map) terms.push_back(e.term);
  return run_script(q.script, terms, cfg);
}

SolverAnswer cross_check(const EncodedQuery &q, const std::vector<SolverConfig> &cfgs)
{
  if (cfgs.empty()) throw SolventError("cross_check needs at least one solver");
  std::vector<std::future<SolverAnswer>> futs;
  for (const auto &cfg : cfgs)
    futs.push_back(std::async(std::launch::async, [&q, cfg] { return run_query(q, cfg); }));
  std::vector<SolverAnswer> answers;
  for (auto &f : futs) answers.push_back(f.get());

  const SolverAnswer *first = nullptr;
  for (const auto &a : answers) {
    if (!a.definitive()) continue;
    if (!first) {
      first = &a;
    } else if (a.status != first->status) {
      SolverAnswer bad;
      bad.status = SolverStatus::Crash;
      bad.detail = "solver-disagreement";
      for (const auto &x : answers) bad.elapsed_s = std::max(bad.elapsed_s, x.elapsed_s);
      return bad;
    }
  }
  return first ? *first : answers.front();
}

}  // namespace solvent

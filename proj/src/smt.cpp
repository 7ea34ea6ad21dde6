#include "solvent/smt.h"

namespace solvent::smt {

std::string lit(const Int &v)
{
  if (v < 0) return "(- " + Int(-v).str() + ")";
  return v.str();
}

std::string app(const std::string &op, std::initializer_list<std::string> args)
{
  return app(op, std::vector<std::string>(args));
}

std::string app(const std::string &op, const std::vector<std::string> &args)
{
  std::string out = "(" + op;
  for (const auto &a : args) out += " " + a;
  return out + ")";
}

std::string conj(const std::vector<std::string> &xs)
{
  std::vector<std::string> keep;
  for (const auto &x : xs) {
    if (x == "false") return "false";
    if (x != "true") keep.push_back(x);
  }
  if (keep.empty()) return "true";
  if (keep.size() == 1) return keep[0];
  return app("and", keep);
}

std::string disj(const std::vector<std::string> &xs)
{
  std::vector<std::string> keep;
  for (const auto &x : xs) {
    if (x == "true") return "true";
    if (x != "false") keep.push_back(x);
  }
  if (keep.empty()) return "false";
  if (keep.size() == 1) return keep[0];
  return app("or", keep);
}

std::string ite(const std::string &c, const std::string &t, const std::string &e)
{
  if (t == e || c == "true") return t;
  if (c == "false") return e;
  return app("ite", {c, t, e});
}

std::string select(const std::string &arr, const std::string &idx)
{
  return app("select", {arr, idx});
}

std::string store(const std::string &arr, const std::string &idx,
                  const std::string &v)
{
  return app("store", {arr, idx, v});
}

std::string const_array(const Int &v)
{
  return "((as const (Array Int Int)) " + lit(v) + ")";
}

bool is_atom(const std::string &term)
{
  return term.find_first_of("( ") == std::string::npos;
}

std::string Binder::bind(const std::string &sort, const std::string &term)
{
  if (is_atom(term)) return term;
  std::string name = prefix_ + std::to_string((*counter_)++);
  if (mode_ == Mode::TopLevel)
    commands_.push_back("(define-fun " + name + " () " + sort + " " + term + ")");
  else
    lets_.emplace_back(name, term);
  return name;
}

std::string Binder::wrap(const std::string &body) const
{
  std::string out;
  for (const auto &[n, t] : lets_) out += "(let ((" + n + " " + t + ")) ";
  out += body;
  out.append(lets_.size(), ')');
  return out;
}

}  // namespace solvent::smt

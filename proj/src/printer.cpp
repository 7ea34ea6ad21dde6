#include "solvent/printer.h"

#include <sstream>

namespace solvent {

namespace {

// Binding strength, loosest first. Mirrors the parser's precedence ladder.
enum Level { kOr = 1, kAnd, kNot, kCmp, kAdd, kMul, kUnary, kAtom };

Level level_of(const Expr &e)
{
  switch (e.kind) {
    case ExprKind::Or: return kOr;
    case ExprKind::And: return kAnd;
    case ExprKind::Not: return kNot;
    case ExprKind::Add:
    case ExprKind::Sub: return kAdd;
    case ExprKind::Mul:
    case ExprKind::Div: return kMul;
    case ExprKind::Neg:
    case ExprKind::Post: return kUnary;
    default: return is_comparison(e.kind) ? kCmp : kAtom;
  }
}

const char *op_text(ExprKind k)
{
  switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Eq: return "==";
    case ExprKind::Ne: return "!=";
    case ExprKind::Lt: return "<";
    case ExprKind::Le: return "<=";
    case ExprKind::Gt: return ">";
    case ExprKind::Ge: return ">=";
    case ExprKind::And: return "&&";
    case ExprKind::Or: return "||";
    default: return "?";
  }
}

void print_expr(std::ostream &os, const Expr &e, int min_level);

void print_sub(std::ostream &os, const ExprPtr &e, int min_level)
{
  if (level_of(*e) < min_level) {
    os << '(';
    print_expr(os, *e, 0);
    os << ')';
  } else {
    print_expr(os, *e, min_level);
  }
}

void print_expr(std::ostream &os, const Expr &e, int)
{
  switch (e.kind) {
    case ExprKind::IntLit: os << e.value; return;
    case ExprKind::BoolLit: os << (e.bool_value ? "true" : "false"); return;
    case ExprKind::AddressLit: os << "address(" << e.value << ")"; return;
    case ExprKind::StateVar:
    case ExprKind::Param:
    case ExprKind::QVar: os << e.name; return;
    case ExprKind::MapGet:
      os << e.name << '[';
      print_expr(os, *e.args[0], 0);
      os << ']';
      return;
    case ExprKind::MsgSender: os << "msg.sender"; return;
    case ExprKind::MsgValue: os << "msg.value"; return;
    case ExprKind::BlockNumber: os << "block.number"; return;
    case ExprKind::ContractBalance: os << "balance"; return;
    case ExprKind::AccountBalance:
      os << "balance[";
      print_expr(os, *e.args[0], 0);
      os << ']';
      return;
    case ExprKind::Neg:
      os << '-';
      print_sub(os, e.args[0], kUnary);
      return;
    case ExprKind::Post:
      os << "<tx>";
      print_sub(os, e.args[0], kAtom);
      return;
    case ExprKind::Not:
      os << '!';
      print_sub(os, e.args[0], kNot);
      return;
    default: break;
  }
  Level lv = level_of(e);
  if (lv == kCmp) {
    print_sub(os, e.args[0], kAdd);
    os << ' ' << op_text(e.kind) << ' ';
    print_sub(os, e.args[1], kAdd);
  } else {
    print_sub(os, e.args[0], lv);
    os << ' ' << op_text(e.kind) << ' ';
    print_sub(os, e.args[1], lv + 1);
  }
}

void print_block(std::ostream &os, const Block &b, int indent);

void print_stmt(std::ostream &os, const Stmt &s, int indent)
{
  std::string pad(indent, ' ');
  switch (s.kind) {
    case StmtKind::Require:
      os << pad << "require(" << pretty_print(s.cond) << ");\n";
      break;
    case StmtKind::Assign:
      os << pad << s.target.name;
      if (s.target.key) os << '[' << pretty_print(s.target.key) << ']';
      os << " = " << pretty_print(s.value) << ";\n";
      break;
    case StmtKind::Transfer: {
      std::ostringstream r;
      print_sub(r, s.recipient, kAtom);
      os << pad << r.str() << ".transfer(" << pretty_print(s.value) << ");\n";
      break;
    }
    case StmtKind::If:
      os << pad << "if (" << pretty_print(s.cond) << ") {\n";
      print_block(os, s.then_body, indent + 4);
      os << pad << "}";
      if (!s.else_body.empty()) {
        os << " else {\n";
        print_block(os, s.else_body, indent + 4);
        os << pad << "}";
      }
      os << "\n";
      break;
  }
}

void print_block(std::ostream &os, const Block &b, int indent)
{
  for (const auto &s : b) print_stmt(os, s, indent);
}

void print_method(std::ostream &os, const Method &m, bool is_ctor)
{
  os << "    " << (is_ctor ? "constructor" : "function " + m.name) << '(';
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i) os << ", ";
    os << to_string(m.params[i].ty) << ' ' << m.params[i].name;
  }
  os << ')';
  if (m.payable) os << " payable";
  os << " {\n";
  print_block(os, m.body, 8);
  os << "    }\n";
}

}  // namespace

std::string pretty_print(const ExprPtr &e)
{
  std::ostringstream os;
  print_expr(os, *e, 0);
  return os.str();
}

std::string pretty_print(const Contract &c)
{
  std::ostringstream os;
  os << "contract " << c.name << " {\n";
  for (const auto &v : c.state_vars) {
    os << "    " << to_string(v.ty);
    if (v.immutable) os << " immutable";
    os << ' ' << v.name << ";\n";
  }
  os << "\n";
  print_method(os, c.ctor, true);
  for (const auto &m : c.methods) {
    os << "\n";
    print_method(os, m, false);
  }
  os << "}\n";
  return os.str();
}

std::string pretty_print_property(const Property &p)
{
  std::ostringstream os;
  os << "property " << p.name << " {\n    Forall";
  for (const auto &q : p.qvars) os << ' ' << q;
  os << " [\n        " << pretty_print(p.antecedent) << "\n        -> Exists tx ["
     << p.bound_m << ", " << p.actor << "] [ " << pretty_print(p.consequent)
     << " ]\n    ]\n}\n";
  return os.str();
}

std::string pretty_print_invariant(const Invariant &inv)
{
  std::ostringstream os;
  os << "invariant {\n";
  for (const auto &e : inv.conjuncts) os << "    " << pretty_print(e) << ";\n";
  os << "}\n";
  return os.str();
}

std::string pretty_print(const SourceUnit &u)
{
  std::string out = pretty_print(u.contract);
  for (const auto &p : u.properties) out += "\n" + pretty_print_property(p);
  for (const auto &i : u.invariants) out += "\n" + pretty_print_invariant(i);
  return out;
}

}  // namespace solvent

#include "solvent/parser.h"

#include <algorithm>

#include "solvent/lexer.h"

namespace solvent {

namespace {

constexpr int kMaxDepth = 200;

struct ParseFailure {
  Diagnostic diag;
};

enum class Scope { Method, Property, Invariant };

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks))
  {
    Token end;
    end.kind = TokKind::End;
    end.span = toks_.empty() ? SourceSpan{1, 1, 0} : toks_.back().span;
    if (!toks_.empty()) end.span.column += end.span.length;
    end.span.length = 0;
    toks_.push_back(end);
  }

  Parsed<SourceUnit> parse_unit()
  {
    Parsed<SourceUnit> out;
    SourceUnit unit;
    try {
      unit.contract = parse_contract();
    } catch (const ParseFailure &f) {
      diags_.push_back(f.diag);
      sync_top();
    }
    while (!at_end()) {
      try {
        if (peek().is_kw("property")) {
          unit.properties.push_back(parse_property());
        } else if (peek().is_kw("invariant")) {
          unit.invariants.push_back(parse_invariant());
        } else {
          fail("expected 'property' or 'invariant' block after the contract",
               "expected-block");
        }
      } catch (const ParseFailure &f) {
        diags_.push_back(f.diag);
        next();
        sync_top();
      }
    }
    out.diagnostics = diags_;
    if (diags_.empty()) out.value = std::move(unit);
    return out;
  }

  Parsed<ExprPtr> parse_standalone(const std::vector<std::string> &qvars)
  {
    Parsed<ExprPtr> out;
    scope_ = Scope::Property;
    names_ = qvars;
    try {
      auto e = parse_expr();
      if (!at_end()) fail("unexpected '" + peek().text + "'", "unexpected-token");
      out.value = e;
    } catch (const ParseFailure &f) {
      out.diagnostics.push_back(f.diag);
    }
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
  Scope scope_ = Scope::Method;
  std::vector<std::string> names_;  // params or qvars in scope
  int depth_ = 0;

  struct DepthGuard {
    Parser &p;
    explicit DepthGuard(Parser &parser) : p(parser)
    {
      if (++p.depth_ > kMaxDepth) p.fail("nesting too deep", "too-deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token &peek(std::size_t k = 0) const
  {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokKind::End; }
  const Token &next()
  {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string &msg, const std::string &rule) const
  {
    throw ParseFailure{{Severity::Error, peek().span, msg, rule}};
  }

  static std::string describe(const Token &t)
  {
    return t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
  }

  bool accept_punct(std::string_view p)
  {
    if (!peek().is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_kw(std::string_view k)
  {
    if (!peek().is_kw(k)) return false;
    next();
    return true;
  }
  const Token &expect_punct(std::string_view p)
  {
    if (!peek().is_punct(p))
      fail("expected '" + std::string(p) + "' but found " + describe(peek()),
           "unexpected-token");
    return next();
  }
  const Token &expect_kw(std::string_view k)
  {
    if (!peek().is_kw(k))
      fail("expected '" + std::string(k) + "' but found " + describe(peek()),
           "unexpected-token");
    return next();
  }
  const Token &expect_ident(const char *what)
  {
    if (peek().kind != TokKind::Ident)
      fail(std::string("expected ") + what + " but found " + describe(peek()),
           "unexpected-token");
    return next();
  }

  void sync_top()
  {
    while (!at_end() && !peek().is_kw("property") && !peek().is_kw("invariant"))
      next();
  }

  void sync_member()
  {
    int nest = 0;
    while (!at_end()) {
      if (nest == 0
          && (peek().is_kw("function") || peek().is_kw("constructor")
              || peek().is_punct("}")))
        return;
      if (peek().is_punct("{")) ++nest;
      if (peek().is_punct("}")) --nest;
      next();
    }
  }

  void sync_stmt()
  {
    while (!at_end()) {
      if (peek().is_punct(";")) {
        next();
        return;
      }
      if (peek().is_punct("}")) return;
      next();
    }
  }

  // --- types -------------------------------------------------------------

  bool at_type() const
  {
    const Token &t = peek();
    return t.is_kw("int") || t.is_kw("uint") || t.is_kw("int256")
           || t.is_kw("uint256") || t.is_kw("bool") || t.is_kw("address")
           || t.is_kw("mapping");
  }

  TyKind parse_scalar_type()
  {
    const Token &t = peek();
    if (accept_kw("int") || accept_kw("int256")) return TyKind::Int;
    if (accept_kw("uint") || accept_kw("uint256")) return TyKind::UInt;
    if (accept_kw("bool")) return TyKind::Bool;
    if (accept_kw("address")) {
      accept_kw("payable");
      return TyKind::Address;
    }
    throw ParseFailure{{Severity::Error, t.span,
                        "expected a type but found " + describe(t),
                        "unexpected-token"}};
  }

  Ty parse_type()
  {
    if (accept_kw("mapping")) {
      expect_punct("(");
      SourceSpan key_span = peek().span;
      TyKind key = parse_scalar_type();
      if (key != TyKind::Address)
        throw ParseFailure{{Severity::Error, key_span,
                            "mapping keys must be addresses", "mapping-key"}};
      expect_punct("=>");
      SourceSpan val_span = peek().span;
      TyKind val = parse_scalar_type();
      if (val != TyKind::Int && val != TyKind::UInt)
        throw ParseFailure{{Severity::Error, val_span,
                            "mapping values must be numeric", "mapping-value"}};
      expect_punct(")");
      return Ty::mapping_ty(val);
    }
    return Ty{parse_scalar_type(), TyKind::UInt};
  }

  // --- contract ----------------------------------------------------------

  Contract parse_contract()
  {
    Contract c;
    c.span = expect_kw("contract").span;
    c.name = expect_ident("contract name").text;
    expect_punct("{");
    bool have_ctor = false;
    while (!peek().is_punct("}") && !at_end()) {
      try {
        if (peek().is_kw("constructor")) {
          SourceSpan s = next().span;
          Method m = parse_method_rest(s);
          if (have_ctor)
            diags_.push_back({Severity::Error, s, "duplicate constructor",
                              "duplicate-constructor"});
          c.ctor = std::move(m);
          have_ctor = true;
        } else if (peek().is_kw("function")) {
          next();
          const Token &n = expect_ident("method name");
          Method m = parse_method_rest(n.span);
          m.name = n.text;
          c.methods.push_back(std::move(m));
        } else if (at_type()) {
          c.state_vars.push_back(parse_state_var());
        } else {
          fail("expected a state variable, constructor or function but found "
                   + describe(peek()),
               "unexpected-token");
        }
      } catch (const ParseFailure &f) {
        diags_.push_back(f.diag);
        if (!peek().is_punct("}")) next();
        sync_member();
      }
    }
    expect_punct("}");
    return c;
  }

  VarDecl parse_state_var()
  {
    VarDecl v;
    v.span = peek().span;
    v.ty = parse_type();
    for (;;) {
      if (accept_kw("immutable"))
        v.immutable = true;
      else if (!accept_kw("public"))
        break;
    }
    v.name = expect_ident("state variable name").text;
    expect_punct(";");
    return v;
  }

  Method parse_method_rest(SourceSpan span)
  {
    Method m;
    m.span = span;
    expect_punct("(");
    if (!peek().is_punct(")")) {
      do {
        Param p;
        p.span = peek().span;
        p.ty = parse_type();
        p.span = peek().span;
        p.name = expect_ident("parameter name").text;
        m.params.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    for (;;) {
      if (accept_kw("payable"))
        m.payable = true;
      else if (!accept_kw("public") && !accept_kw("external"))
        break;
    }
    scope_ = Scope::Method;
    names_.clear();
    for (const auto &p : m.params) names_.push_back(p.name);
    m.body = parse_block();
    return m;
  }

  Block parse_block()
  {
    expect_punct("{");
    Block b;
    while (!peek().is_punct("}") && !at_end()) {
      try {
        b.push_back(parse_stmt());
      } catch (const ParseFailure &f) {
        diags_.push_back(f.diag);
        sync_stmt();
      }
    }
    expect_punct("}");
    return b;
  }

  Block parse_branch()
  {
    if (peek().is_punct("{")) return parse_block();
    Block b;
    b.push_back(parse_stmt());
    return b;
  }

  Stmt parse_stmt()
  {
    DepthGuard guard(*this);
    Stmt s;
    s.span = peek().span;
    if (accept_kw("require")) {
      s.kind = StmtKind::Require;
      expect_punct("(");
      s.cond = parse_expr();
      expect_punct(")");
      expect_punct(";");
      return s;
    }
    if (accept_kw("if")) {
      s.kind = StmtKind::If;
      expect_punct("(");
      s.cond = parse_expr();
      expect_punct(")");
      s.then_body = parse_branch();
      if (accept_kw("else")) s.else_body = parse_branch();
      return s;
    }

    ExprPtr lhs = parse_expr();
    if (peek().is_punct(".") && peek(1).is_kw("transfer")) {
      next();
      next();
      s.kind = StmtKind::Transfer;
      s.recipient = lhs;
      expect_punct("(");
      s.value = parse_expr();
      expect_punct(")");
      expect_punct(";");
      return s;
    }
    if (peek().is_punct("=") || peek().is_punct("+=") || peek().is_punct("-=")) {
      std::string op = next().text;
      s.kind = StmtKind::Assign;
      s.target = to_lvalue(lhs);
      ExprPtr rhs = parse_expr();
      if (op == "=") {
        s.value = rhs;
      } else {
        s.value = mk_binary(op == "+=" ? ExprKind::Add : ExprKind::Sub, lhs,
                            rhs, lhs->span);
      }
      expect_punct(";");
      return s;
    }
    fail("expected '=', '+=', '-=' or '.transfer' after expression, found "
             + describe(peek()),
         "unexpected-token");
  }

  LValue to_lvalue(const ExprPtr &e) const
  {
    if (e->kind == ExprKind::StateVar) return {e->name, nullptr, e->span};
    if (e->kind == ExprKind::MapGet) return {e->name, e->args[0], e->span};
    throw ParseFailure{{Severity::Error, e->span,
                        "left-hand side of an assignment must be a state "
                        "variable or a mapping entry",
                        "bad-lvalue"}};
  }

  // --- properties --------------------------------------------------------

  Property parse_property()
  {
    Property p;
    p.span = expect_kw("property").span;
    p.name = expect_ident("property name").text;
    expect_punct("{");
    expect_kw("Forall");
    do {
      p.qvars.push_back(expect_ident("quantified address variable").text);
    } while (accept_punct(",") || peek().kind == TokKind::Ident);
    expect_punct("[");
    scope_ = Scope::Property;
    names_ = p.qvars;
    p.antecedent = parse_expr();
    expect_punct("->");
    expect_kw("Exists");
    expect_kw("tx");
    expect_punct("[");
    const Token &m = peek();
    if (m.kind != TokKind::Int)
      fail("expected the trace bound but found " + describe(m), "unexpected-token");
    next();
    p.bound_m = m.text.size() > 6 ? 1000000 : std::stoi(m.text);
    expect_punct(",");
    p.actor = expect_ident("actor").text;
    expect_punct("]");
    expect_punct("[");
    p.consequent = parse_expr();
    expect_punct("]");
    expect_punct("]");
    expect_punct("}");
    return p;
  }

  Invariant parse_invariant()
  {
    Invariant inv;
    inv.span = expect_kw("invariant").span;
    expect_punct("{");
    scope_ = Scope::Invariant;
    names_.clear();
    while (!peek().is_punct("}") && !at_end()) {
      inv.conjuncts.push_back(parse_expr());
      expect_punct(";");
    }
    expect_punct("}");
    return inv;
  }

  // --- expressions -------------------------------------------------------

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or()
  {
    ExprPtr e = parse_and();
    while (peek().is_punct("||")) {
      SourceSpan s = next().span;
      e = mk_binary(ExprKind::Or, e, parse_and(), s);
    }
    return e;
  }

  ExprPtr parse_and()
  {
    ExprPtr e = parse_not();
    while (peek().is_punct("&&")) {
      SourceSpan s = next().span;
      e = mk_binary(ExprKind::And, e, parse_not(), s);
    }
    return e;
  }

  ExprPtr parse_not()
  {
    DepthGuard guard(*this);
    if (peek().is_punct("!")) {
      SourceSpan s = next().span;
      return mk_unary(ExprKind::Not, parse_not(), s);
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp()
  {
    ExprPtr e = parse_add();
    static const std::pair<const char *, ExprKind> ops[] = {
        {"==", ExprKind::Eq}, {"!=", ExprKind::Ne}, {"<", ExprKind::Lt},
        {"<=", ExprKind::Le}, {">", ExprKind::Gt}, {">=", ExprKind::Ge}};
    for (const auto &[txt, kind] : ops) {
      if (peek().is_punct(txt)) {
        SourceSpan s = next().span;
        return mk_binary(kind, e, parse_add(), s);
      }
    }
    return e;
  }

  ExprPtr parse_add()
  {
    ExprPtr e = parse_mul();
    for (;;) {
      if (peek().is_punct("+")) {
        SourceSpan s = next().span;
        e = mk_binary(ExprKind::Add, e, parse_mul(), s);
      } else if (peek().is_punct("-")) {
        SourceSpan s = next().span;
        e = mk_binary(ExprKind::Sub, e, parse_mul(), s);
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_mul()
  {
    ExprPtr e = parse_unary();
    for (;;) {
      if (peek().is_punct("*")) {
        SourceSpan s = next().span;
        e = mk_binary(ExprKind::Mul, e, parse_unary(), s);
      } else if (peek().is_punct("/")) {
        SourceSpan s = next().span;
        e = mk_binary(ExprKind::Div, e, parse_unary(), s);
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary()
  {
    DepthGuard guard(*this);
    if (peek().is_punct("-")) {
      SourceSpan s = next().span;
      return mk_unary(ExprKind::Neg, parse_unary(), s);
    }
    if (peek().kind == TokKind::PostMarker) {
      SourceSpan s = next().span;
      return mk_unary(ExprKind::Post, parse_postfix(), s);
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix()
  {
    ExprPtr e = parse_primary();
    while (peek().is_punct(".") && peek(1).is(TokKind::Ident, "balance")) {
      next();
      next();
      e = mk_unary(ExprKind::AccountBalance, e, e->span);
    }
    return e;
  }

  ExprPtr parse_index_or_var(const Token &name, bool force_state)
  {
    ExprKind kind = ExprKind::StateVar;
    if (!force_state
        && std::find(names_.begin(), names_.end(), name.text) != names_.end())
      kind = scope_ == Scope::Property ? ExprKind::QVar : ExprKind::Param;
    if (kind == ExprKind::StateVar && peek().is_punct("[")) {
      next();
      ExprPtr key = parse_expr();
      expect_punct("]");
      return mk_map_get(name.text, key, name.span);
    }
    return mk_var(kind, name.text, name.span);
  }

  ExprPtr parse_primary()
  {
    DepthGuard guard(*this);
    const Token &t = peek();
    SourceSpan s = t.span;
    switch (t.kind) {
      case TokKind::Int: {
        next();
        return mk_int(Int(t.text), s);
      }
      case TokKind::Ident: {
        const Token &name = next();
        if (name.text == "balance") {
          if (accept_punct("[")) {
            ExprPtr a = parse_expr();
            expect_punct("]");
            return mk_unary(ExprKind::AccountBalance, a, s);
          }
          return mk_leaf(ExprKind::ContractBalance, s);
        }
        if (name.text == "st" && scope_ != Scope::Method && peek().is_punct(".")
            && peek(1).kind == TokKind::Ident) {
          next();
          const Token &var = next();
          return parse_index_or_var(var, true);
        }
        return parse_index_or_var(name, false);
      }
      case TokKind::Punct:
        if (t.is_punct("(")) {
          next();
          ExprPtr e = parse_expr();
          expect_punct(")");
          return e;
        }
        break;
      case TokKind::Keyword:
        if (accept_kw("true")) return mk_bool(true, s);
        if (accept_kw("false")) return mk_bool(false, s);
        if (accept_kw("msg")) {
          expect_punct(".");
          const Token &f = expect_ident("'sender' or 'value'");
          if (f.text == "sender") return mk_leaf(ExprKind::MsgSender, s);
          if (f.text == "value") return mk_leaf(ExprKind::MsgValue, s);
          throw ParseFailure{{Severity::Error, f.span,
                              "unknown field msg." + f.text, "unknown-builtin"}};
        }
        if (accept_kw("block")) {
          expect_punct(".");
          const Token &f = expect_ident("'number'");
          if (f.text != "number")
            throw ParseFailure{{Severity::Error, f.span,
                                "unknown field block." + f.text,
                                "unknown-builtin"}};
          return mk_leaf(ExprKind::BlockNumber, s);
        }
        if (accept_kw("this")) {
          expect_punct(".");
          if (!peek().is(TokKind::Ident, "balance"))
            fail("only 'this.balance' is supported", "unsupported");
          next();
          return mk_leaf(ExprKind::ContractBalance, s);
        }
        if (accept_kw("address")) {
          expect_punct("(");
          if (peek().kind == TokKind::Int) {
            Int v(next().text);
            expect_punct(")");
            return mk_address(v, s);
          }
          if (accept_kw("this")) {
            expect_punct(")");
            if (!(peek().is_punct(".") && peek(1).is(TokKind::Ident, "balance")))
              fail("address(this) may only be used as address(this).balance",
                   "unsupported");
            next();
            next();
            return mk_leaf(ExprKind::ContractBalance, s);
          }
          // address(e) is a no-op cast in this fragment
          ExprPtr e = parse_expr();
          expect_punct(")");
          return e;
        }
        if (accept_kw("payable")) {
          expect_punct("(");
          ExprPtr e = parse_expr();
          expect_punct(")");
          return e;
        }
        break;
      default: break;
    }
    fail("expected an expression but found " + describe(t), "unexpected-token");
  }

  friend struct DepthGuard;
};

}  // namespace

Parsed<SourceUnit> parse_file(std::string_view src)
{
  auto lexed = tokenize(src);
  if (!lexed.ok()) return {std::nullopt, lexed.diagnostics};
  Parser p(std::move(*lexed.value));
  return p.parse_unit();
}

Parsed<ExprPtr> parse_expression(std::string_view src,
                                 const std::vector<std::string> &qvars)
{
  auto lexed = tokenize(src);
  if (!lexed.ok()) return {std::nullopt, lexed.diagnostics};
  Parser p(std::move(*lexed.value));
  return p.parse_standalone(qvars);
}

}  // namespace solvent

#include "solvent/lexer.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace solvent {

namespace {

constexpr std::array kKeywords = {
    "contract", "constructor", "function", "require",  "payable",
    "immutable", "mapping",    "address",  "int",      "uint",
    "bool",      "property",   "Forall",   "Exists",   "tx",
    "transfer",  "if",         "else",     "true",     "false",
    "msg",       "block",      "this",     "invariant", "public",
    "external",  "int256",     "uint256",
};

// longest first so that greedy matching works
constexpr std::array kPuncts = {
    "&&", "||", "==", "!=", "<=", ">=", "->", "=>", "+=", "-=", "{", "}",
    "(",  ")",  "[",  "]",  ";",  ",",  ".",  "=",  "<",  ">",  "+", "-",
    "*",  "/",  "!",
};

bool ident_start(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

bool is_keyword(std::string_view word)
{
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::string format_diagnostic(const std::string &path, const Diagnostic &d)
{
  return path + ":" + std::to_string(d.span.line) + ":"
         + std::to_string(d.span.column) + ": "
         + (d.severity == Severity::Error ? "error" : "warning") + "["
         + d.rule_id + "]: " + d.message;
}

Parsed<std::vector<Token>> tokenize(std::string_view src)
{
  Parsed<std::vector<Token>> out;
  std::vector<Token> toks;
  std::size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto fail = [&](int l, int c, int len, std::string msg, std::string rule) {
    out.diagnostics.push_back(
        {Severity::Error, {l, c, len}, std::move(msg), std::move(rule)});
    return out;
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      int l = line, cc = col;
      auto end = src.find("*/", i + 2);
      if (end == std::string_view::npos)
        return fail(l, cc, 2, "unterminated comment", "unterminated-comment");
      advance(end + 2 - i);
      continue;
    }

    Token t;
    t.span = {line, col, 0};
    if (src.substr(i, 4) == "<tx>") {
      t.kind = TokKind::PostMarker;
      t.text = "<tx>";
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      t.kind = is_keyword(t.text) ? TokKind::Keyword : TokKind::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = TokKind::Int;
      t.text = std::string(src.substr(i, j - i));
    } else {
      for (const char *p : kPuncts) {
        std::string_view pv(p);
        if (src.substr(i, pv.size()) == pv) {
          t.kind = TokKind::Punct;
          t.text = std::string(pv);
          break;
        }
      }
      if (t.text.empty()) {
        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string(1, c)
                                : "\\x" + std::to_string(static_cast<unsigned char>(c));
        return fail(line, col, 1, "illegal character '" + shown + "'",
                    "illegal-character");
      }
    }
    t.span.length = static_cast<int>(t.text.size());
    advance(t.text.size());
    toks.push_back(std::move(t));
  }
  out.value = std::move(toks);
  return out;
}

}  // namespace solvent

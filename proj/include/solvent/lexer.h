#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "solvent/diagnostics.h"

namespace solvent {

enum class TokKind { Ident, Int, Keyword, Punct, PostMarker, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourceSpan span;

  bool is(TokKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_kw(std::string_view t) const { return is(TokKind::Keyword, t); }
  bool is_punct(std::string_view t) const { return is(TokKind::Punct, t); }
};

bool is_keyword(std::string_view word);

/// Splits `src` into tokens. The returned vector never contains the End
/// token; parsers append their own sentinel.
Parsed<std::vector<Token>> tokenize(std::string_view src);

}  // namespace solvent

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fuzzyc/error.hpp"

namespace fuzzyc::detail {

enum class TokenKind { LParen, RParen, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  SourcePos pos;
};

/// Splits rule-file text into parentheses and symbols. `(* ... )` comments
/// are dropped (nested parentheses inside a comment are balanced).
/// Throws ParseError on stray characters and unbalanced parentheses.
std::vector<Token> tokenize(std::string_view text);

}  // namespace fuzzyc::detail

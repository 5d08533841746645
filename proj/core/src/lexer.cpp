#include "lexer.hpp"

#include <cctype>

namespace fuzzyc::detail {

namespace {

bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-' ||
         c == '+';
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return i_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0';
  }
  SourcePos pos() const { return {line_, col_}; }
  std::size_t offset() const { return i_; }

  void advance() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::vector<SourcePos> open;
  Cursor cur(text);

  while (!cur.done()) {
    const char c = cur.peek();
    if (std::isspace(static_cast<unsigned char>(c))) {
      cur.advance();
      continue;
    }
    if (c == '(' && cur.peek(1) == '*') {
      const SourcePos start = cur.pos();
      int depth = 0;
      do {
        if (cur.peek() == '(') ++depth;
        if (cur.peek() == ')') --depth;
        cur.advance();
      } while (depth > 0 && !cur.done());
      if (depth > 0) throw ParseError("unterminated comment", start);
      continue;
    }
    if (c == '(') {
      open.push_back(cur.pos());
      tokens.push_back({TokenKind::LParen, text.substr(cur.offset(), 1), cur.pos()});
      cur.advance();
      continue;
    }
    if (c == ')') {
      if (open.empty()) throw ParseError("unbalanced parentheses: unexpected ')'", cur.pos());
      open.pop_back();
      tokens.push_back({TokenKind::RParen, text.substr(cur.offset(), 1), cur.pos()});
      cur.advance();
      continue;
    }
    if (is_symbol_char(c)) {
      const SourcePos start = cur.pos();
      const std::size_t begin = cur.offset();
      while (!cur.done() && is_symbol_char(cur.peek())) cur.advance();
      tokens.push_back({TokenKind::Symbol, text.substr(begin, cur.offset() - begin), start});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", cur.pos());
  }
  if (!open.empty()) throw ParseError("unbalanced parentheses: '(' is never closed", open.back());
  tokens.push_back({TokenKind::End, {}, cur.pos()});
  return tokens;
}

}  // namespace fuzzyc::detail

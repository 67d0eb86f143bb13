#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "corealm/error.hpp"

namespace corealm {

struct Token {
  enum class Kind { Identifier, Variable, Integer, Punct, Newline, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool punct(std::string_view t) const { return is(Kind::Punct, t); }
  bool ident(std::string_view t) const { return is(Kind::Identifier, t); }
};

struct LexOptions {
  std::string file;
  bool emit_newlines = false;
};

/// Tokenizer shared by the ALM and logic-program readers. `%` starts a comment
/// running to end of line. The Unicode forms of `->`, `*`, `-` (negation) and
/// `!=` are normalized to their ASCII spelling.
std::vector<Token> tokenize(std::string_view text, const LexOptions& options);

/// Cursor over a token vector with the helpers both parsers need.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool accept_punct(std::string_view p);
  bool accept_ident(std::string_view word);
  void expect_punct(std::string_view p);
  void expect_ident(std::string_view word);
  std::string expect_identifier(std::string_view what);

  void skip_newlines();
  /// Consumes an optional trailing `.` and the end of line.
  void end_statement();

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail(const std::string& message, const Token& at) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace corealm

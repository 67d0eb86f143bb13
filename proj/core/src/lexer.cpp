#include "corealm/lexer.hpp"

#include <array>
#include <cctype>

namespace corealm {

namespace {

struct Spelling {
  std::string_view source;
  std::string_view normalized;
};

constexpr std::array<Spelling, 14> kPuncts{{
    {"\xE2\x86\x92", "->"},  // →
    {"\xC3\x97", "*"},       // ×
    {"\xC2\xAC", "-"},       // ¬
    {"\xE2\x89\xA0", "!="},  // ≠
    {"\xE2\x86\x90", ":-"},  // ←
    {":-", ":-"},
    {"::", "::"},
    {"->", "->"},
    {"!=", "!="},
    {"<=", "<="},
    {">=", ">="},
    {"==", "="},
    {"..", ".."},
    {"<>", "!="},
}};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const LexOptions& options) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;

  auto span_at = [&](int l, int c, int len) {
    return SourceSpan{options.file, l, c, l, c + len};
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      if (options.emit_newlines &&
          (out.empty() || out.back().kind != Token::Kind::Newline)) {
        out.push_back({Token::Kind::Newline, "\n", span_at(line, col, 1)});
      }
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      bool variable = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      out.push_back({variable ? Token::Kind::Variable : Token::Kind::Identifier, word,
                     span_at(line, col, static_cast<int>(i - start))});
      col += static_cast<int>(i - start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Token::Kind::Integer, std::string(text.substr(start, i - start)),
                     span_at(line, col, static_cast<int>(i - start))});
      col += static_cast<int>(i - start);
      continue;
    }
    bool matched = false;
    for (const auto& p : kPuncts) {
      if (text.substr(i, p.source.size()) == p.source) {
        out.push_back({Token::Kind::Punct, std::string(p.normalized), span_at(line, col, 1)});
        i += p.source.size();
        ++col;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kSingles = "()[]{},.;:=<>+-*/|#";
    if (kSingles.find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), span_at(line, col, 1)});
      ++i;
      ++col;
      continue;
    }
    throw Error("SyntaxError", std::string("unexpected character '") + c + "'",
                span_at(line, col, 1));
  }
  if (options.emit_newlines && (out.empty() || out.back().kind != Token::Kind::Newline)) {
    out.push_back({Token::Kind::Newline, "\n", span_at(line, col, 1)});
  }
  out.push_back({Token::Kind::End, "", span_at(line, col, 1)});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (peek().punct(p)) {
    next();
    return true;
  }
  return false;
}

bool TokenStream::accept_ident(std::string_view word) {
  if (peek().ident(word)) {
    next();
    return true;
  }
  return false;
}

void TokenStream::expect_punct(std::string_view p) {
  if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
}

void TokenStream::expect_ident(std::string_view word) {
  if (!accept_ident(word)) fail("expected '" + std::string(word) + "'");
}

std::string TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != Token::Kind::Identifier) fail("expected " + std::string(what));
  return next().text;
}

void TokenStream::skip_newlines() {
  while (peek().kind == Token::Kind::Newline) next();
}

void TokenStream::end_statement() {
  accept_punct(".");
  if (peek().kind == Token::Kind::End) return;
  if (peek().kind != Token::Kind::Newline) fail("expected end of line");
  skip_newlines();
}

void TokenStream::fail(const std::string& message) const { fail(message, peek()); }

void TokenStream::fail(const std::string& message, const Token& at) const {
  std::string found;
  switch (at.kind) {
    case Token::Kind::End: found = "end of input"; break;
    case Token::Kind::Newline: found = "end of line"; break;
    default: found = "'" + at.text + "'"; break;
  }
  throw Error("SyntaxError", message + ", found " + found, at.span);
}

}  // namespace corealm

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "corealm/error.hpp"

namespace corealm::km {

/// KM s-expression. Symbols keep their case; keyword symbols start with ':'.
struct SExpr {
  enum class Kind { Symbol, String, Integer, List };

  Kind kind = Kind::List;
  std::string text;  // Symbol, String
  std::int64_t value = 0;
  std::vector<SExpr> items;
  SourceSpan span;

  static SExpr symbol(std::string s);
  static SExpr string(std::string s);
  static SExpr integer(std::int64_t v);
  static SExpr list(std::vector<SExpr> items);

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_keyword() const { return is_symbol() && !text.empty() && text[0] == ':'; }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items.at(i); }

  /// Single-line textual form; strings are re-escaped.
  std::string str() const;

  friend bool operator==(const SExpr&, const SExpr&) = default;
};

/// Reads all top-level expressions. `;` starts a comment. Throws
/// Error("UnbalancedParen") pointing at the unmatched parenthesis.
std::vector<SExpr> parse_sexprs(std::string_view text, const std::string& file = "");

/// One top-level expression per line.
std::string print_sexprs(const std::vector<SExpr>& exprs);

}  // namespace corealm::km

#include "corealm/km/sexpr.hpp"

#include <cctype>

namespace corealm::km {

SExpr SExpr::symbol(std::string s) {
  SExpr e;
  e.kind = Kind::Symbol;
  e.text = std::move(s);
  return e;
}

SExpr SExpr::string(std::string s) {
  SExpr e;
  e.kind = Kind::String;
  e.text = std::move(s);
  return e;
}

SExpr SExpr::integer(std::int64_t v) {
  SExpr e;
  e.kind = Kind::Integer;
  e.value = v;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.items = std::move(items);
  return e;
}

std::string SExpr::str() const {
  switch (kind) {
    case Kind::Symbol:
      return text;
    case Kind::Integer:
      return std::to_string(value);
    case Kind::String: {
      std::string out = "\"";
      for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ' ';
        out += items[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

class Reader {
 public:
  Reader(std::string_view text, const std::string& file) : text_(text), file_(file) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) return out;
      if (text_[pos_] == ')') throw Error("UnbalancedParen", "unexpected ')'", here());
      out.push_back(read());
    }
  }

 private:
  SourceSpan here() const {
    SourceSpan s;
    s.file = file_;
    s.line = s.end_line = line_;
    s.column = static_cast<int>(pos_ - line_start_) + 1;
    s.end_column = s.column + 1;
    return s;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  SExpr read() {
    SourceSpan start = here();
    char c = text_[pos_];
    if (c == '(') {
      advance();
      SExpr e = SExpr::list({});
      e.span = start;
      while (true) {
        skip_blank();
        if (pos_ >= text_.size()) throw Error("UnbalancedParen", "'(' is never closed", start);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == '"') {
      advance();
      std::string s;
      while (true) {
        if (pos_ >= text_.size()) throw Error("SyntaxError", "unterminated string", start);
        char d = text_[pos_];
        if (d == '"') break;
        if (d == '\\' && pos_ + 1 < text_.size()) {
          advance();
          d = text_[pos_];
        }
        s += d;
        advance();
      }
      advance();
      SExpr e = SExpr::string(std::move(s));
      e.span = start;
      return e;
    }
    std::string tok;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == ';') break;
      tok += d;
      advance();
    }
    SExpr e = is_integer(tok) ? SExpr::integer(std::stoll(tok)) : SExpr::symbol(tok);
    e.span = start;
    return e;
  }

  static bool is_integer(const std::string& t) {
    std::size_t i = (t.size() > 1 && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size() || t.size() - i > 18) return false;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  int line_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text, const std::string& file) {
  return Reader(text, file).read_all();
}

std::string print_sexprs(const std::vector<SExpr>& exprs) {
  std::string out;
  for (const auto& e : exprs) out += e.str() + "\n";
  return out;
}

}  // namespace corealm::km

#include "corealm/term.hpp"

#include <algorithm>
#include <functional>

#include "corealm/error.hpp"

namespace corealm {

std::string SourceSpan::str() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  if (line > 0) {
    out += ":" + std::to_string(line) + ":" + std::to_string(column);
  }
  return out;
}

Error::Error(std::string code, const std::string& message, SourceSpan span)
    : std::runtime_error(span.valid() ? span.str() + ": " + code + ": " + message
                                      : code + ": " + message),
      code_(std::move(code)),
      detail_(message),
      span_(std::move(span)) {}

Term Term::symbol(std::string name) {
  Term t;
  t.kind = Kind::Symbol;
  t.name = std::move(name);
  return t;
}

Term Term::variable(std::string name) {
  Term t;
  t.kind = Kind::Variable;
  t.name = std::move(name);
  return t;
}

Term Term::integer(std::int64_t value) {
  Term t;
  t.kind = Kind::Integer;
  t.value = value;
  return t;
}

Term Term::function(std::string name, std::vector<Term> args) {
  if (args.empty()) return symbol(std::move(name));
  Term t;
  t.kind = Kind::Function;
  t.name = std::move(name);
  t.args = std::move(args);
  return t;
}

Term Term::arith(char op, Term lhs, Term rhs) {
  Term t;
  t.kind = Kind::Arith;
  t.name = std::string(1, op);
  t.args = {std::move(lhs), std::move(rhs)};
  return t;
}

bool Term::is_ground() const {
  if (kind == Kind::Variable) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (kind == Kind::Variable) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    return;
  }
  for (const auto& a : args) a.collect_variables(out);
}

bool Term::mentions_variable(const std::string& var) const {
  if (kind == Kind::Variable) return name == var;
  return std::any_of(args.begin(), args.end(), [&](const Term& a) { return a.mentions_variable(var); });
}

Term Term::substitute(const std::map<std::string, Term>& binding) const {
  if (kind == Kind::Variable) {
    auto it = binding.find(name);
    return it == binding.end() ? *this : it->second;
  }
  if (args.empty()) return *this;
  Term out = *this;
  for (auto& a : out.args) a = a.substitute(binding);
  return out;
}

std::string Term::str(bool spaced) const {
  switch (kind) {
    case Kind::Symbol:
    case Kind::Variable:
      return name;
    case Kind::Integer:
      return std::to_string(value);
    case Kind::Arith:
      return args[0].str(spaced) + name + args[1].str(spaced);
    case Kind::Function: {
      std::string out = name + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += spaced ? ", " : ",";
        out += args[i].str(spaced);
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

int kind_rank(Term::Kind k) {
  switch (k) {
    case Term::Kind::Integer: return 0;
    case Term::Kind::Symbol: return 1;
    case Term::Kind::Function: return 2;
    case Term::Kind::Variable: return 3;
    case Term::Kind::Arith: return 4;
  }
  return 5;
}

}  // namespace

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = kind_rank(a.kind) <=> kind_rank(b.kind); c != 0) return c;
  if (a.kind == Term::Kind::Integer) return a.value <=> b.value;
  if (a.kind == Term::Kind::Function) {
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  }
  if (auto c = a.name <=> b.name; c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.name) ^ (static_cast<std::size_t>(t.kind) << 1);
  h ^= std::hash<std::int64_t>{}(t.value) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  for (const auto& a : t.args) h ^= (*this)(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace corealm

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace corealm {

/// First-order term shared by the ALM and ASP layers.
///
/// Symbols start with a lowercase letter, variables with an uppercase letter
/// or underscore. Arithmetic terms only occur in ASP rules (`I+1`).
struct Term {
  enum class Kind { Symbol, Variable, Integer, Function, Arith };

  Kind kind = Kind::Symbol;
  std::string name;        // Symbol, Variable, Function name; Arith operator
  std::int64_t value = 0;  // Integer
  std::vector<Term> args;  // Function arguments; Arith operands (2)

  static Term symbol(std::string name);
  static Term variable(std::string name);
  static Term integer(std::int64_t value);
  static Term function(std::string name, std::vector<Term> args);
  static Term arith(char op, Term lhs, Term rhs);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_ground() const;
  bool is_constant() const { return kind == Kind::Symbol; }

  /// Functor name for symbols and functions, empty otherwise.
  const std::string& functor() const { return name; }
  std::size_t arity() const { return kind == Kind::Function ? args.size() : 0; }

  void collect_variables(std::vector<std::string>& out) const;
  bool mentions_variable(const std::string& var) const;
  Term substitute(const std::map<std::string, Term>& binding) const;

  /// Textual form. `spaced` inserts a blank after argument commas (ALM style).
  std::string str(bool spaced = false) const;

  friend bool operator==(const Term&, const Term&) = default;
  /// Total order: integers < symbols < functions, then by name/value/args.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

}  // namespace corealm

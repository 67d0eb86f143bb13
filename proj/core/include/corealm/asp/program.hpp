#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corealm/term.hpp"

namespace corealm::asp {

/// `p(t1, ..., tn)` or, with classical negation, `-p(t1, ..., tn)`.
struct Atom {
  std::string predicate;
  std::vector<Term> args;
  bool negated = false;

  static Atom make(std::string predicate, std::vector<Term> args, bool negated = false);
  /// Ground atoms are interned as terms whose functor carries the `-`.
  Term key() const;
  static Atom from_key(const Term& key);
  bool is_ground() const;
  std::string str() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Body element: an atom, optionally under default negation, or a comparison
/// between two terms.
struct BodyLiteral {
  enum class Kind { Atom, Comparison };

  Kind kind = Kind::Atom;
  Atom atom;
  bool naf = false;  // `not`
  std::string op;    // =, !=, <, <=, >, >=
  Term lhs;
  Term rhs;

  static BodyLiteral pos(Atom a);
  static BodyLiteral neg(Atom a);
  static BodyLiteral compare(Term lhs, std::string op, Term rhs);
  std::string str() const;

  friend bool operator==(const BodyLiteral&, const BodyLiteral&) = default;
};

/// `atom : cond1, ..., condn` inside a choice head.
struct ChoiceElement {
  Atom atom;
  std::vector<BodyLiteral> condition;  // positive atoms and comparisons only

  friend bool operator==(const ChoiceElement&, const ChoiceElement&) = default;
};

struct Rule {
  enum class Kind { Normal, Constraint, Choice };

  Kind kind = Kind::Normal;
  Atom head;                            // Normal
  std::vector<ChoiceElement> elements;  // Choice
  int lower = 0;                        // Choice bounds; upper < 0 means none
  int upper = -1;
  std::vector<BodyLiteral> body;

  static Rule fact(Atom head);
  static Rule normal(Atom head, std::vector<BodyLiteral> body);
  static Rule constraint(std::vector<BodyLiteral> body);
  static Rule choice(std::vector<ChoiceElement> elements, int lower, int upper, std::vector<BodyLiteral> body);

  bool is_fact() const { return kind == Kind::Normal && body.empty(); }
  std::string str() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct AspProgram {
  std::vector<Atom> facts;
  std::vector<Rule> rules;
  /// Sort -> ground instances, as used to quantify rules.
  std::map<std::string, std::vector<Term>> sorts;
  int horizon = 0;
  std::vector<std::string> warnings;

  /// Facts followed by rules, in order.
  std::vector<Rule> all_rules() const;
};

/// Text in the usual logic-programming syntax: one statement per line,
/// facts first, then rules, in program order.
std::string emit_text(const AspProgram& program);

/// Reads the dialect written by emit_text (facts, normal rules, constraints,
/// choice rules with conditional elements and bounds, comparisons, `I+1`
/// arithmetic). Throws Error("SyntaxError").
AspProgram parse_program(std::string_view text, const std::string& file = "");

/// Evaluates integer arithmetic inside a ground term. Throws
/// Error("ArithmeticError") on a non-integer operand or division by zero.
Term evaluate(const Term& t);

/// Compares two ground terms with one of =, !=, <, <=, >, >=.
bool compare(const Term& lhs, const std::string& op, const Term& rhs);

}  // namespace corealm::asp

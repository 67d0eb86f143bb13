#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corealm/error.hpp"
#include "corealm/term.hpp"

namespace corealm::alm {

inline constexpr const char* kUniverse = "universe";
inline constexpr const char* kActions = "actions";
inline constexpr const char* kBooleans = "booleans";

bool is_predefined_sort(const std::string& name);

/// `name : s1 * ... * sn -> range` attached to a sort declaration. With no
/// argument sorts the attribute is functional (`actor : agents`, written
/// `actor(X) = A`); otherwise it is relational with a boolean range
/// (`object : entity -> booleans`, written `object(X, A)`).
struct AttributeDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  std::string range;
  SourceSpan span;

  bool functional() const { return arg_sorts.empty() && range != kBooleans; }
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct SortDecl {
  std::vector<std::string> names;
  std::vector<std::string> parents;
  std::vector<AttributeDecl> attributes;
  SourceSpan span;

  friend bool operator==(const SortDecl&, const SortDecl&) = default;
};

enum class FunctionKind { BasicFluent, DefinedFluent, BasicStatic, DefinedStatic };

bool is_fluent(FunctionKind k);
bool is_defined(FunctionKind k);
std::string to_string(FunctionKind k);

struct FunctionDecl {
  std::string name;
  FunctionKind kind = FunctionKind::BasicFluent;
  std::vector<std::string> arg_sorts;
  std::string range;
  SourceSpan span;

  friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

enum class LiteralKind {
  Boolean,     // f(t1, ..., tn) or -f(t1, ..., tn)
  Value,       // f(t1, ..., tn) = v or f(t1, ..., tn) != v
  Instance,    // instance(t, s) or -instance(t, s)
  Comparison,  // t1 = t2 or t1 != t2
};

struct Literal {
  LiteralKind kind = LiteralKind::Boolean;
  /// Classical negation for Boolean/Instance; `!=` for Value/Comparison.
  bool negated = false;
  /// Function name (Boolean/Value) or sort name (Instance).
  std::string name;
  /// Function arguments; for Instance the single instance term; for
  /// Comparison the left- and right-hand sides.
  std::vector<Term> args;
  /// Right-hand side of a Value literal.
  Term value;
  SourceSpan span;

  static Literal boolean(std::string fn, std::vector<Term> args, bool negated = false);
  static Literal equals(std::string fn, std::vector<Term> args, Term value, bool negated = false);
  static Literal instance(Term t, std::string sort, bool negated = false);
  static Literal compare(Term lhs, Term rhs, bool negated);

  std::string str() const;
  void collect_variables(std::vector<std::string>& out) const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class AxiomKind { DynamicCausalLaw, StateConstraint, Executability, Definition };

std::string to_string(AxiomKind k);

struct Axiom {
  AxiomKind kind = AxiomKind::StateConstraint;
  /// Action term of `occurs(X)` for causal laws and executability conditions.
  Term trigger;
  /// Head literal; empty means `false` (state constraints) or the
  /// `impossible` shape (executability).
  std::optional<Literal> head;
  std::vector<Literal> body;
  SourceSpan span;

  std::string str() const;
  std::vector<std::string> variables() const;

  friend bool operator==(const Axiom&, const Axiom&) = default;
};

struct ModuleDecl {
  std::string name;
  std::vector<std::string> depends_on;
  std::vector<SortDecl> sorts;
  std::vector<FunctionDecl> functions;
  std::vector<Axiom> axioms;
  bool optional = false;
  SourceSpan span;

  friend bool operator==(const ModuleDecl&, const ModuleDecl&) = default;
};

/// `attr = v` (functional) or `attr(a1, ..., an) = v` inside an instance
/// declaration; also used for static values in the structure.
struct Assignment {
  std::string name;
  std::vector<Term> args;
  Term value;
  SourceSpan span;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// `n1, ..., nk in sort` followed by attribute assignments. A declaration
/// whose names contain variables is an instance schema.
struct InstanceDecl {
  std::vector<Term> names;
  std::string sort;
  std::vector<Assignment> assignments;
  SourceSpan span;

  bool is_schema() const;
  friend bool operator==(const InstanceDecl&, const InstanceDecl&) = default;
};

struct Structure {
  std::string name;
  std::vector<InstanceDecl> instances;
  std::vector<Assignment> statics;

  friend bool operator==(const Structure&, const Structure&) = default;
};

struct Import {
  std::string library;
  std::string module;
  SourceSpan span;

  friend bool operator==(const Import&, const Import&) = default;
};

struct SystemDescription {
  std::string name;
  std::string theory_name;
  std::vector<Import> imports;
  /// Theory modules: inline modules, plus the closure of imported modules
  /// once imports are resolved.
  std::vector<ModuleDecl> modules;
  Structure structure;

  friend bool operator==(const SystemDescription&, const SystemDescription&) = default;
};

}  // namespace corealm::alm

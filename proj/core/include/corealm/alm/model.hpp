#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corealm/alm/ast.hpp"

namespace corealm::alm {

struct AttributeInfo {
  std::string owner;
  AttributeDecl decl;

  friend bool operator==(const AttributeInfo&, const AttributeInfo&) = default;
};

/// Signature of a function or attribute as it is applied in literals: the
/// argument sorts (owner first, for attributes) and the range.
struct Signature {
  std::string name;
  std::vector<std::string> args;
  std::string range;
  bool attribute = false;
  FunctionKind kind = FunctionKind::BasicStatic;  // attributes behave as basic statics

  bool boolean() const { return range == kBooleans; }
  bool fluent() const { return !attribute && is_fluent(kind); }
  bool defined() const { return !attribute && is_defined(kind); }
};

/// Symbol tables over a set of modules and, optionally, a structure.
/// Immutable once built.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(const std::vector<ModuleDecl>& modules, const Structure* structure = nullptr);

  bool has_sort(const std::string& sort) const { return parents_.contains(sort); }
  const std::vector<std::string>& sorts() const { return sort_order_; }
  const std::vector<std::string>& parents(const std::string& sort) const;
  /// Reflexive-transitive subsort test.
  bool is_subsort(const std::string& sub, const std::string& super) const;
  /// `sort` and all its ancestors.
  std::set<std::string> ancestors(const std::string& sort) const;

  const FunctionDecl* function(const std::string& name) const;
  const std::vector<FunctionDecl>& functions() const { return functions_; }
  /// All declarations of the attribute, in declaration order.
  std::vector<const AttributeInfo*> attributes(const std::string& name) const;
  /// The declaration applicable to instances of `sort`, if any.
  const AttributeInfo* attribute_for(const std::string& name, const std::string& sort) const;
  const std::vector<AttributeInfo>& all_attributes() const { return attributes_; }
  std::optional<Signature> signature(const std::string& name) const;

  /// Instances declared in the structure (after schema expansion) whose sort
  /// is a subsort of `sort`, in declaration order. `booleans` yields
  /// {true, false}.
  std::vector<Term> instances_of(const std::string& sort) const;
  bool is_instance(const Term& t, const std::string& sort) const;
  /// Sorts an instance was declared in directly.
  const std::vector<std::string>* declared_sorts(const Term& instance) const;
  const std::vector<std::pair<Term, std::vector<std::string>>>& instances() const { return instances_; }

 private:
  std::vector<std::string> sort_order_;
  std::map<std::string, std::vector<std::string>> parents_;
  std::vector<FunctionDecl> functions_;
  std::vector<AttributeInfo> attributes_;
  std::vector<std::pair<Term, std::vector<std::string>>> instances_;
};

struct Diagnostic {
  std::string code;  // e.g. "sort cycle", "sort mismatch"
  std::string message;
  SourceSpan span;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  std::vector<Diagnostic> warnings;

  bool ok() const { return diagnostics.empty(); }
  bool has(const std::string& code) const;
  std::string str() const;
};

/// Checks the well-formedness of a system description whose imports have
/// already been resolved. Diagnostics are data; this never throws.
ValidationReport validate(const SystemDescription& sd);
/// Checks a stand-alone module set (no structure).
ValidationReport validate(const std::vector<ModuleDecl>& modules);

/// Names of `root` and its transitive dependencies, dependencies first.
/// Throws UnknownModule or DependencyCycle.
std::vector<std::string> dependency_order(const std::vector<ModuleDecl>& theory, const std::string& root,
                                          bool include_optional = false);

/// Merges `root` with all of its ancestors into one module named `root`.
/// Declarations are deduplicated by (name, signature); optional leaf modules
/// whose dependencies lie inside the closure are merged only on request.
ModuleDecl flatten_theory(const std::vector<ModuleDecl>& theory, const std::string& root,
                          bool include_optional = false);

/// Merges every module of `theory` (in dependency order) into one module.
ModuleDecl merge_theory(const std::vector<ModuleDecl>& theory, const std::string& name);

/// Replaces instance schemas by their ground instances. A schema variable
/// whose sort has no instances makes the schema expand to nothing and adds a
/// warning. Throws Error("UntypedSchemaVariable") if a variable's sort cannot
/// be inferred from the schema's attribute assignments.
Structure expand_schemas(const Structure& structure, const std::vector<ModuleDecl>& theory,
                         std::vector<std::string>* warnings = nullptr);

/// Sorts each variable of an axiom is constrained to by its argument
/// positions, `instance/2` literals, and the `occurs` trigger.
std::map<std::string, std::vector<std::string>> variable_sorts(const Axiom& axiom, const Vocabulary& vocab);

}  // namespace corealm::alm

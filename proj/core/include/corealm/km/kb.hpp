#pragma once

#include <string>
#include <vector>

#include "corealm/km/sexpr.hpp"

namespace corealm::km {

/// `(s has (instance-of (c)) (domain (c1)) (range (c2)) (cardinality (k))
/// (fluent-status (st)))`.
struct SlotDef {
  std::string name;
  std::string instance_of;
  std::string domain;
  std::string range;
  std::string cardinality;    // "N-to-N", "N-to-1", ...
  std::string fluent_status;  // "*Inertial-Fluent", "*Non-Fluent"
  SourceSpan span;

  friend bool operator==(const SlotDef&, const SlotDef&) = default;
};

/// WordNet 2.0 synonym entry `(:triple "obstruct" 2 "v")`.
struct Synset {
  std::string word;
  int sense = 0;
  std::string pos;

  friend bool operator==(const Synset&, const Synset&) = default;
};

enum class SpecKind {
  A,                // (a C)
  MustBeA,          // (must-be-a C)
  MustntBeA,        // (mustnt-be-a C)
  AtMost,           // (at-most n C)
  AtLeast,          // (at-least n C)
  Exactly,          // (exactly n C)
  TheAttrOfSelf,    // (the attr2 of Self)
  ExcludedValues,   // (excluded-values (the attr2 of Self))
  UnifyConstraint,  // (constraint (TheValue & (the attr2 of Self)))
};

std::string to_string(SpecKind k);

struct AttrSpec {
  SpecKind kind = SpecKind::A;
  int n = 0;
  std::string cls;    // class argument, if any
  std::string attr2;  // other attribute, if any

  friend bool operator==(const AttrSpec&, const AttrSpec&) = default;
};

enum class ClauseKind {
  AttrSpec,
  PcsList,
  NcsList,
  AddList,
  DelList,
  ResultingState,
  Defeats,
  SoftPcsList,
  PreparatoryEvent,
};

std::string to_string(ClauseKind k);

/// One slot entry of an `(every C has ...)` frame.
struct EveryClause {
  ClauseKind kind = ClauseKind::AttrSpec;
  std::string attr;            // AttrSpec: the slot being constrained
  std::vector<AttrSpec> specs; // AttrSpec
  std::string state;           // ResultingState: the state class
  std::vector<SExpr> items;    // list clauses; Defeats/PreparatoryEvent expressions
  SourceSpan span;

  friend bool operator==(const EveryClause&, const EveryClause&) = default;
};

enum class ClassKind { Action, State, Entity };

std::string to_string(ClassKind k);

struct ClassDecl {
  std::string name;
  std::vector<std::string> superclasses;
  std::vector<Synset> synsets;
  ClassKind kind = ClassKind::Entity;
  std::vector<EveryClause> every;
  SourceSpan span;

  const EveryClause* find(ClauseKind k) const;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

/// Content outside the supported fragment (roles, subevents, ...).
struct Unsupported {
  std::string name;
  SourceSpan span;
};

struct KmKb {
  std::vector<SlotDef> slots;
  std::vector<ClassDecl> classes;
  std::vector<Unsupported> unsupported;
  /// Slot entries seen in all frames, and how many of them were lifted.
  std::size_t input_clauses = 0;
  std::size_t lifted_clauses = 0;

  const SlotDef* slot(const std::string& name) const;
  const ClassDecl* cls(const std::string& name) const;
  /// Reflexive-transitive superclass test over declared classes.
  bool is_subclass(const std::string& sub, const std::string& super) const;
};

/// Lifts parsed frames into typed declarations. Constructs outside the
/// fragment are recorded in `unsupported`, never dropped silently.
KmKb lift_km(const std::vector<SExpr>& exprs);

/// Convenience: parse and lift several texts as one knowledge base.
KmKb load_km(const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace corealm::km

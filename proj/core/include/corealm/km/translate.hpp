#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corealm/alm/ast.hpp"
#include "corealm/alm/model.hpp"
#include "corealm/km/kb.hpp"

namespace corealm::km {

/// Declarations and axioms produced for one KM slot or class.
struct TranslationOutput {
  std::string source;  // KM name of the translated slot or class
  std::vector<alm::SortDecl> sorts;
  std::vector<alm::FunctionDecl> functions;
  std::vector<alm::AttributeInfo> attributes;  // owner sort + declaration
  std::vector<alm::Axiom> axioms;
  std::vector<alm::Axiom> optional_axioms;
  std::vector<std::string> notes;
  std::vector<Synset> synsets;
  std::string symbol;  // ALM action class or fluent named by the synsets

  void append(const TranslationOutput& other);
};

/// Data the translation needs that the KM text does not carry.
struct TranslationConfig {
  /// (state class, participant relation) -> preposition, e.g.
  /// (Be-Blocked, instrument) -> "with".
  std::map<std::pair<std::string, std::string>, std::string> prepositions;
  /// States expressed as the negation of another state's fluent, e.g.
  /// Be-Inaccessible -> Be-Accessible gives -is_accessible(O).
  std::map<std::string, std::string> state_negations;

  static TranslationConfig from_json(const std::string& text);
};

/// Editorial additions applied after the mechanical translation.
struct Patch {
  std::map<std::string, std::string> rename;  // KM class -> ALM name
  std::string km;                             // extra KM frames
  std::map<std::string, std::vector<std::string>> axioms;  // KM class -> ALM axioms

  static Patch from_json(const std::string& text);
};

/// ALM spelling of a KM name: lower case, '-' -> '_', Action/Event ->
/// actions, Thing -> universe.
std::string alm_name(const std::string& km_name);

TranslationOutput translate_slot(const SlotDef& slot);
TranslationOutput translate_state(const ClassDecl& state, const KmKb& kb, const TranslationConfig& config);
TranslationOutput translate_action(const ClassDecl& action, const KmKb& kb, const TranslationConfig& config,
                                   const Patch* patch = nullptr);
TranslationOutput translate_attr_spec(const ClassDecl& cls, const std::string& attr, const AttrSpec& spec,
                                      const KmKb& kb);
TranslationOutput translate_precondition(const ClassDecl& cls, const EveryClause& clause, const KmKb& kb,
                                         const TranslationConfig& config);
TranslationOutput translate_effects(const ClassDecl& cls, const KmKb& kb, const TranslationConfig& config);
TranslationOutput translate_defeasible(const ClassDecl& cls, const EveryClause& clause, const KmKb& kb,
                                       const TranslationConfig& config);

/// Entities, then slots, then states, then actions, each group in
/// superclass order. The patch's extra KM must already be part of `kb`.
std::vector<TranslationOutput> translate_kb(const KmKb& kb, const TranslationConfig& config,
                                            const Patch* patch = nullptr);

/// Builds a module from translation outputs, leaving out anything already
/// declared in `ancestors`. Optional axioms are ignored here.
alm::ModuleDecl build_module(const std::vector<TranslationOutput>& outputs, const std::string& name,
                             const std::vector<std::string>& depends_on,
                             const std::vector<alm::ModuleDecl>& ancestors = {});

/// The optional leaf module holding the defeasible axioms of `outputs`.
alm::ModuleDecl build_optional_module(const std::vector<TranslationOutput>& outputs, const std::string& name,
                                      const std::string& parent);

/// Advisory check over pairs of opposite actions (KM names): flags a pair
/// when one action has an executability condition over a fluent and the
/// other has none over that fluent.
std::vector<std::string> opposites_report(const std::vector<TranslationOutput>& outputs,
                                          const std::vector<std::pair<std::string, std::string>>& opposites);

}  // namespace corealm::km

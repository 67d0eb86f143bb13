#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>

#include "corealm/alm/model.hpp"
#include "corealm/alm/printer.hpp"
#include "corealm/km/kb.hpp"
#include "corealm/km/sexpr.hpp"
#include "corealm/km/translate.hpp"
#include "test_util.hpp"

using namespace corealm;
using namespace corealm::km;
using corealm::test::read_file;

namespace {

std::string data(const std::string& rel) { return std::string(COREALM_DATA_DIR) + "/" + rel; }

const char* kIsAt = R"((is-at has
  (instance-of (Spatial-Relation))
  (domain (Spatial-Entity))
  (range (Spatial-Entity))
  (cardinality (N-to-N))
  (fluent-status (*Inertial-Fluent))))";

// Base knowledge: the entity hierarchy, participant slots, the obstruction
// frames and the accessibility states.
std::vector<std::pair<std::string, std::string>> base_files() {
  return {{"core.km", read_file(data("km/core.km"))},
          {"obstruction.km", read_file(data("km/obstruction.km"))},
          {"accessibility.km", read_file(data("km/accessibility.km"))}};
}

KmKb kb_with(const std::string& extra) {
  auto files = base_files();
  files.emplace_back("extra.km", extra);
  return load_km(files);
}

TranslationConfig config() { return TranslationConfig::from_json(read_file(data("translation.json"))); }

std::vector<std::string> axiom_texts(const TranslationOutput& o) {
  std::vector<std::string> out;
  for (const auto& a : o.axioms) out.push_back(a.str());
  return out;
}

bool has_axiom(const TranslationOutput& o, const std::string& text) {
  auto all = axiom_texts(o);
  return std::ranges::find(all, text) != all.end();
}

const alm::FunctionDecl* function(const TranslationOutput& o, const std::string& name) {
  for (const auto& f : o.functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

// --- s-expressions ---------------------------------------------------------

TEST(SExpr, NestedWithString) {
  auto es = parse_sexprs(R"((a (b "c")))");
  ASSERT_EQ(es.size(), 1u);
  ASSERT_EQ(es[0].size(), 2u);
  EXPECT_TRUE(es[0][0].is_symbol("a"));
  ASSERT_TRUE(es[0][1].is_list());
  EXPECT_EQ(es[0][1][1].kind, SExpr::Kind::String);
  EXPECT_EQ(es[0][1][1].text, "c");
}

TEST(SExpr, SlotDefinitionShape) {
  auto es = parse_sexprs(kIsAt);
  ASSERT_EQ(es.size(), 1u);
  // Name, `has` and five slot entries.
  EXPECT_EQ(es[0].size(), 7u);
  EXPECT_TRUE(es[0][1].is_symbol("has"));
}

TEST(SExpr, UnbalancedParen) {
  EXPECT_EQ(error_code([] { parse_sexprs("(a (b)"); }), "UnbalancedParen");
  EXPECT_EQ(error_code([] { parse_sexprs("(a))"); }), "UnbalancedParen");
}

TEST(SExpr, CommentsAndKeywords) {
  auto es = parse_sexprs("; header\n(:triple \"Obstruct\" 2 \"v\") ; trailing\n");
  ASSERT_EQ(es.size(), 1u);
  EXPECT_TRUE(es[0][0].is_keyword());
  EXPECT_EQ(es[0][1].text, "Obstruct");
  EXPECT_EQ(es[0][2].value, 2);
}

TEST(SExpr, PrintParseIdentityOnShippedSources) {
  for (const auto& entry : std::filesystem::directory_iterator(data("km"))) {
    auto trees = parse_sexprs(read_file(entry.path().string()), entry.path().string());
    EXPECT_EQ(parse_sexprs(print_sexprs(trees)), trees) << entry.path();
  }
}

TEST(SExpr, PrintParseIdentityOnEscapes) {
  auto trees = parse_sexprs(R"((x "a \"quoted\" word" -3 (y)))");
  EXPECT_EQ(parse_sexprs(print_sexprs(trees)), trees);
}

// --- lifting ---------------------------------------------------------------

TEST(LiftKm, SlotDefinition) {
  auto kb = lift_km(parse_sexprs(kIsAt));
  ASSERT_EQ(kb.slots.size(), 1u);
  const SlotDef& s = kb.slots[0];
  EXPECT_EQ(s.name, "is-at");
  EXPECT_EQ(s.cardinality, "N-to-N");
  EXPECT_EQ(s.fluent_status, "*Inertial-Fluent");
  EXPECT_EQ(s.domain, "Spatial-Entity");
  EXPECT_EQ(s.range, "Spatial-Entity");
}

TEST(LiftKm, ObstructedState) {
  auto kb = load_km(base_files());
  const ClassDecl* c = kb.cls("Be-Obstructed");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->kind, ClassKind::State);
  EXPECT_EQ(c->superclasses, std::vector<std::string>{"Be-Inaccessible"});
  ASSERT_EQ(c->every.size(), 1u);
  EXPECT_EQ(c->every[0].kind, ClauseKind::AttrSpec);
  EXPECT_EQ(c->every[0].attr, "object");
  ASSERT_EQ(c->every[0].specs.size(), 1u);
  EXPECT_EQ(c->every[0].specs[0], (AttrSpec{SpecKind::A, 0, "Entity", ""}));
  EXPECT_EQ(c->synsets, std::vector<Synset>{(Synset{"obstructed", 1, "a"})});
}

TEST(LiftKm, ObstructAction) {
  auto kb = load_km(base_files());
  const ClassDecl* c = kb.cls("Obstruct");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->kind, ClassKind::Action);
  EXPECT_EQ(c->synsets.size(), 6u);
  const EveryClause* object = c->find(ClauseKind::AttrSpec);
  ASSERT_NE(object, nullptr);
  EXPECT_EQ(object->specs[0], (AttrSpec{SpecKind::A, 0, "Tangible-Entity", ""}));
  ASSERT_NE(c->find(ClauseKind::ResultingState), nullptr);
  EXPECT_EQ(c->find(ClauseKind::ResultingState)->state, "Be-Obstructed");
  ASSERT_NE(c->find(ClauseKind::AddList), nullptr);
  EXPECT_EQ(c->find(ClauseKind::AddList)->items.size(), 2u);
  EXPECT_NE(c->find(ClauseKind::PreparatoryEvent), nullptr);
}

TEST(LiftKm, SpecVariants) {
  auto kb = lift_km(parse_sexprs(R"((every C has
    (a1 ((must-be-a X) (mustnt-be-a Y) (at-most 2 X) (at-least 1 X) (exactly 0 X)))
    (a2 ((the a1 of Self) (excluded-values (the a3 of Self)) (constraint (TheValue & (the a4 of Self)))))))"));
  const ClassDecl* c = kb.cls("C");
  ASSERT_NE(c, nullptr);
  ASSERT_EQ(c->every.size(), 2u);
  std::vector<SpecKind> kinds;
  for (const auto& cl : c->every) {
    for (const auto& s : cl.specs) kinds.push_back(s.kind);
  }
  EXPECT_EQ(kinds, (std::vector<SpecKind>{SpecKind::MustBeA, SpecKind::MustntBeA, SpecKind::AtMost, SpecKind::AtLeast,
                                          SpecKind::Exactly, SpecKind::TheAttrOfSelf, SpecKind::ExcludedValues,
                                          SpecKind::UnifyConstraint}));
}

TEST(LiftKm, UnsupportedIsReported) {
  auto kb = lift_km(parse_sexprs("(every Run has (subevents ((a Step))) (object ((a Entity))))\n(defun f)"));
  EXPECT_EQ(kb.unsupported.size(), 2u);
  EXPECT_EQ(kb.unsupported[0].name, "subevents");
  EXPECT_EQ(kb.lifted_clauses + kb.unsupported.size(), kb.input_clauses);
}

TEST(LiftKm, NoClauseDroppedInShippedSources) {
  for (const auto& entry : std::filesystem::directory_iterator(data("km"))) {
    auto kb = lift_km(parse_sexprs(read_file(entry.path().string())));
    EXPECT_EQ(kb.lifted_clauses + kb.unsupported.size(), kb.input_clauses) << entry.path();
  }
}

// --- slots -----------------------------------------------------------------

TEST(TranslateSlot, SpatialRelationIsBinaryFluent) {
  auto kb = lift_km(parse_sexprs(kIsAt));
  auto out = translate_slot(kb.slots[0]);
  ASSERT_EQ(out.functions.size(), 1u);
  EXPECT_EQ(alm::print(out.functions[0]), "fluent basic is_at : spatial_entity * spatial_entity -> booleans");
  EXPECT_TRUE(out.attributes.empty());
}

TEST(TranslateSlot, ParticipantRelationIsActionAttribute) {
  auto kb = load_km(base_files());
  auto out = translate_slot(*kb.slot("object"));
  EXPECT_TRUE(out.functions.empty());
  ASSERT_EQ(out.attributes.size(), 1u);
  EXPECT_EQ(out.attributes[0].owner, "actions");
  EXPECT_EQ(alm::print(out.attributes[0].decl), "object : entity -> booleans");
}

TEST(TranslateSlot, NonFluentFunctionalIsStatic) {
  auto kb = lift_km(parse_sexprs(R"((mass has (instance-of (Property)) (domain (Entity)) (range (Number))
    (cardinality (N-to-1)) (fluent-status (*Non-Fluent))))"));
  auto out = translate_slot(kb.slots[0]);
  ASSERT_EQ(out.functions.size(), 1u);
  EXPECT_EQ(out.functions[0].kind, alm::FunctionKind::BasicStatic);
  EXPECT_EQ(alm::print(out.functions[0]), "static basic mass : entity -> number");
}

TEST(TranslateSlot, OneToManyRejected) {
  auto kb = lift_km(parse_sexprs(R"((parts has (instance-of (Relation)) (domain (Entity)) (range (Entity))
    (cardinality (1-to-N)) (fluent-status (*Inertial-Fluent))))"));
  EXPECT_EQ(error_code([&] { translate_slot(kb.slots[0]); }), "UnsupportedCardinality");
}

// --- states ----------------------------------------------------------------

TEST(TranslateState, ObstructedStateWithSubclassConstraint) {
  auto kb = kb_with("");
  auto out = translate_state(*kb.cls("Be-Obstructed"), kb, config());
  ASSERT_NE(function(out, "is_obstructed"), nullptr);
  EXPECT_EQ(alm::print(*function(out, "is_obstructed")), "fluent basic is_obstructed : spatial_entity -> booleans");
  EXPECT_TRUE(has_axiom(out, "-is_accessible(O) if is_obstructed(O).")) << alm::print(build_module({out}, "m", {}));
}

TEST(TranslateState, TwoRelationsGiveTwoFluentsAndTwoConnectingAxioms) {
  auto kb = kb_with(R"((Be-Blocked has (superclasses (State)))
(every Be-Blocked has (object ((a Spatial-Entity))) (instrument ((a Entity)))))");
  auto out = translate_state(*kb.cls("Be-Blocked"), kb, config());
  ASSERT_NE(function(out, "is_blocked"), nullptr);
  ASSERT_NE(function(out, "blocked_with"), nullptr);
  EXPECT_EQ(alm::print(*function(out, "blocked_with")),
            "fluent basic blocked_with : spatial_entity * entity -> booleans");
  EXPECT_EQ(out.functions.size(), 2u);
  EXPECT_EQ(out.axioms.size(), 2u);
  EXPECT_TRUE(has_axiom(out, "is_blocked(O) if blocked_with(O, I)."));
  EXPECT_TRUE(has_axiom(out, "-blocked_with(O, I) if -is_blocked(O)."));
}

TEST(TranslateState, ObjectOnlyStateGivesOneFluentNoAxioms) {
  auto kb = kb_with(R"((Be-Wet has (superclasses (State)))
(every Be-Wet has (object ((a Tangible-Entity)))))");
  auto out = translate_state(*kb.cls("Be-Wet"), kb, config());
  EXPECT_EQ(out.functions.size(), 1u);
  EXPECT_TRUE(out.axioms.empty());
}

TEST(TranslateState, MissingObjectRelation) {
  auto kb = kb_with("(Be-Odd has (superclasses (State)))");
  EXPECT_EQ(error_code([&] { translate_state(*kb.cls("Be-Odd"), kb, config()); }), "MissingObjectRelation");
}

TEST(TranslateState, UnknownPreposition) {
  auto kb = kb_with(R"((Be-Held has (superclasses (State)))
(every Be-Held has (object ((a Spatial-Entity))) (instrument ((a Entity)))))");
  EXPECT_EQ(error_code([&] { translate_state(*kb.cls("Be-Held"), kb, config()); }), "UnknownPreposition");
}

// --- actions ---------------------------------------------------------------

TEST(TranslateAction, ObstructCausalLawAndOptionalAxiom) {
  auto kb = kb_with("");
  auto out = translate_action(*kb.cls("Obstruct"), kb, config());
  ASSERT_FALSE(out.sorts.empty());
  EXPECT_EQ(out.sorts[0].names, std::vector<std::string>{"obstruct"});
  EXPECT_EQ(out.sorts[0].parents, std::vector<std::string>{"make_inaccessible"});
  EXPECT_TRUE(has_axiom(out, "occurs(X) causes is_obstructed(A) if instance(X, obstruct), object(X, A)."));
  ASSERT_EQ(out.optional_axioms.size(), 1u);
  EXPECT_EQ(out.optional_axioms[0].str(),
            "impossible occurs(X) if instance(X, obstruct), agent(X, A1), object(X, A2), -is_at(A1, A2).");
  EXPECT_EQ(out.symbol, "obstruct");
}

TEST(TranslateAction, NoClausesGivesSortOnly) {
  auto kb = kb_with("(Wave has (superclasses (Action)))");
  auto out = translate_action(*kb.cls("Wave"), kb, config());
  EXPECT_EQ(out.sorts.size(), 1u);
  EXPECT_EQ(out.sorts[0].parents, std::vector<std::string>{"actions"});
  EXPECT_TRUE(out.functions.empty());
  EXPECT_TRUE(out.axioms.empty());
}

TEST(TranslateAction, DelListNegatesDefeatedState) {
  auto kb = kb_with("");
  auto out = translate_effects(*kb.cls("Unobstruct"), kb, config());
  EXPECT_TRUE(has_axiom(
      out, "occurs(X) causes -is_obstructed(A) if instance(X, unobstruct), object(X, A), is_obstructed(A)."));
}

TEST(TranslateAction, ReferencingUndeclaredStateFails) {
  auto kb = kb_with(R"((Spoil has (superclasses (Action)))
(every Spoil has (resulting-state ((a Be-Spoiled)))
  (add-list ((:triple (the resulting-state of Self) object (the object of Self))))))");
  EXPECT_EQ(error_code([&] { translate_kb(kb, config()); }), "UnknownState");
}

// --- attribute specifications ------------------------------------------------

TEST(TranslateAttrSpec, ExistenceGivesDefinitionAndTotality) {
  auto kb = kb_with("");
  const ClassDecl& c = *kb.cls("Obstruct");
  auto out = translate_attr_spec(c, "object", AttrSpec{SpecKind::A, 0, "Tangible-Entity", ""}, kb);
  EXPECT_TRUE(has_axiom(out, "false if instance(X, obstruct), object(X, A), -instance(A, tangible_entity)."));
  int definitions = 0, totality = 0;
  for (const auto& t : axiom_texts(out)) {
    if (t == "defined_object(X) if object(X, A).") ++definitions;
    if (t == "false if instance(X, obstruct), -defined_object(X).") ++totality;
  }
  EXPECT_EQ(definitions, 1);
  EXPECT_EQ(totality, 1);
  ASSERT_NE(function(out, "defined_object"), nullptr);
  EXPECT_EQ(function(out, "defined_object")->kind, alm::FunctionKind::DefinedStatic);
}

TEST(TranslateAttrSpec, ExactlyZeroIsSingleEmptinessConstraint) {
  auto kb = kb_with("");
  auto out = translate_attr_spec(*kb.cls("Obstruct"), "object", AttrSpec{SpecKind::Exactly, 0, "Entity", ""}, kb);
  EXPECT_EQ(axiom_texts(out),
            std::vector<std::string>{"false if instance(X, obstruct), object(X, A), instance(A, entity)."});
}

TEST(TranslateAttrSpec, AtMostOneIsPairwiseUniqueness) {
  auto kb = kb_with("");
  auto out = translate_attr_spec(*kb.cls("Obstruct"), "object", AttrSpec{SpecKind::AtMost, 1, "Entity", ""}, kb);
  ASSERT_EQ(out.axioms.size(), 1u);
  EXPECT_EQ(out.axioms[0].str(),
            "-object(X, A1) if object(X, A2), A1 != A2, instance(X, obstruct), instance(A1, entity), "
            "instance(A2, entity).");
}

TEST(TranslateAttrSpec, AtLeastTwoDeclaresDefinedStatic) {
  auto kb = kb_with("");
  auto out = translate_attr_spec(*kb.cls("Obstruct"), "object", AttrSpec{SpecKind::AtLeast, 2, "Entity", ""}, kb);
  ASSERT_NE(function(out, "at_least_2_object"), nullptr);
  EXPECT_TRUE(has_axiom(out, "false if instance(X, obstruct), -at_least_2_object(X)."));
}

TEST(TranslateAttrSpec, UnifyIsValueEquality) {
  auto kb = kb_with("");
  auto out = translate_attr_spec(*kb.cls("Obstruct"), "object", AttrSpec{SpecKind::UnifyConstraint, 0, "", "agent"},
                                 kb);
  EXPECT_TRUE(has_axiom(out, "false if instance(X, obstruct), unequal_object_agent(X)."));
}

// --- preconditions -----------------------------------------------------------

TEST(TranslatePrecondition, UnaryPcsList) {
  auto kb = kb_with("");
  const ClassDecl& c = *kb.cls("Unobstruct");
  auto out = translate_precondition(c, *c.find(ClauseKind::PcsList), kb, config());
  EXPECT_EQ(axiom_texts(out), std::vector<std::string>{
                                  "impossible occurs(X) if instance(X, unobstruct), object(X, A), -is_obstructed(A)."});
}

TEST(TranslatePrecondition, NcsListFlipsPolarity) {
  auto kb = kb_with(R"((Seal has (superclasses (Action)))
(every Seal has (ncs-list ((forall (the object of Self) (:triple It object-of (a Be-Obstructed)))))))");
  const ClassDecl& c = *kb.cls("Seal");
  auto out = translate_precondition(c, *c.find(ClauseKind::NcsList), kb, config());
  EXPECT_EQ(axiom_texts(out),
            std::vector<std::string>{"impossible occurs(X) if instance(X, seal), object(X, A), is_obstructed(A)."});
}

TEST(TranslatePrecondition, BinaryUsesPrepositionFluent) {
  auto kb = kb_with(R"((Free has (superclasses (Action)))
(every Free has (pcs-list ((forall (the object of Self)
   (:triple It object-of (a Be-Obstructed with (agent ((the agent of Self))))))))))");
  const ClassDecl& c = *kb.cls("Free");
  auto out = translate_precondition(c, *c.find(ClauseKind::PcsList), kb, config());
  EXPECT_EQ(axiom_texts(out), std::vector<std::string>{"impossible occurs(X) if instance(X, free), object(X, A1), "
                                                       "agent(X, A2), -obstructed_by(A1, A2)."});
}

TEST(TranslatePrecondition, UnrecognizedPattern) {
  auto kb = kb_with(R"((Odd has (superclasses (Action)))
(every Odd has (pcs-list ((:triple Self weird (a Thing))))))");
  const ClassDecl& c = *kb.cls("Odd");
  EXPECT_EQ(error_code([&] { translate_precondition(c, *c.find(ClauseKind::PcsList), kb, config()); }),
            "UnrecognizedTriplePattern");
}

// --- effects -----------------------------------------------------------------

TEST(TranslateEffects, SimpleAddList) {
  auto kb = kb_with("");
  auto out = translate_effects(*kb.cls("Make-Inaccessible"), kb, config());
  EXPECT_EQ(axiom_texts(out), std::vector<std::string>{"occurs(X) causes -is_accessible(A) if "
                                                       "instance(X, make_inaccessible), object(X, A)."});
}

TEST(TranslateEffects, IfThenElseGivesBinaryAndDefaultLaws) {
  auto kb = kb_with(R"((Jam has (superclasses (Action)))
(every Jam has (resulting-state ((a Be-Obstructed)))
  (add-list ((if (has-value (the agent of Self))
              then (forall (the agent of Self) (:triple It agent-of (the resulting-state of Self)))
              else (:triple (the resulting-state of Self) object (the object of Self)))))))");
  auto out = translate_effects(*kb.cls("Jam"), kb, config());
  EXPECT_TRUE(has_axiom(out, "occurs(X) causes obstructed_by(A1, A2) if instance(X, jam), object(X, A1), "
                             "agent(X, A2)."));
  EXPECT_TRUE(has_axiom(out, "occurs(X) causes is_obstructed(A) if instance(X, jam), object(X, A), "
                             "-defined_agent(X)."));
}

TEST(TranslateDefeasible, SoftPreconditionIsOptional) {
  auto kb = load_km({{"core.km", read_file(data("km/core.km"))},
                     {"obstruction.km", read_file(data("km/obstruction.km"))},
                     {"accessibility.km", read_file(data("km/accessibility.km"))},
                     {"restraint.km", read_file(data("km/restraint.km"))}});
  const ClassDecl& c = *kb.cls("Restrain");
  auto out = translate_defeasible(c, *c.find(ClauseKind::SoftPcsList), kb, config());
  EXPECT_TRUE(out.axioms.empty());
  EXPECT_EQ(out.optional_axioms.size(), 1u);
}

// --- whole knowledge bases -------------------------------------------------

TEST(TranslateKb, EmptyKbGivesNothing) { EXPECT_TRUE(translate_kb(KmKb{}, TranslationConfig{}).empty()); }

TEST(TranslateKb, ObstructionFramesValidateTogether) {
  auto kb = kb_with("");
  auto outputs = translate_kb(kb, config());
  auto module = build_module(outputs, "obstruction", {});
  auto report = alm::validate(std::vector<alm::ModuleDecl>{module});
  EXPECT_TRUE(report.ok()) << report.str() << alm::print(module);
}

TEST(TranslateKb, Deterministic) {
  auto kb = kb_with("");
  auto a = build_module(translate_kb(kb, config()), "m", {});
  auto b = build_module(translate_kb(kb, config()), "m", {});
  EXPECT_EQ(alm::print(a), alm::print(b));
}

TEST(TranslateKb, OppositesReportFlagsMissingCounterpart) {
  auto kb = kb_with("");
  auto outputs = translate_kb(kb, config());
  // Unobstruct requires is_obstructed; Obstruct has no condition on it.
  auto report = opposites_report(outputs, {{"Obstruct", "Unobstruct"}});
  ASSERT_EQ(report.size(), 1u);
  EXPECT_NE(report[0].find("obstruct"), std::string::npos);
}

TEST(TranslateKb, AlmNames) {
  EXPECT_EQ(alm_name("Make-Inaccessible"), "make_inaccessible");
  EXPECT_EQ(alm_name("Action"), "actions");
  EXPECT_EQ(alm_name("Thing"), "universe");
}

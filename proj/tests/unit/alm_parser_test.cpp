#include <gtest/gtest.h>

#include "corealm/alm/parser.hpp"
#include "corealm/alm/printer.hpp"
#include "test_util.hpp"

using namespace corealm;
using namespace corealm::alm;
using corealm::test::fixture;
using corealm::test::read_file;

TEST(AlmParser, MotionFragment) {
  auto sd = parse_system_description(read_file(fixture("alm/motion_example.alm")));
  ASSERT_EQ(sd.modules.size(), 1u);
  const auto& m = sd.modules[0];
  ASSERT_EQ(m.axioms.size(), 1u);
  EXPECT_EQ(m.axioms[0].kind, AxiomKind::DynamicCausalLaw);
  EXPECT_EQ(m.axioms[0].str(),
            "occurs(X) causes loc_in(A) = D if instance(X, move), actor(X) = A, dest(X) = D.");
  int schemas = 0;
  for (const auto& i : sd.structure.instances) schemas += i.is_schema();
  EXPECT_EQ(schemas, 1);
  // origin, dest : points declares two attributes
  ASSERT_EQ(m.sorts.size(), 3u);
  EXPECT_EQ(m.sorts[2].attributes.size(), 3u);
}

TEST(AlmParser, WrestlerText) {
  auto sd = parse_system_description(read_file(fixture("alm/wrestler.alm")));
  EXPECT_EQ(sd.name, "wrestler_and_opponent");
  ASSERT_EQ(sd.imports.size(), 1u);
  EXPECT_EQ(sd.imports[0].library, "coreALMlib");
  EXPECT_EQ(sd.imports[0].module, "unrestraining_and_restraining");
  std::size_t names = 0;
  for (const auto& i : sd.structure.instances) names += i.names.size();
  EXPECT_EQ(names, 3u);
  const auto& r = sd.structure.instances.back();
  EXPECT_EQ(r.sort, "restrain");
  ASSERT_EQ(r.assignments.size(), 2u);
  EXPECT_EQ(r.assignments[0].name, "agent");
  EXPECT_EQ(r.assignments[0].args[0], Term::symbol("wrestler"));
  EXPECT_EQ(r.assignments[0].value, Term::symbol("true"));
}

TEST(AlmParser, EmptyStructure) {
  auto sd = parse_system_description(
      "system description s\n  theory s\n    module s\n  structure s\n    instances\n");
  EXPECT_TRUE(sd.structure.instances.empty());
  EXPECT_TRUE(sd.structure.statics.empty());
}

TEST(AlmParser, DependsOn) {
  auto m = parse_module("module m\n  depends on motion\n");
  EXPECT_EQ(m.depends_on, std::vector<std::string>{"motion"});
}

TEST(AlmParser, MalformedAxiomHasSpan) {
  try {
    parse_module("module m\n  axioms\n    occurs(X) causes\n");
    FAIL() << "expected SyntaxError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "SyntaxError");
    EXPECT_EQ(e.span().line, 3);
    EXPECT_GT(e.span().column, 0);
  }
}

TEST(AlmParser, UnknownKeyword) {
  try {
    parse_module("module m\n  sorts\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownKeyword");
  }
}

TEST(AlmParser, EmptyInputIsSyntaxError) {
  EXPECT_THROW(parse_system_description(""), Error);
}

TEST(AlmParser, AxiomShapes) {
  EXPECT_EQ(parse_axiom("impossible occurs(X) if instance(X, move), actor(X) = A, -free(A)").str(),
            "impossible occurs(X) if instance(X, move), actor(X) = A, -free(A).");
  EXPECT_EQ(parse_axiom("false if instance(X, c), -defined_a(X).").str(),
            "false if instance(X, c), -defined_a(X).");
  auto a = parse_axiom("-is_accessible(O) if is_obstructed(O)");
  EXPECT_EQ(a.kind, AxiomKind::StateConstraint);
  ASSERT_TRUE(a.head);
  EXPECT_TRUE(a.head->negated);
  // Unicode forms normalize to ASCII.
  EXPECT_EQ(parse_axiom("¬is_accessible(O) if is_obstructed(O), X ≠ Y").str(),
            "-is_accessible(O) if is_obstructed(O), X != Y.");
}

TEST(AlmParser, EmptyModulePrintsAllSections) {
  ModuleDecl m;
  m.name = "empty";
  EXPECT_EQ(print(m), "module empty\n  sort declarations\n  function declarations\n  axioms\n");
  EXPECT_EQ(parse_module(print(m)), m);
}

TEST(AlmParser, RoundTripMotion) {
  auto sd = parse_system_description(read_file(fixture("alm/motion_example.alm")));
  auto text = print(sd);
  auto again = parse_system_description(text);
  EXPECT_EQ(again, sd);
  EXPECT_EQ(print(again), text);
}

TEST(AlmParser, RoundTripWrestler) {
  auto sd = parse_system_description(read_file(fixture("alm/wrestler_ext.alm")));
  EXPECT_EQ(parse_system_description(print(sd)), sd);
}

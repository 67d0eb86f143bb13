#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <random>
#include <set>

#include "corealm/alm/parser.hpp"
#include "corealm/alm/printer.hpp"
#include "corealm/asp/compile.hpp"
#include "corealm/km/kb.hpp"
#include "corealm/km/translate.hpp"
#include "corealm/library/library.hpp"
#include "test_util.hpp"

using namespace corealm;
using namespace corealm::asp;
using corealm::test::fixture;
using corealm::test::read_file;

namespace {

const library::Library& shipped() {
  static const library::Library lib = library::Library::load(COREALM_DATA_DIR);
  return lib;
}

alm::SystemDescription load_sd(const std::string& rel) {
  return library::resolve_imports(alm::parse_system_description(read_file(fixture(rel))), shipped());
}

History load_history(const std::string& rel) { return History::parse(read_file(fixture(rel))); }

Term sym(const std::string& s) { return Term::symbol(s); }
Term restrained(const std::string& who) { return Term::function("is_restrained", {sym(who)}); }

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

// --- projection ----------------------------------------------------------------

TEST(Project, WrestlerRestrainsOpponent) {
  auto start = std::chrono::steady_clock::now();
  auto sd = load_sd("alm/wrestler.alm");
  auto trajectories = project(sd, load_history("alm/wrestler.hist"), 1, {.max_models = 0, .check_models = true});
  ASSERT_FALSE(trajectories.empty());
  for (const auto& t : trajectories) {
    ASSERT_EQ(t.states.size(), 2u);
    EXPECT_EQ(t.states[1].at(restrained("opponent")), sym("true"));
    EXPECT_EQ(t.states[1].at(restrained("wrestler")), sym("false"));
  }
  auto common = common_values(trajectories);
  EXPECT_EQ(common[1].at(restrained("opponent")), sym("true"));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

TEST(Project, ContradictingObservationIsInconsistent) {
  auto sd = load_sd("alm/wrestler.alm");
  auto h = load_history("alm/wrestler.hist");
  h.observed.push_back({restrained("opponent"), sym("false"), 1});
  EXPECT_EQ(error_code([&] { project(sd, h, 1); }), "Inconsistent");
}

// The motion module forbids moving a restrained object.
TEST(Project, MovingRestrainedOpponentIsImpossible) {
  auto sd = load_sd("alm/wrestler_ext.alm");
  EXPECT_EQ(error_code([&] { project(sd, load_history("alm/wrestler_move.hist"), 2); }), "Inconsistent");
  EXPECT_FALSE(project(sd, History::parse("hpd(m, 0).\n"), 1).empty());
}

TEST(Project, NoOccurrencesKeepsState) {
  auto sd = load_sd("alm/wrestler.alm");
  auto h = load_history("alm/wrestler.hist");
  h.happened.clear();
  for (const auto& t : project(sd, h, 2)) {
    EXPECT_EQ(t.states[0], t.states[1]);
    EXPECT_EQ(t.states[1], t.states[2]);
  }
}

// --- history and goal syntax --------------------------------------------------------

TEST(History, ParsesFacts) {
  auto h = History::parse("hpd(r, 0).\nobs(is_restrained(opponent), true, 1).\n");
  ASSERT_EQ(h.happened.size(), 1u);
  EXPECT_EQ(h.happened[0], (std::pair<Term, int>{sym("r"), 0}));
  ASSERT_EQ(h.observed.size(), 1u);
  EXPECT_EQ(h.observed[0].step, 1);
  EXPECT_EQ(h.end(), 1);
  EXPECT_EQ(History{}.end(), 0);
}

TEST(History, RejectsMalformedFacts) {
  EXPECT_EQ(error_code([] { History::parse("hpd(r).\n"); }), "BadHistory");
  EXPECT_EQ(error_code([] { History::parse("obs(f, true, -1).\n"); }), "BadHistory");
  EXPECT_EQ(error_code([] { History::parse("seen(r, 0).\n"); }), "BadHistory");
}

TEST(History, RejectsUnknownNames) {
  auto sd = load_sd("alm/wrestler.alm");
  auto p = compile(sd, 1);
  EXPECT_EQ(error_code([&] { add_history(p, History::parse("hpd(nothing, 0).\n"), sd); }), "BadHistory");
  EXPECT_EQ(error_code([&] { add_history(p, History::parse("obs(is_restrained(nobody), true, 0).\n"), sd); }),
            "BadHistory");
  EXPECT_EQ(error_code([&] { add_history(p, History::parse("hpd(r, 1).\n"), sd); }), "BadHistory");
}

TEST(Goal, Parses) {
  auto g = parse_goal("is_restrained(opponent)=false, loc_in(john) = b");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].first, restrained("opponent"));
  EXPECT_EQ(g[0].second, sym("false"));
  EXPECT_EQ(g[1].second, sym("b"));
  EXPECT_EQ(error_code([] { parse_goal("is_restrained(opponent)"); }), "BadGoal");
  EXPECT_EQ(error_code([] { parse_goal(""); }), "BadGoal");
}

// --- planning ------------------------------------------------------------------

TEST(Plan, WrestlerHasTwoUnrestrainingPlans) {
  auto start = std::chrono::steady_clock::now();
  auto sd = load_sd("alm/wrestler_ext.alm");
  auto h = load_history("alm/wrestler_late.hist");
  auto plans = plan(sd, h, parse_goal("is_restrained(opponent)=false"), 3, {.max_models = 0, .check_models = true});
  std::set<std::string> got;
  for (const auto& p : plans) got.insert(p.str());
  EXPECT_EQ(got, (std::set<std::string>{"[u(wrestler,opponent)]", "[u(opponent,opponent)]"}));
  EXPECT_EQ(plans.size(), 2u);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));

  // Each plan, replayed as a history, reaches the goal in every trajectory.
  for (const auto& p : plans) {
    History replay = h;
    for (const auto& [i, a] : p.steps) replay.happened.emplace_back(a, i);
    for (const auto& t : project(sd, replay, 2)) EXPECT_EQ(t.states[2].at(restrained("opponent")), sym("false"));
  }
}

TEST(Plan, GoalAlreadyTrueGivesEmptyPlan) {
  auto sd = load_sd("alm/wrestler_ext.alm");
  auto plans = plan(sd, load_history("alm/wrestler_late.hist"), parse_goal("is_restrained(opponent)=true"), 2);
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_TRUE(plans[0].steps.empty());
  EXPECT_EQ(plans[0].str(), "[]");
}

TEST(Plan, UnreachableGoal) {
  auto sd = load_sd("alm/wrestler.alm");
  auto h = load_history("alm/wrestler.hist");
  EXPECT_EQ(error_code([&] { plan(sd, h, parse_goal("is_restrained(wrestler)=true"), 2); }), "NoPlanWithinHorizon");
}

TEST(Plan, MotionExample) {
  auto sd = alm::parse_system_description(read_file(fixture("alm/motion_example.alm")));
  auto h = History::parse("obs(loc_in(john), a, 0).\nobs(loc_in(bob), a, 0).\n");
  auto plans = plan(sd, h, parse_goal("loc_in(john)=b, loc_in(bob)=b"), 3);
  ASSERT_FALSE(plans.empty());
  for (const auto& p : plans) EXPECT_EQ(p.steps.size(), 2u) << p.str();
}

TEST(Plan, UnknownGoalFluent) {
  auto sd = load_sd("alm/wrestler.alm");
  EXPECT_EQ(error_code([&] { plan(sd, {}, parse_goal("is_happy(wrestler)=true"), 1); }), "BadGoal");
}

// --- postdiction ---------------------------------------------------------------

// Oracle: every assignment to the unobserved step-0 boolean fluents is tried
// as a set of solver assumptions; the consistent ones are the completions.
TEST(Postdict, MatchesExhaustiveAssignments) {
  auto sd = load_sd("alm/wrestler.alm");
  auto h = load_history("alm/wrestler_late.hist");
  auto completions = postdict(sd, h, 1, {.max_models = 0, .check_models = true});

  auto p = compile(sd, 1);
  add_history(p, h, sd);
  auto gp = ground(p);
  std::vector<Term> fluents;
  for (const auto& [f, range] : basic_fluents(sd)) {
    ASSERT_EQ(range, "booleans") << f.str();
    fluents.push_back(f);
  }
  ASSERT_LE(fluents.size(), 16u);

  std::set<std::map<Term, Term>> expected;
  for (std::size_t bits = 0; bits < (std::size_t{1} << fluents.size()); ++bits) {
    SolveOptions o;
    o.max_models = 1;
    std::map<Term, Term> state;
    bool possible = true;
    for (std::size_t k = 0; k < fluents.size(); ++k) {
      bool value = (bits >> k) & 1;
      state[fluents[k]] = sym(value ? "true" : "false");
      int id = gp.find(Term::function("holds", {fluents[k], Term::integer(0)}));
      if (id < 0) {
        possible = possible && !value;
        continue;
      }
      o.assumptions.push_back(value ? id : -(id + 1));
    }
    if (possible && !solve(gp, o).empty()) expected.insert(state);
  }
  std::set<std::map<Term, Term>> got(completions.begin(), completions.end());
  EXPECT_EQ(got.size(), completions.size());
  EXPECT_EQ(got, expected);

  // The restrain effect makes step 1 true whatever held before.
  std::set<Term> opponent_values;
  for (const auto& c : completions) opponent_values.insert(c.at(restrained("opponent")));
  EXPECT_EQ(opponent_values, (std::set<Term>{sym("false"), sym("true")}));
}

TEST(Postdict, ObservedFluentsAreLeftOut) {
  auto sd = load_sd("alm/wrestler.alm");
  auto completions = postdict(sd, load_history("alm/wrestler.hist"), 1);
  ASSERT_FALSE(completions.empty());
  for (const auto& c : completions) {
    EXPECT_FALSE(c.contains(restrained("opponent")));
    EXPECT_FALSE(c.contains(restrained("wrestler")));
  }
}

// --- inertia property ------------------------------------------------------------

namespace {

// A random description: two sorts, boolean and value fluents, a defined
// fluent, random state constraints and a causal law on an action class.
std::string random_description(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const int bools = 1 + pick(3);
  const int things = 1 + pick(2);
  const int colours = 2 + pick(2);
  std::string s = "system description r\n  theory r\n    module r\n      sort declarations\n";
  s += "        things :: universe\n        colours :: universe\n        pushes :: actions\n";
  s += "          attributes\n            target : things -> booleans\n";
  s += "      function declarations\n";
  for (int b = 0; b < bools; ++b) s += "        fluent basic b" + std::to_string(b) + " : things -> booleans\n";
  s += "        fluent basic colour : things -> colours\n";
  s += "        fluent defined d : things -> booleans\n";
  s += "      axioms\n";
  s += "        d(X) if b0(X), colour(X) = c0.\n";
  s += "        occurs(A) causes b0(T) if instance(A, pushes), target(A, T).\n";
  for (int k = pick(3); k > 0; --k) {
    s += "        " + std::string(pick(2) ? "" : "-") + "b" + std::to_string(pick(bools)) + "(X) if " +
         (pick(2) ? "" : "-") + "b" + std::to_string(pick(bools)) + "(X).\n";
  }
  s += "  structure r\n    instances\n";
  for (int t = 0; t < things; ++t) s += "      t" + std::to_string(t) + " in things\n";
  for (int c = 0; c < colours; ++c) s += "      c" + std::to_string(c) + " in colours\n";
  s += "      p in pushes\n        target(t0) = true\n";
  return s;
}

}  // namespace

TEST(Inertia, BasicFluentsConstantWithoutOccurrences) {
  std::mt19937 rng(2024);
  int with_models = 0;
  for (int round = 0; round < 100; ++round) {
    auto text = random_description(rng);
    auto sd = alm::parse_system_description(text);
    auto gp = ground(compile(sd, 2));
    auto basics = basic_fluents(sd);
    auto models = solve(gp);
    if (!models.empty()) ++with_models;
    for (const auto& m : models) {
      auto t = trajectory(gp, m, 2);
      ASSERT_EQ(t.states.size(), 3u);
      for (const auto& [f, range] : basics) {
        EXPECT_EQ(t.states[0].at(f), t.states[1].at(f)) << text;
        EXPECT_EQ(t.states[1].at(f), t.states[2].at(f)) << text;
      }
    }
  }
  EXPECT_GT(with_models, 50);
}

// --- attribute constraints ----------------------------------------------------------

namespace {

struct SpecCase {
  std::string name;
  std::string spec;       // KM value of the instrument slot
  std::string violating;  // attribute lines of the action instance
  std::string satisfying;
};

// Entities: e1 is only an entity, t1..t3 are tangible, l1 is living (and so
// tangible too).
alm::SystemDescription attr_spec_description(const SpecCase& c, const std::string& attributes) {
  auto files = std::vector<std::pair<std::string, std::string>>{
      {"core.km", read_file(std::string(COREALM_DATA_DIR) + "/km/core.km")},
      {"poke.km", "(Poke has (superclasses (Action)))\n(every Poke has (instrument (" + c.spec + ")))\n"}};
  auto kb = km::load_km(files);
  auto outputs = km::translate_kb(kb, {});
  auto sd = alm::parse_system_description(R"(system description poking
  theory poking
  structure poking
    instances
      e1 in entity
      t1, t2, t3 in tangible_entity
      l1 in living_entity
      p in poke
)" + attributes);
  sd.modules = {km::build_module(outputs, "poking", {})};
  return sd;
}

std::size_t count_models(const alm::SystemDescription& sd) { return solve(ground(compile(sd, 0)), 1).size(); }

// Each line is set true; the agent's value is an instrument under TheAttrOfSelf,
// so its violation denies that explicitly.
std::string attrs(std::initializer_list<std::string> lines) {
  std::string out;
  for (const auto& l : lines) out += "        " + l + " = true\n";
  return out;
}

}  // namespace

TEST(AttributeSpecs, ViolatingStructuresHaveNoModels) {
  const std::vector<SpecCase> cases = {
      {"A", "(a Tangible-Entity)", attrs({"instrument(e1)"}), attrs({"instrument(t1)"})},
      {"MustBeA", "(must-be-a Tangible-Entity)", attrs({"instrument(e1)"}), attrs({"instrument(t1)"})},
      {"MustntBeA", "(mustnt-be-a Living-Entity)", attrs({"instrument(l1)"}), attrs({"instrument(t1)"})},
      {"AtMost1", "(at-most 1 Tangible-Entity)", attrs({"instrument(t1)", "instrument(t2)"}), attrs({"instrument(t1)"})},
      {"AtMost2", "(at-most 2 Tangible-Entity)", attrs({"instrument(t1)", "instrument(t2)", "instrument(t3)"}),
       attrs({"instrument(t1)", "instrument(t2)"})},
      {"AtLeast1", "(at-least 1 Tangible-Entity)", attrs({"instrument(e1)"}), attrs({"instrument(t1)"})},
      {"AtLeast2", "(at-least 2 Tangible-Entity)", attrs({"instrument(t1)"}), attrs({"instrument(t1)", "instrument(l1)"})},
      {"Exactly0", "(exactly 0 Tangible-Entity)", attrs({"instrument(t1)"}), attrs({"instrument(e1)"})},
      {"Exactly1", "(exactly 1 Tangible-Entity)", attrs({"instrument(t1)", "instrument(t2)"}), attrs({"instrument(t1)"})},
      {"Exactly2", "(exactly 2 Tangible-Entity)", attrs({"instrument(t1)"}), attrs({"instrument(t1)", "instrument(t2)"})},
      {"TheAttrOfSelf", "(the agent of Self)", attrs({"agent(t1)"}) + "        instrument(t1) = false\n",
       attrs({"agent(t1)", "instrument(t1)"})},
      {"ExcludedValues", "(excluded-values (the agent of Self))", attrs({"agent(t1)", "instrument(t1)"}),
       attrs({"agent(t1)", "instrument(t2)"})},
      {"UnifyConstraint", "(constraint (TheValue & (the agent of Self)))", attrs({"agent(t1)", "instrument(t2)"}),
       attrs({"agent(t1)", "instrument(t1)"})},
  };
  ASSERT_EQ(cases.size(), 13u);
  auto start = std::chrono::steady_clock::now();
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    EXPECT_EQ(count_models(attr_spec_description(c, c.violating)), 0u);
    EXPECT_GE(count_models(attr_spec_description(c, c.satisfying)), 1u);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

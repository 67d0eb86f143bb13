// Runs the end-to-end acceptance scenarios and prints one PASS/FAIL line for
// each. Arguments select criteria by number; none runs all. Exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "corealm/alm/parser.hpp"
#include "corealm/asp/compile.hpp"
#include "corealm/km/kb.hpp"
#include "corealm/km/translate.hpp"
#include "corealm/library/library.hpp"

using namespace corealm;
using namespace corealm::asp;
namespace fs = std::filesystem;

namespace {

const std::string kTests = COREALM_TEST_DIR;
const std::string kData = COREALM_DATA_DIR;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture(const std::string& rel) { return kTests + "/fixtures/" + rel; }

const library::Library& shipped() {
  static const library::Library lib = library::Library::load(kData);
  return lib;
}

alm::SystemDescription load_sd(const std::string& rel) {
  return library::resolve_imports(alm::parse_system_description(read_file(fixture(rel))), shipped());
}

Term sym(const std::string& s) { return Term::symbol(s); }
Term restrained(const std::string& who) { return Term::function("is_restrained", {sym(who)}); }

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Seconds = std::chrono::duration<double>;

Outcome wrestler_projection() {
  Outcome r;
  auto sd = load_sd("alm/wrestler.alm");
  auto h = History::parse(read_file(fixture("alm/wrestler.hist")));
  auto trajectories = project(sd, h, 1, {.max_models = 0, .check_models = true});
  r.require(!trajectories.empty(), "no answer sets");
  for (const auto& t : trajectories) {
    r.require(t.states[1].at(restrained("opponent")) == sym("true"), "opponent not restrained at step 1");
    r.require(t.states[1].at(restrained("wrestler")) == sym("false"), "wrestler restrained at step 1");
  }
  if (r.ok) r.detail = std::to_string(trajectories.size()) + " answer sets agree";
  return r;
}

Outcome wrestler_planning() {
  Outcome r;
  auto sd = load_sd("alm/wrestler_ext.alm");
  auto h = History::parse(read_file(fixture("alm/wrestler_late.hist")));
  auto plans = plan(sd, h, parse_goal("is_restrained(opponent)=false"), 3, {.max_models = 0, .check_models = true});
  std::set<std::string> got;
  for (const auto& p : plans) got.insert(p.str());
  r.require(plans.size() == 2 && got == std::set<std::string>{"[u(wrestler,opponent)]", "[u(opponent,opponent)]"},
            "unexpected plans");
  if (r.ok) r.detail = "[u(opponent,opponent)] and [u(wrestler,opponent)]";
  return r;
}

Outcome obstruction_translation() {
  Outcome r;
  std::ostringstream out, err;
  int code = cli::run({"corealm", "km2alm", kData + "/km/obstruction.km", "--context", kData + "/km/core.km",
                       kData + "/km/accessibility.km", "--preps", kData + "/translation.json"},
                      out, err);
  r.require(code == 0, "km2alm failed: " + err.str());
  const std::string text = out.str();
  r.require(text == read_file(kTests + "/golden/obstruction.alm"), "output differs from golden");
  for (const char* line : {"fluent basic is_at : spatial_entity * spatial_entity -> booleans",
                           "fluent basic is_obstructed : spatial_entity -> booleans",
                           "-is_accessible(O) if is_obstructed(O).", "object : entity -> booleans"}) {
    r.require(text.find(line) != std::string::npos, std::string("missing: ") + line);
  }
  if (r.ok) r.detail = "byte-exact";
  return r;
}

Outcome attribute_constraints() {
  struct Case {
    std::string spec, violating, satisfying;
  };
  auto set = [](std::initializer_list<std::string> lines) {
    std::string out;
    for (const auto& l : lines) out += "        " + l + "\n";
    return out;
  };
  const std::vector<Case> cases = {
      {"(a Tangible-Entity)", set({"instrument(e1) = true"}), set({"instrument(t1) = true"})},
      {"(must-be-a Tangible-Entity)", set({"instrument(e1) = true"}), set({"instrument(t1) = true"})},
      {"(mustnt-be-a Living-Entity)", set({"instrument(l1) = true"}), set({"instrument(t1) = true"})},
      {"(at-most 1 Tangible-Entity)", set({"instrument(t1) = true", "instrument(t2) = true"}),
       set({"instrument(t1) = true"})},
      {"(at-most 2 Tangible-Entity)",
       set({"instrument(t1) = true", "instrument(t2) = true", "instrument(t3) = true"}),
       set({"instrument(t1) = true", "instrument(t2) = true"})},
      {"(at-least 1 Tangible-Entity)", set({"instrument(e1) = true"}), set({"instrument(t1) = true"})},
      {"(at-least 2 Tangible-Entity)", set({"instrument(t1) = true"}),
       set({"instrument(t1) = true", "instrument(l1) = true"})},
      {"(exactly 0 Tangible-Entity)", set({"instrument(t1) = true"}), set({"instrument(e1) = true"})},
      {"(exactly 1 Tangible-Entity)", set({"instrument(t1) = true", "instrument(t2) = true"}),
       set({"instrument(t1) = true"})},
      {"(exactly 2 Tangible-Entity)", set({"instrument(t1) = true"}),
       set({"instrument(t1) = true", "instrument(t2) = true"})},
      {"(the agent of Self)", set({"agent(t1) = true", "instrument(t1) = false"}),
       set({"agent(t1) = true", "instrument(t1) = true"})},
      {"(excluded-values (the agent of Self))", set({"agent(t1) = true", "instrument(t1) = true"}),
       set({"agent(t1) = true", "instrument(t2) = true"})},
      {"(constraint (TheValue & (the agent of Self)))", set({"agent(t1) = true", "instrument(t2) = true"}),
       set({"agent(t1) = true", "instrument(t1) = true"})},
  };
  const std::string core = read_file(kData + "/km/core.km");
  auto models = [&](const Case& c, const std::string& attributes) {
    auto kb = km::load_km({{"core.km", core},
                           {"poke.km", "(Poke has (superclasses (Action)))\n(every Poke has (instrument (" + c.spec +
                                           ")))\n"}});
    auto sd = alm::parse_system_description(
        "system description poking\n  theory poking\n  structure poking\n    instances\n      e1 in entity\n"
        "      t1, t2, t3 in tangible_entity\n      l1 in living_entity\n      p in poke\n" +
        attributes);
    sd.modules = {km::build_module(km::translate_kb(kb, {}), "poking", {})};
    return solve(ground(compile(sd, 0)), 1).size();
  };
  Outcome r;
  for (const auto& c : cases) {
    r.require(models(c, c.violating) == 0, c.spec + ": violating structure has a model");
    r.require(models(c, c.satisfying) >= 1, c.spec + ": satisfying structure has no model");
  }
  if (r.ok) r.detail = std::to_string(cases.size()) + " variant pairs";
  return r;
}

Outcome solver_oracle() {
  Outcome r;
  int count = 0;
  for (const auto& entry : fs::directory_iterator(fixture("ground"))) {
    if (entry.path().extension() != ".lp") continue;
    auto gp = ground(parse_program(read_file(entry.path().string()), entry.path().string()));
    if (gp.size() > 20) continue;
    ++count;
    r.require(solve(gp) == brute_force(gp), entry.path().filename().string() + ": model sets differ");
  }
  r.require(count >= 25, "only " + std::to_string(count) + " fixtures");
  if (r.ok) r.detail = std::to_string(count) + " fixtures";
  return r;
}

Outcome inertia() {
  Outcome r;
  std::mt19937 rng(11);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  for (int round = 0; round < 100; ++round) {
    const int bools = 1 + pick(3);
    std::string s = "system description r\n  theory r\n    module r\n      sort declarations\n"
                    "        things :: universe\n        colours :: universe\n"
                    "      function declarations\n";
    for (int b = 0; b < bools; ++b) s += "        fluent basic b" + std::to_string(b) + " : things -> booleans\n";
    s += "        fluent basic colour : things -> colours\n      axioms\n";
    for (int k = pick(3); k > 0; --k) {
      s += "        " + std::string(pick(2) ? "" : "-") + "b" + std::to_string(pick(bools)) + "(X) if " +
           (pick(2) ? "" : "-") + "b" + std::to_string(pick(bools)) + "(X).\n";
    }
    s += "  structure r\n    instances\n      t0, t1 in things\n      c0, c1, c2 in colours\n";
    auto sd = alm::parse_system_description(s);
    auto gp = ground(compile(sd, 2));
    for (const auto& m : solve(gp)) {
      auto t = trajectory(gp, m, 2);
      for (const auto& [f, range] : basic_fluents(sd)) {
        r.require(t.states[0].at(f) == t.states[1].at(f) && t.states[1].at(f) == t.states[2].at(f),
                  f.str() + " changed without an occurrence");
      }
    }
  }
  if (r.ok) r.detail = "100 descriptions, 3 steps";
  return r;
}

Outcome postdiction() {
  Outcome r;
  auto sd = load_sd("alm/wrestler.alm");
  auto h = History::parse(read_file(fixture("alm/wrestler_late.hist")));
  auto completions = postdict(sd, h, 1, {.max_models = 0, .check_models = true});

  // Oracle: try every step-0 assignment as solver assumptions.
  auto p = compile(sd, 1);
  add_history(p, h, sd);
  auto gp = ground(p);
  std::vector<Term> fluents;
  for (const auto& [f, range] : basic_fluents(sd)) fluents.push_back(f);
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
  r.require(got == expected, "completions differ from the exhaustive oracle");
  std::set<Term> opponent;
  for (const auto& c : completions) opponent.insert(c.at(restrained("opponent")));
  r.require(opponent.size() == 2, "is_restrained(opponent) at step 0 should be unconstrained");
  if (r.ok) r.detail = std::to_string(completions.size()) + " completions";
  return r;
}

Outcome library_integrity() {
  Outcome r;
  const auto& lib = shipped();
  for (const auto& m : lib.modules()) {
    alm::SystemDescription sd;
    sd.name = sd.theory_name = "check";
    sd.modules = library::closure(lib, {m.optional ? m.depends_on[0] : m.name}, false);
    if (m.optional) sd.modules.push_back(m);
    r.require(alm::validate(sd).ok(), m.name + " does not validate");
    if (!r.ok) return r;
    r.require(!solve(ground(compile(sd, 1)), 1).empty(), m.name + " has no answer set");
  }
  auto d = library::deps(lib, "unrestraining_and_restraining");
  r.require(d.front() == "entity_event_and_action", "root missing from deps");
  r.require(std::ranges::find(d, "unobstructing_and_obstructing") != d.end(), "unobstructing_and_obstructing missing");
  auto rows = library::search(lib, "restrain");
  r.require(rows.size() == 1 && rows[0].target == "restrain" && rows[0].module == "unrestraining_and_restraining",
            "search restrain");
  if (r.ok) r.detail = std::to_string(lib.modules().size()) + " modules";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double limit_seconds;  // 0 = no limit
  };
  const std::vector<Criterion> criteria = {
      {1, "wrestler projection", wrestler_projection, 1.0},
      {2, "wrestler planning", wrestler_planning, 5.0},
      {3, "obstruction translation", obstruction_translation, 0},
      {4, "attribute constraints", attribute_constraints, 10.0},
      {5, "solver vs brute force", solver_oracle, 0},
      {6, "inertia", inertia, 0},
      {7, "postdiction", postdiction, 0},
      {8, "library integrity", library_integrity, 0},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    double elapsed = Seconds(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_seconds > 0 && elapsed > c.limit_seconds) {
      o = {false, "took longer than " + std::to_string(c.limit_seconds) + " s"};
    }
    if (!o.ok) ++failures;
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << elapsed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.detail << " (" << t.str()
              << " s)\n";
  }
  return failures;
}

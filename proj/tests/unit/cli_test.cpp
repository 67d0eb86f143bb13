#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "test_util.hpp"

using corealm::test::fixture;
using corealm::test::read_file;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), {"corealm", "--lib", COREALM_DATA_DIR});
  std::ostringstream out, err;
  Result r;
  r.code = corealm::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& rel) { return std::string(COREALM_DATA_DIR) + "/" + rel; }
std::string golden(const std::string& rel) { return std::string(COREALM_TEST_DIR) + "/golden/" + rel; }

}  // namespace

TEST(Cli, Km2AlmReproducesObstructionGolden) {
  auto r = run({"km2alm", data("km/obstruction.km"), "--context", data("km/core.km"), data("km/accessibility.km"),
                "--preps", data("translation.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(golden("obstruction.alm")));
}

TEST(Cli, Km2AlmKeyDeclarations) {
  auto r = run({"km2alm", data("km/obstruction.km"), "--context", data("km/core.km"), data("km/accessibility.km"),
                "--preps", data("translation.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("fluent basic is_at : spatial_entity * spatial_entity -> booleans"), std::string::npos);
  EXPECT_NE(r.out.find("-is_accessible(O) if is_obstructed(O)."), std::string::npos);
}

TEST(Cli, CheckAcceptsAndRejects) {
  EXPECT_EQ(run({"check", fixture("alm/wrestler.alm")}).code, 0);
  auto bad = run({"check", fixture("alm/sort_mismatch.alm")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("sort mismatch"), std::string::npos);
}

TEST(Cli, CompileToStdoutMatchesGolden) {
  auto r = run({"compile", fixture("alm/motion_example.alm"), "--horizon", "1", "-o", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_file(golden("motion_example.h1.lp")));
}

TEST(Cli, CompileWritesOutputFile) {
  auto dir = std::filesystem::temp_directory_path() / "corealm_cli_compile";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto target = (dir / "out.lp").string();
  auto r = run({"compile", fixture("alm/motion_example.alm"), "--horizon", "1", "-o", target});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(target), read_file(golden("motion_example.h1.lp")));
}

TEST(Cli, SolveGroundFixture) {
  auto r = run({"solve", fixture("ground/even_loop.lp"), "--check"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Answer: 2"), std::string::npos);
  EXPECT_NE(r.out.find("SATISFIABLE"), std::string::npos);
  auto none = run({"solve", fixture("ground/odd_loop.lp")});
  EXPECT_EQ(none.code, 0);
  EXPECT_NE(none.out.find("UNSATISFIABLE"), std::string::npos);
}

TEST(Cli, ProjectWrestler) {
  auto r = run({"project", fixture("alm/wrestler.alm"), "--history", fixture("alm/wrestler.hist"), "--horizon", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("is_restrained(opponent) = true @ 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("is_restrained(wrestler) = false @ 1\n"), std::string::npos);
}

TEST(Cli, PlanWrestler) {
  auto r = run({"plan", fixture("alm/wrestler_ext.alm"), "--history", fixture("alm/wrestler_late.hist"), "--goal",
                "is_restrained(opponent)=false"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "2 plan(s) of length 1\n[u(opponent,opponent) @ 1]\n[u(wrestler,opponent) @ 1]\n");
}

TEST(Cli, PlanJson) {
  auto r = run({"--format", "json", "plan", fixture("alm/wrestler_ext.alm"), "--history",
                fixture("alm/wrestler_late.hist"), "--goal", "is_restrained(opponent)=false"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_EQ(j["length"], 1);
  EXPECT_EQ(j["plans"].size(), 2u);
}

TEST(Cli, PostdictLeavesOpponentOpen) {
  auto r = run({"postdict", fixture("alm/wrestler.alm"), "--history", fixture("alm/wrestler_late.hist"), "--horizon",
                "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("is_restrained(opponent) = false | true @ 0\n"), std::string::npos);
}

TEST(Cli, SearchRestrain) {
  auto r = run({"search", "restrain"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "restrain\tv\t2\taction-class\trestrain\tunrestraining_and_restraining\t"
            "to close within bounds, limit or hold back from movement\n");
}

TEST(Cli, DepsAndAssemble) {
  auto r = run({"deps", "unrestraining_and_restraining"});
  EXPECT_EQ(r.out, "entity_event_and_action\nunobstructing_and_obstructing\nunrestraining_and_restraining\n");
  auto a = run({"assemble", "unobstructing_and_obstructing"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("module unobstructing_and_obstructing"), std::string::npos);
}

TEST(Cli, RegenCheckIsClean) {
  auto r = run({"regen", "--check"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, ErrorsAsJson) {
  auto r = run({"--format", "json", "plan", fixture("alm/wrestler.alm"), "--history", fixture("alm/wrestler.hist"),
                "--goal", "is_restrained(wrestler)=true"});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  EXPECT_FALSE(j["ok"].get<bool>());
  EXPECT_EQ(j["error"]["code"], "NoPlanWithinHorizon");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"plan", fixture("alm/wrestler.alm")}).code, 2);
  EXPECT_EQ(run({"--format", "yaml", "search", "x"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"check", "/nonexistent/file.alm"}).code, 1);
}

TEST(Cli, OracleAgreesOnFixtures) {
  auto r = run({"oracle", fixture("ground/even_loop.lp"), fixture("ground/odd_loop.lp")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("even_loop.lp: 2 atoms, 2 models, agrees\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("odd_loop.lp: 1 atoms, 0 models, agrees\n"), std::string::npos) << r.out;
}

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "corealm/alm/parser.hpp"
#include "corealm/asp/compile.hpp"
#include "corealm/km/kb.hpp"
#include "corealm/km/translate.hpp"
#include "corealm/library/library.hpp"

using namespace corealm;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture(const std::string& rel) { return std::string(COREALM_TEST_DIR) + "/fixtures/" + rel; }

const library::Library& shipped() {
  static const library::Library lib = library::Library::load(COREALM_DATA_DIR);
  return lib;
}

alm::SystemDescription wrestler(const std::string& rel) {
  return library::resolve_imports(alm::parse_system_description(read_file(fixture(rel))), shipped());
}

void BM_GroundWrestler(benchmark::State& state) {
  auto p = asp::compile(wrestler("alm/wrestler.alm"), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(asp::ground(p));
}
BENCHMARK(BM_GroundWrestler)->Arg(1)->Arg(2)->Arg(4);

void BM_Projection(benchmark::State& state) {
  auto sd = wrestler("alm/wrestler.alm");
  auto h = asp::History::parse(read_file(fixture("alm/wrestler.hist")));
  for (auto _ : state) benchmark::DoNotOptimize(asp::project(sd, h, 1));
}
BENCHMARK(BM_Projection)->Unit(benchmark::kMillisecond);

void BM_Planning(benchmark::State& state) {
  auto sd = wrestler("alm/wrestler_ext.alm");
  auto h = asp::History::parse(read_file(fixture("alm/wrestler_late.hist")));
  auto goal = asp::parse_goal("is_restrained(opponent)=false");
  for (auto _ : state) benchmark::DoNotOptimize(asp::plan(sd, h, goal, 3));
}
BENCHMARK(BM_Planning)->Unit(benchmark::kMillisecond);

// Three-colourings of an n-cycle: 2^n + 2(-1)^n models.
void BM_SolveColouring(benchmark::State& state) {
  const auto n = state.range(0);
  std::string text = "col(r). col(g). col(b).\n";
  for (int i = 0; i < n; ++i) {
    text += "v(" + std::to_string(i) + "). e(" + std::to_string(i) + "," + std::to_string((i + 1) % n) + ").\n";
  }
  text += "1 { c(V,C) : col(C) } 1 :- v(V).\n:- e(U,V), c(U,C), c(V,C).\n";
  auto gp = asp::ground(asp::parse_program(text));
  for (auto _ : state) benchmark::DoNotOptimize(asp::solve(gp));
}
BENCHMARK(BM_SolveColouring)->Arg(5)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_TranslateObstruction(benchmark::State& state) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const char* f : {"core.km", "accessibility.km", "obstruction.km"}) {
    files.emplace_back(f, read_file(std::string(COREALM_DATA_DIR) + "/km/" + f));
  }
  auto config = km::TranslationConfig::from_json(read_file(std::string(COREALM_DATA_DIR) + "/translation.json"));
  for (auto _ : state) {
    auto kb = km::load_km(files);
    benchmark::DoNotOptimize(km::build_module(km::translate_kb(kb, config), "obstruction", {}));
  }
}
BENCHMARK(BM_TranslateObstruction);

void BM_LoadLibrary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(library::Library::load(COREALM_DATA_DIR));
}
BENCHMARK(BM_LoadLibrary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "corealm/alm/model.hpp"
#include "corealm/alm/parser.hpp"
#include "corealm/alm/printer.hpp"
#include "corealm/asp/compile.hpp"
#include "corealm/error.hpp"
#include "corealm/io.hpp"
#include "corealm/km/translate.hpp"
#include "corealm/library/library.hpp"
#include "json.hpp"

namespace corealm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string format = "text";
  std::string lib_dir;
  bool json() const { return format == "json"; }
};

json span_json(const SourceSpan& s) {
  if (!s.valid()) return nullptr;
  return {{"file", s.file}, {"line", s.line}, {"column", s.column}};
}

void report_error(const Options& o, const Error& e, std::ostream& out, std::ostream& err) {
  if (o.json()) {
    out << json{{"ok", false}, {"error", {{"code", e.code()}, {"message", e.detail()}, {"span", span_json(e.span())}}}}
               .dump(2)
        << "\n";
  } else {
    err << "error: " << e.what() << "\n";
  }
}

// --lib, then $COREALM_LIB_DIR, then the source tree, then the install prefix.
fs::path library_dir(const Options& o) {
  if (!o.lib_dir.empty()) return o.lib_dir;
  fs::path fallback = COREALM_DEFAULT_LIB_DIR;
  if (!fs::exists(fallback / "manifest.json")) fallback = COREALM_INSTALL_LIB_DIR;
  return library::default_dir(fallback);
}

library::Library load_library(const Options& o) { return library::Library::load(library_dir(o)); }

alm::SystemDescription load_sd(const Options& o, const std::string& path, bool with_optional = false) {
  auto sd = alm::parse_system_description(read_text(path), path);
  if (sd.imports.empty()) return sd;
  return library::resolve_imports(sd, load_library(o), with_optional);
}

asp::History load_history(const std::string& path) {
  if (path.empty()) return {};
  return asp::History::parse(read_text(path), path);
}

json diagnostics_json(const std::vector<alm::Diagnostic>& ds) {
  json a = json::array();
  for (const auto& d : ds) a.push_back({{"code", d.code}, {"message", d.message}, {"span", span_json(d.span)}});
  return a;
}

void print_diagnostics(const std::vector<alm::Diagnostic>& ds, const std::string& label, std::ostream& s) {
  for (const auto& d : ds) {
    s << label << ": ";
    if (d.span.valid()) s << d.span.str() << ": ";
    s << d.code << ": " << d.message << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o, const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = read_text(path);
  alm::ValidationReport report;
  std::string what;
  if (alm::looks_like_system_description(text)) {
    auto sd = alm::parse_system_description(text, path);
    if (!sd.imports.empty()) sd = library::resolve_imports(sd, load_library(o));
    report = alm::validate(sd);
    what = "system description " + sd.name;
  } else {
    auto modules = alm::parse_modules(text, path);
    if (modules.empty()) throw Error("SyntaxError", "no module or system description found", {path, 1, 1});
    report = alm::validate(modules);
    what = std::to_string(modules.size()) + " module(s)";
  }
  if (o.json()) {
    out << json{{"ok", report.ok()},
                {"checked", what},
                {"errors", diagnostics_json(report.diagnostics)},
                {"warnings", diagnostics_json(report.warnings)}}
               .dump(2)
        << "\n";
  } else {
    print_diagnostics(report.diagnostics, "error", err);
    print_diagnostics(report.warnings, "warning", err);
    if (report.ok()) out << path << ": ok (" << what << ")\n";
  }
  return report.ok() ? 0 : 1;
}

struct Km2AlmArgs {
  std::vector<std::string> files;
  std::vector<std::string> context;
  std::string preps;
  std::string patch;
  std::string opposites;
  std::string name;
};

int cmd_km2alm(const Options& o, const Km2AlmArgs& a, std::ostream& out, std::ostream& err) {
  km::TranslationConfig config;
  if (!a.preps.empty()) config = km::TranslationConfig::from_json(read_text(a.preps));
  km::Patch patch;
  if (!a.patch.empty()) patch = km::Patch::from_json(read_text(a.patch));

  // Only the frames of the main files are emitted; context files supply
  // declarations they refer to.
  std::vector<std::pair<std::string, std::string>> all;
  std::set<std::string> wanted;
  for (const auto& f : a.context) all.emplace_back(f, read_text(f));
  for (const auto& f : a.files) {
    std::string text = read_text(f);
    km::KmKb own = km::lift_km(km::parse_sexprs(text, f));
    for (const auto& s : own.slots) wanted.insert(s.name);
    for (const auto& c : own.classes) wanted.insert(c.name);
    all.emplace_back(f, std::move(text));
  }
  if (!patch.km.empty()) all.emplace_back(a.patch, patch.km);
  const km::KmKb kb = km::load_km(all);
  auto outputs = km::translate_kb(kb, config, a.patch.empty() ? nullptr : &patch);

  std::vector<km::TranslationOutput> selected, context;
  for (auto& x : outputs) (wanted.contains(x.source) ? selected : context).push_back(std::move(x));
  const std::string name = a.name.empty() ? fs::path(a.files.front()).stem().string() : a.name;
  const auto module = km::build_module(selected, name, {});
  const auto optional = km::build_optional_module(selected, name + "_optional", name);

  std::vector<std::string> advisories;
  if (!a.opposites.empty()) {
    auto pairs = json::parse(read_text(a.opposites)).get<std::vector<std::pair<std::string, std::string>>>();
    std::vector<km::TranslationOutput> everything = selected;
    everything.insert(everything.end(), context.begin(), context.end());
    advisories = km::opposites_report(everything, pairs);
  }
  std::vector<std::string> notes;
  for (const auto& x : selected) notes.insert(notes.end(), x.notes.begin(), x.notes.end());

  std::string text = alm::print(module);
  if (!optional.axioms.empty()) text += "\n" + alm::print(optional);
  if (o.json()) {
    out << json{{"ok", true},
                {"alm", text},
                {"clauses", {{"input", kb.input_clauses}, {"lifted", kb.lifted_clauses}}},
                {"unsupported", kb.unsupported.size()},
                {"notes", notes},
                {"advisories", advisories}}
               .dump(2)
        << "\n";
  } else {
    out << text;
    for (const auto& n : notes) err << "note: " << n << "\n";
    for (const auto& u : kb.unsupported) err << "unsupported: " << u.span.str() << ": " << u.name << "\n";
    for (const auto& n : advisories) err << "advisory: " << n << "\n";
  }
  return 0;
}

int cmd_compile(const Options& o, const std::string& path, int horizon, const std::string& history,
                const std::string& goal, std::string output, std::ostream& out, std::ostream& err) {
  auto sd = load_sd(o, path);
  asp::AspProgram program;
  if (goal.empty()) {
    program = asp::compile(sd, horizon);
    if (!history.empty()) asp::add_history(program, load_history(history), sd);
  } else {
    // Planning program: `horizon` steps of free actions after the history.
    program = asp::planning_program(sd, load_history(history), asp::parse_goal(goal), horizon);
  }
  if (output.empty()) output = sd.name + ".h" + std::to_string(program.horizon) + ".lp";
  const std::string text = asp::emit_text(program);
  if (output == "-") {
    out << text;
  } else {
    write_text(output, text);
  }
  if (o.json()) {
    if (output != "-") {
      out << json{{"ok", true}, {"output", output}, {"warnings", program.warnings}}.dump(2) << "\n";
    }
  } else {
    for (const auto& w : program.warnings) err << "warning: " << w << "\n";
    if (output != "-") out << "wrote " << output << "\n";
  }
  return 0;
}

int cmd_solve(const Options& o, const std::string& path, std::size_t max_models, bool check, std::ostream& out) {
  auto program = asp::parse_program(read_text(path), path);
  auto gp = asp::ground(program);
  auto models = asp::solve(gp, max_models);
  if (check) {
    for (const auto& m : models) {
      auto problems = asp::check_model(gp, m);
      if (!problems.empty()) throw Error("CheckFailed", "model violates " + problems.front());
    }
  }
  if (o.json()) {
    json ms = json::array();
    for (const auto& m : models) {
      json atoms = json::array();
      for (const auto& a : asp::model_atoms(gp, m)) atoms.push_back(a.str());
      ms.push_back(atoms);
    }
    out << json{{"ok", true}, {"satisfiable", !models.empty()}, {"atoms", gp.size()}, {"models", ms}}.dump(2) << "\n";
    return 0;
  }
  for (std::size_t i = 0; i < models.size(); ++i) {
    out << "Answer: " << i + 1 << "\n";
    std::string line;
    for (const auto& a : asp::model_atoms(gp, models[i])) line += (line.empty() ? "" : " ") + a.str();
    out << line << "\n";
  }
  out << (models.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << "\n";
  return 0;
}

// Compares the solver with brute-force enumeration on each program.
int cmd_oracle(const Options& o, const std::vector<std::string>& paths, std::ostream& out) {
  json rows = json::array();
  int mismatches = 0;
  for (const auto& path : paths) {
    auto gp = asp::ground(asp::parse_program(read_text(path), path));
    auto models = asp::solve(gp);
    bool agrees = models == asp::brute_force(gp);
    if (!agrees) ++mismatches;
    if (o.json()) {
      rows.push_back({{"file", path}, {"atoms", gp.size()}, {"models", models.size()}, {"agrees", agrees}});
    } else {
      out << path << ": " << gp.size() << " atoms, " << models.size() << " models, "
          << (agrees ? "agrees" : "DIFFERS") << "\n";
    }
  }
  if (o.json()) out << json{{"ok", mismatches == 0}, {"programs", rows}}.dump(2) << "\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_project(const Options& o, const std::string& path, const std::string& history, int horizon, bool check,
                std::ostream& out) {
  auto sd = load_sd(o, path);
  auto trajectories = asp::project(sd, load_history(history), horizon, {0, check});
  auto common = asp::common_values(trajectories);
  if (o.json()) {
    json steps = json::array();
    for (const auto& state : common) {
      json s = json::object();
      for (const auto& [f, v] : state) s[f.str()] = v ? json(v->str()) : json(nullptr);
      steps.push_back(s);
    }
    out << json{{"ok", true}, {"models", trajectories.size()}, {"steps", steps}}.dump(2) << "\n";
    return 0;
  }
  out << "models: " << trajectories.size() << "\n";
  for (std::size_t i = 0; i < common.size(); ++i) {
    for (const auto& [f, v] : common[i]) {
      if (v) out << f.str() << " = " << v->str() << " @ " << i << "\n";
    }
  }
  return 0;
}

int cmd_plan(const Options& o, const std::string& path, const std::string& history, const std::string& goal,
             int max_horizon, bool check, std::ostream& out) {
  auto sd = load_sd(o, path);
  auto plans = asp::plan(sd, load_history(history), asp::parse_goal(goal), max_horizon, {0, check});
  const std::size_t length = plans.front().steps.size();
  if (o.json()) {
    json ps = json::array();
    for (const auto& p : plans) {
      json steps = json::array();
      for (const auto& [i, a] : p.steps) steps.push_back({{"step", i}, {"action", a.str()}});
      ps.push_back(steps);
    }
    out << json{{"ok", true}, {"length", length}, {"plans", ps}}.dump(2) << "\n";
    return 0;
  }
  out << plans.size() << " plan(s) of length " << length << "\n";
  for (const auto& p : plans) {
    std::string line;
    for (const auto& [i, a] : p.steps) line += (line.empty() ? "" : ", ") + a.str() + " @ " + std::to_string(i);
    out << "[" << line << "]\n";
  }
  return 0;
}

int cmd_postdict(const Options& o, const std::string& path, const std::string& history, int horizon,
                 std::ostream& out) {
  auto sd = load_sd(o, path);
  auto completions = asp::postdict(sd, load_history(history), horizon);
  // Values shared by every completion are reported once; the rest vary.
  std::map<Term, std::set<Term>> values;
  for (const auto& c : completions) {
    for (const auto& [f, v] : c) values[f].insert(v);
  }
  if (o.json()) {
    json cs = json::array();
    for (const auto& c : completions) {
      json m = json::object();
      for (const auto& [f, v] : c) m[f.str()] = v.str();
      cs.push_back(m);
    }
    out << json{{"ok", true}, {"completions", cs}}.dump(2) << "\n";
    return 0;
  }
  out << "completions: " << completions.size() << "\n";
  for (const auto& [f, vs] : values) {
    std::string line;
    for (const auto& v : vs) line += (line.empty() ? "" : " | ") + v.str();
    out << f.str() << " = " << line << " @ 0\n";
  }
  return 0;
}

int cmd_search(const Options& o, const std::string& word, const std::string& pos, std::ostream& out) {
  auto lib = load_library(o);
  auto rows = library::search(lib, word, pos.empty() ? std::nullopt : std::optional<std::string>(pos));
  if (o.json()) {
    json a = json::array();
    for (const auto& r : rows) {
      a.push_back({{"word", r.word},
                   {"pos", r.pos},
                   {"sense", r.sense},
                   {"gloss", r.gloss},
                   {"target_kind", r.target_kind},
                   {"target", r.target},
                   {"module", r.module}});
    }
    out << json{{"ok", true}, {"results", a}}.dump(2) << "\n";
    return 0;
  }
  for (const auto& r : rows) {
    out << r.word << "\t" << r.pos << "\t" << r.sense << "\t" << r.target_kind << "\t" << r.target << "\t" << r.module
        << "\t" << r.gloss << "\n";
  }
  return 0;
}

int cmd_deps(const Options& o, const std::string& module, std::ostream& out) {
  auto order = library::deps(load_library(o), module);
  if (o.json()) {
    out << json{{"ok", true}, {"module", module}, {"deps", order}}.dump(2) << "\n";
  } else {
    for (const auto& m : order) out << m << "\n";
  }
  return 0;
}

int cmd_assemble(const Options& o, const std::vector<std::string>& modules, bool optional, std::ostream& out) {
  auto text = library::assemble(load_library(o), modules, optional);
  if (o.json()) {
    out << json{{"ok", true}, {"theory", text}}.dump(2) << "\n";
  } else {
    out << text;
  }
  return 0;
}

int cmd_regen(const Options& o, bool check, std::ostream& out, std::ostream& err) {
  fs::path dir = library_dir(o);
  auto r = library::regenerate(dir);
  if (check) {
    auto lib = library::Library::load(dir);
    std::vector<std::string> stale;
    auto shipped = lib.modules();
    for (std::size_t i = 0; i < r.modules.size(); ++i) {
      if (i >= shipped.size() || alm::print(shipped[i]) != alm::print(r.modules[i])) stale.push_back(r.modules[i].name);
    }
    if (lib.lookup() != r.lookup) stale.push_back("lookup.jsonl");
    if (o.json()) {
      out << json{{"ok", stale.empty()}, {"stale", stale}}.dump(2) << "\n";
    } else {
      for (const auto& s : stale) err << "stale: " << s << "\n";
      if (stale.empty()) out << "library is up to date\n";
    }
    return stale.empty() ? 0 : 1;
  }
  library::write_regenerated(dir, r);
  if (o.json()) {
    out << json{{"ok", true}, {"modules", r.modules.size()}, {"lookup", r.lookup.size()}}.dump(2) << "\n";
  } else {
    out << "wrote " << r.modules.size() << " modules and " << r.lookup.size() << " lookup entries to "
        << dir.string() << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ALM action libraries: translate, check, compile and reason", "corealm"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--lib", o.lib_dir, "Library directory (default: $COREALM_LIB_DIR)");

  std::string sd_path, history, goal, output, word, pos, module;
  int horizon = 1;
  int max_horizon = 5;
  std::size_t max_models = 0;
  bool check_models = false, with_optional = false, regen_check = false;
  std::vector<std::string> modules;
  Km2AlmArgs km;

  auto* check = app.add_subcommand("check", "Parse and validate a system description or module file");
  check->add_option("file", sd_path)->required();

  auto* km2alm = app.add_subcommand("km2alm", "Translate KM frames to an ALM module");
  km2alm->add_option("files", km.files, "KM files to translate")->required();
  km2alm->add_option("--preps", km.preps, "Preposition and state-negation table (JSON)");
  km2alm->add_option("--patch", km.patch, "Editorial patch (JSON)");
  km2alm->add_option("--context", km.context, "KM files supplying referenced declarations");
  km2alm->add_option("--opposites", km.opposites, "Opposite action pairs to cross-check (JSON)");
  km2alm->add_option("--name", km.name, "Module name (default: first file's stem)");

  auto* compile = app.add_subcommand("compile", "Compile a system description to a logic program");
  compile->add_option("file", sd_path)->required();
  compile->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);
  compile->add_option("--history", history, "History file of hpd/obs facts");
  compile->add_option("--goal", goal, "Emit the planning program for this goal; --horizon is the plan length");
  compile->add_option("-o,--output", output, "Output file, '-' for stdout (default: <name>.h<N>.lp)");

  auto* solve = app.add_subcommand("solve", "Compute the answer sets of a logic program");
  solve->add_option("file", sd_path)->required();
  solve->add_option("--max-models", max_models, "Stop after K models (0 = all)");
  solve->add_flag("--check", check_models, "Re-check every model independently");

  std::vector<std::string> programs;
  auto* oracle = app.add_subcommand("oracle", "Check the solver against brute-force enumeration (<= 20 atoms)");
  oracle->add_option("files", programs)->required();

  auto* project = app.add_subcommand("project", "Temporal projection from a history");
  project->add_option("file", sd_path)->required();
  project->add_option("--history", history);
  project->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);
  project->add_flag("--check", check_models, "Re-check every model independently");

  auto* plan = app.add_subcommand("plan", "Find all shortest plans for a goal");
  plan->add_option("file", sd_path)->required();
  plan->add_option("--history", history);
  plan->add_option("--goal", goal, "Comma-separated fluent(args)=value items")->required();
  plan->add_option("--max-horizon", max_horizon)->check(CLI::NonNegativeNumber);
  plan->add_flag("--check", check_models, "Re-check every model independently");

  auto* postdict = app.add_subcommand("postdict", "Initial states consistent with a history");
  postdict->add_option("file", sd_path)->required();
  postdict->add_option("--history", history);
  postdict->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);

  auto* search = app.add_subcommand("search", "Look up library symbols by word or gloss");
  search->add_option("word", word)->required();
  search->add_option("--pos", pos)->check(CLI::IsMember({"v", "a"}));

  auto* deps = app.add_subcommand("deps", "List a library module and its ancestors, root first");
  deps->add_option("module", module)->required();

  auto* assemble = app.add_subcommand("assemble", "Print library modules with their dependencies");
  assemble->add_option("modules", modules);
  assemble->add_flag("--with-optional", with_optional, "Include optional leaf modules");

  auto* regen = app.add_subcommand("regen", "Rebuild the library modules from their KM sources");
  regen->add_flag("--check", regen_check, "Only report modules that differ from the shipped files");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(o, sd_path, out, err);
    if (*km2alm) return cmd_km2alm(o, km, out, err);
    if (*compile) return cmd_compile(o, sd_path, horizon, history, goal, output, out, err);
    if (*solve) return cmd_solve(o, sd_path, max_models, check_models, out);
    if (*oracle) return cmd_oracle(o, programs, out);
    if (*project) return cmd_project(o, sd_path, history, horizon, check_models, out);
    if (*plan) return cmd_plan(o, sd_path, history, goal, max_horizon, check_models, out);
    if (*postdict) return cmd_postdict(o, sd_path, history, horizon, out);
    if (*search) return cmd_search(o, word, pos, out);
    if (*deps) return cmd_deps(o, module, out);
    if (*assemble) return cmd_assemble(o, modules, with_optional, out);
    if (*regen) return cmd_regen(o, regen_check, out, err);
  } catch (const Error& e) {
    report_error(o, e, out, err);
    return 1;
  } catch (const json::exception& e) {
    report_error(o, Error("BadJson", e.what()), out, err);
    return 1;
  }
  return 2;
}

}  // namespace corealm::cli

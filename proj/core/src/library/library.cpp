#include "corealm/library/library.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "corealm/alm/model.hpp"
#include "corealm/alm/parser.hpp"
#include "corealm/alm/printer.hpp"
#include "corealm/error.hpp"
#include "corealm/io.hpp"
#include "corealm/km/kb.hpp"
#include "corealm/km/sexpr.hpp"

namespace corealm::library {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("LibraryError", message); }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Manifest Manifest::from_json(const std::string& text) {
  Manifest m;
  try {
    auto j = json::parse(text);
    m.library = j.value("library", m.library);
    m.km = j.value("km", std::vector<std::string>{});
    m.translation = j.value("translation", "");
    m.patch = j.value("patch", "");
    m.glosses = j.value("glosses", "");
    for (const auto& e : j.at("modules")) {
      ManifestEntry entry;
      entry.name = e.at("name").get<std::string>();
      entry.file = e.at("file").get<std::string>();
      entry.depends_on = e.value("depends_on", std::vector<std::string>{});
      entry.optional = e.value("optional", false);
      entry.sources = e.value("sources", std::vector<std::string>{});
      m.modules.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    fail(std::string("corrupt manifest: ") + e.what());
  }
  return m;
}

std::string to_jsonl(const std::vector<LookupEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    json j = {{"word", e.word},     {"pos", e.pos},       {"sense", e.sense},  {"gloss", e.gloss},
              {"target_kind", e.target_kind}, {"target", e.target}, {"module", e.module}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<LookupEntry> parse_lookup(const std::string& jsonl) {
  std::vector<LookupEntry> out;
  std::size_t start = 0;
  int line_no = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string::npos) end = jsonl.size();
    std::string line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = json::parse(line);
      out.push_back({j.at("word"), j.at("pos"), j.at("sense"), j.at("gloss"), j.at("target_kind"), j.at("target"),
                     j.at("module")});
    } catch (const json::exception& e) {
      fail("lookup.jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Library Library::load(const fs::path& dir) {
  Library lib;
  lib.dir_ = dir;
  if (!fs::is_regular_file(dir / "manifest.json")) fail("no manifest.json in " + dir.string());
  lib.manifest_ = Manifest::from_json(read_text(dir / "manifest.json"));

  for (const auto& e : lib.manifest_.modules) {
    if (lib.modules_.contains(e.name)) fail("module " + e.name + " listed twice");
    fs::path file = dir / e.file;
    if (!fs::is_regular_file(file)) fail("module " + e.name + ": missing file " + e.file);
    alm::ModuleDecl m;
    try {
      m = alm::parse_module(read_text(file), file.string());
    } catch (const Error& err) {
      fail("module " + e.name + ": " + err.what());
    }
    if (m.name != e.name) fail("file " + e.file + " declares module " + m.name + ", expected " + e.name);
    if (m.optional != e.optional || m.depends_on != e.depends_on) {
      fail("module " + e.name + ": header disagrees with the manifest");
    }
    lib.modules_.emplace(e.name, std::move(m));
  }
  for (const auto& e : lib.manifest_.modules) {
    for (const auto& d : e.depends_on) {
      if (!lib.modules_.contains(d)) fail("module " + e.name + " depends on unknown module " + d);
    }
    if (e.optional) {
      if (e.depends_on.size() != 1 || lib.modules_.at(e.depends_on[0]).optional) {
        fail("optional module " + e.name + " must depend on exactly one non-optional module");
      }
    }
  }
  for (const auto& e : lib.manifest_.modules) {
    for (const auto& other : lib.manifest_.modules) {
      if (e.optional && std::ranges::find(other.depends_on, e.name) != other.depends_on.end()) {
        fail("optional module " + e.name + " must be a leaf");
      }
    }
  }
  try {
    for (const auto& e : lib.manifest_.modules) (void)alm::dependency_order(lib.modules(), e.name, true);
  } catch (const Error& err) {
    fail(err.what());
  }

  if (fs::is_regular_file(dir / "lookup.jsonl")) lib.lookup_ = parse_lookup(read_text(dir / "lookup.jsonl"));
  std::set<std::tuple<std::string, std::string, int>> keys;
  for (const auto& l : lib.lookup_) {
    if (!keys.insert({l.word, l.pos, l.sense}).second) {
      fail("duplicate lookup entry " + l.word + "/" + l.pos + "/" + std::to_string(l.sense));
    }
    auto it = lib.modules_.find(l.module);
    if (it == lib.modules_.end()) fail("lookup entry " + l.word + " names unknown module " + l.module);
    const auto& m = it->second;
    bool declared = false;
    for (const auto& s : m.sorts) declared = declared || std::ranges::find(s.names, l.target) != s.names.end();
    for (const auto& f : m.functions) declared = declared || f.name == l.target;
    if (!declared) fail("lookup entry " + l.word + ": " + l.target + " is not declared in " + l.module);
  }
  return lib;
}

const alm::ModuleDecl& Library::module(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) throw Error("UnknownModule", "library " + manifest_.library + " has no module " + name);
  return it->second;
}

std::vector<alm::ModuleDecl> Library::modules() const {
  std::vector<alm::ModuleDecl> out;
  for (const auto& e : manifest_.modules) out.push_back(modules_.at(e.name));
  return out;
}

fs::path default_dir(const fs::path& fallback) {
  if (const char* env = std::getenv("COREALM_LIB_DIR"); env && *env) return env;
  return fallback;
}

std::vector<LookupEntry> search(const Library& lib, const std::string& query, const std::optional<std::string>& pos) {
  const std::string q = lower(query);
  std::vector<LookupEntry> out;
  for (const auto& e : lib.lookup()) {
    if (pos && e.pos != *pos) continue;
    if (lower(e.word).find(q) != std::string::npos || lower(e.gloss).find(q) != std::string::npos) out.push_back(e);
  }
  std::ranges::stable_sort(out, [&](const LookupEntry& a, const LookupEntry& b) {
    bool ea = lower(a.word) == q;
    bool eb = lower(b.word) == q;
    return std::tie(eb, a.word, a.pos, a.sense) < std::tie(ea, b.word, b.pos, b.sense);
  });
  return out;
}

std::vector<std::string> deps(const Library& lib, const std::string& module) {
  (void)lib.module(module);
  return alm::dependency_order(lib.modules(), module);
}

std::vector<alm::ModuleDecl> closure(const Library& lib, const std::vector<std::string>& modules,
                                     bool include_optional) {
  std::vector<std::string> names;
  for (const auto& m : modules) {
    (void)lib.module(m);
    for (const auto& n : alm::dependency_order(lib.modules(), m, include_optional)) {
      if (std::ranges::find(names, n) == names.end()) names.push_back(n);
    }
  }
  // Keep manifest order, which lists dependencies first.
  std::vector<alm::ModuleDecl> out;
  for (const auto& e : lib.manifest().modules) {
    if (std::ranges::find(names, e.name) != names.end()) out.push_back(lib.module(e.name));
  }
  return out;
}

std::string assemble(const Library& lib, const std::vector<std::string>& modules, bool include_optional) {
  std::string out;
  for (const auto& m : closure(lib, modules, include_optional)) {
    if (!out.empty()) out += "\n";
    out += alm::print(m);
  }
  return out;
}

alm::SystemDescription resolve_imports(const alm::SystemDescription& sd, const Library& lib, bool include_optional) {
  std::vector<std::string> wanted;
  for (const auto& imp : sd.imports) {
    if (imp.library != lib.name()) {
      throw Error("UnknownModule", "unknown library " + imp.library + " (loaded: " + lib.name() + ")", imp.span);
    }
    if (!lib.has(imp.module)) {
      throw Error("UnknownModule", "library " + lib.name() + " has no module " + imp.module, imp.span);
    }
    wanted.push_back(imp.module);
  }
  alm::SystemDescription out = sd;
  out.modules = closure(lib, wanted, include_optional);
  for (const auto& m : sd.modules) {
    if (std::ranges::find_if(out.modules, [&](const auto& x) { return x.name == m.name; }) != out.modules.end()) {
      throw Error("DuplicateModule", "module " + m.name + " is both imported and declared inline", m.span);
    }
    out.modules.push_back(m);
  }
  return out;
}

Regenerated regenerate(const fs::path& dir) {
  const Manifest manifest = Manifest::from_json(read_text(dir / "manifest.json"));
  km::Patch patch;
  if (!manifest.patch.empty()) patch = km::Patch::from_json(read_text(dir / manifest.patch));
  km::TranslationConfig config;
  if (!manifest.translation.empty()) config = km::TranslationConfig::from_json(read_text(dir / manifest.translation));
  std::map<std::string, std::string> glosses;
  if (!manifest.glosses.empty()) {
    try {
      glosses = json::parse(read_text(dir / manifest.glosses)).get<std::map<std::string, std::string>>();
    } catch (const json::exception& e) {
      fail(std::string("bad glosses file: ") + e.what());
    }
  }

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& f : manifest.km) files.emplace_back(f, read_text(dir / f));
  if (!patch.km.empty()) files.emplace_back(manifest.patch, patch.km);
  const km::KmKb kb = km::load_km(files);

  Regenerated r;
  r.outputs = km::translate_kb(kb, config, &patch);

  std::map<std::string, alm::ModuleDecl> built;
  std::map<std::string, std::string> owner;  // KM source -> module
  for (const auto& e : manifest.modules) {
    for (const auto& s : e.sources) owner[s] = e.name;
  }
  for (const auto& o : r.outputs) {
    if (!owner.contains(o.source)) fail(o.source + " is not assigned to any module");
  }
  auto outputs_of = [&](const std::string& module) {
    std::vector<km::TranslationOutput> out;
    for (const auto& o : r.outputs) {
      if (owner.at(o.source) == module) out.push_back(o);
    }
    return out;
  };
  for (const auto& e : manifest.modules) {
    for (const auto& d : e.depends_on) {
      if (!built.contains(d)) fail("module " + e.name + " is listed before its dependency " + d);
    }
    alm::ModuleDecl m;
    if (e.optional) {
      if (e.depends_on.size() != 1) fail("optional module " + e.name + " must have one parent");
      m = km::build_optional_module(outputs_of(e.depends_on[0]), e.name, e.depends_on[0]);
    } else {
      std::vector<alm::ModuleDecl> ancestors;
      std::vector<alm::ModuleDecl> all;
      for (const auto& [_, decl] : built) all.push_back(decl);
      for (const auto& d : e.depends_on) {
        for (const auto& n : alm::dependency_order(all, d)) {
          if (std::ranges::find_if(ancestors, [&](const auto& x) { return x.name == n; }) == ancestors.end()) {
            ancestors.push_back(built.at(n));
          }
        }
      }
      m = km::build_module(outputs_of(e.name), e.name, e.depends_on, ancestors);
    }
    built[e.name] = m;
    r.modules.push_back(std::move(m));
  }

  for (const auto& o : r.outputs) {
    if (o.synsets.empty()) continue;
    const km::ClassKind kind = kb.cls(o.source) ? kb.cls(o.source)->kind : km::ClassKind::Entity;
    for (const auto& s : o.synsets) {
      LookupEntry l;
      l.word = s.word;
      l.pos = s.pos;
      l.sense = s.sense;
      auto g = glosses.find(s.word + "/" + s.pos + "/" + std::to_string(s.sense));
      if (g == glosses.end()) fail("no gloss for " + s.word + "/" + s.pos + "/" + std::to_string(s.sense));
      l.gloss = g->second;
      l.target_kind = kind == km::ClassKind::Action ? "action-class" : "fluent";
      l.target = o.symbol;
      l.module = owner.at(o.source);
      r.lookup.push_back(std::move(l));
    }
  }
  std::ranges::sort(r.lookup, [](const LookupEntry& a, const LookupEntry& b) {
    return std::tie(a.word, a.pos, a.sense) < std::tie(b.word, b.pos, b.sense);
  });
  return r;
}

void write_regenerated(const fs::path& dir, const Regenerated& r) {
  const Manifest manifest = Manifest::from_json(read_text(dir / "manifest.json"));
  for (std::size_t i = 0; i < r.modules.size(); ++i) {
    fs::path file = dir / manifest.modules.at(i).file;
    fs::create_directories(file.parent_path());
    write_text(file, alm::print(r.modules[i]));
  }
  write_text(dir / "lookup.jsonl", to_jsonl(r.lookup));
}

}  // namespace corealm::library

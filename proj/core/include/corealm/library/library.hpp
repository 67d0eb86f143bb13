#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corealm/alm/ast.hpp"
#include "corealm/km/translate.hpp"

namespace corealm::library {

struct ManifestEntry {
  std::string name;
  std::string file;  // relative to the library directory
  std::vector<std::string> depends_on;
  bool optional = false;
  std::vector<std::string> sources;  // KM slots and classes translated into the module
};

struct Manifest {
  std::string library = "coreALMlib";
  std::vector<std::string> km;  // KM source files, relative
  std::string translation;      // preposition map and state negations
  std::string patch;
  std::string glosses;
  std::vector<ManifestEntry> modules;

  static Manifest from_json(const std::string& text);
};

struct LookupEntry {
  std::string word;
  std::string pos;  // "v" or "a"
  int sense = 0;
  std::string gloss;
  std::string target_kind;  // "action-class" or "fluent"
  std::string target;
  std::string module;

  friend bool operator==(const LookupEntry&, const LookupEntry&) = default;
};

std::string to_jsonl(const std::vector<LookupEntry>& entries);
std::vector<LookupEntry> parse_lookup(const std::string& jsonl);

/// A loaded, validated module library. Immutable after load.
class Library {
 public:
  /// Reads `manifest.json`, every module file and `lookup.jsonl` under `dir`.
  /// Throws Error("LibraryError") on a corrupt manifest, a missing file, a
  /// dangling dependency or lookup target, or a module that does not parse.
  static Library load(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const Manifest& manifest() const { return manifest_; }
  const std::string& name() const { return manifest_.library; }
  bool has(const std::string& module) const { return modules_.contains(module); }
  /// Throws Error("UnknownModule").
  const alm::ModuleDecl& module(const std::string& name) const;
  /// All modules in manifest order.
  std::vector<alm::ModuleDecl> modules() const;
  const std::vector<LookupEntry>& lookup() const { return lookup_; }

 private:
  std::filesystem::path dir_;
  Manifest manifest_;
  std::map<std::string, alm::ModuleDecl> modules_;
  std::vector<LookupEntry> lookup_;
};

/// Default location: $COREALM_LIB_DIR, else the given fallback.
std::filesystem::path default_dir(const std::filesystem::path& fallback);

/// Entries whose word or gloss contains `query` (case-insensitive); exact word
/// matches first, then by word, pos and sense.
std::vector<LookupEntry> search(const Library& lib, const std::string& query,
                                const std::optional<std::string>& pos = std::nullopt);

/// `module` and its ancestors, root first. Throws Error("UnknownModule").
std::vector<std::string> deps(const Library& lib, const std::string& module);

/// Closure of `modules` (optional leaves only when requested), printed as a
/// sequence of module blocks in dependency order.
std::vector<alm::ModuleDecl> closure(const Library& lib, const std::vector<std::string>& modules,
                                     bool include_optional);
std::string assemble(const Library& lib, const std::vector<std::string>& modules, bool include_optional);

/// Replaces the system description's library imports by the imported module
/// closure, placed ahead of its inline modules. Throws Error("UnknownModule").
alm::SystemDescription resolve_imports(const alm::SystemDescription& sd, const Library& lib,
                                       bool include_optional = false);

/// Library contents rebuilt from the KM sources named in the manifest.
struct Regenerated {
  std::vector<alm::ModuleDecl> modules;  // manifest order
  std::vector<LookupEntry> lookup;
  std::vector<km::TranslationOutput> outputs;
};

Regenerated regenerate(const std::filesystem::path& dir);

/// Writes the regenerated module files and lookup table into `dir`.
void write_regenerated(const std::filesystem::path& dir, const Regenerated& r);

}  // namespace corealm::library

#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corealm/asp/program.hpp"

namespace corealm::asp {

/// Variable-free rule over interned atoms.
struct GroundRule {
  enum class Kind { Normal, Constraint, Choice };

  Kind kind = Kind::Normal;
  std::vector<int> head;  // one atom for Normal, the elements for Choice
  int lower = 0;
  int upper = -1;
  std::vector<int> pos;
  std::vector<int> neg;

  friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

struct GroundProgram {
  std::vector<Term> atoms;  // atom id -> key (see Atom::key)
  std::unordered_map<Term, int, TermHash> index;
  std::vector<GroundRule> rules;

  int intern(const Term& key);
  int find(const Term& key) const;  // -1 when absent
  std::size_t size() const { return atoms.size(); }
  std::string str(const GroundRule& r) const;
  /// Rules printed one per line, sorted; used to compare instantiations.
  std::vector<std::string> canonical() const;
};

/// Instantiates the program bottom-up: a rule instance is produced when each
/// positive body atom is derivable in some model, and facts are folded into
/// rule bodies. Complementary atoms `p` and `-p` get a consistency
/// constraint.
GroundProgram ground(const AspProgram& program);

/// Sorted atom ids of a stable model.
using AnswerSet = std::vector<int>;

struct SolveOptions {
  std::size_t max_models = 0;  // 0 = all
  std::size_t max_atoms = 2'000'000;
  /// Atoms forced true (positive id) or false (-(id + 1)) before search.
  std::vector<int> assumptions;
};

/// Stable models, sorted. Search is DPLL over atoms with propagation of the
/// program completion and cardinality bounds, followed by a minimality check
/// of every total assignment against the reduct. Throws
/// Error("ResourceLimit") when the ground program exceeds `max_atoms`.
std::vector<AnswerSet> solve(const GroundProgram& gp, const SolveOptions& options = {});
std::vector<AnswerSet> solve(const GroundProgram& gp, std::size_t max_models);

/// Reference enumeration over all 2^n interpretations. Throws
/// Error("TooLarge") above `atom_limit` atoms.
std::vector<AnswerSet> brute_force(const GroundProgram& gp, std::size_t atom_limit = 20);

/// True when `model` satisfies every rule and equals the least model of the
/// program's reduct with respect to itself.
bool is_stable(const GroundProgram& gp, const AnswerSet& model);

/// Independent check of a model against every ground rule; returns the
/// violated rules as text (empty when the model is a stable model).
std::vector<std::string> check_model(const GroundProgram& gp, const AnswerSet& model);

/// Atoms of a model as keys, in id order.
std::vector<Term> model_atoms(const GroundProgram& gp, const AnswerSet& model);

}  // namespace corealm::asp

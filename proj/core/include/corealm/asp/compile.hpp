#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corealm/alm/ast.hpp"
#include "corealm/asp/program.hpp"
#include "corealm/asp/solver.hpp"

namespace corealm::asp {

// Encoding of ALM functions as atoms:
//   boolean fluent      holds(f(x), I)  / -holds(f(x), I)
//   other fluent        val(f(x), v, I)
//   boolean static      stat(f(x))      / -stat(f(x))     (attributes too)
//   other static        stat(f(x), v)
// Occurrences are occurs(a, I); sort membership is instance(x, s).

/// Compiles a system description whose imports are resolved into a program
/// over steps 0..horizon. Throws Error("InvalidSystemDescription") when the
/// description does not validate.
AspProgram compile(const alm::SystemDescription& sd, int horizon);

struct Observation {
  Term fluent;
  Term value;
  int step = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct History {
  std::vector<std::pair<Term, int>> happened;  // hpd(a, i)
  std::vector<Observation> observed;           // obs(f, v, i)

  /// One `hpd(a, i).` or `obs(f, v, i).` fact per line. Throws
  /// Error("BadHistory").
  static History parse(std::string_view text, const std::string& file = "");
  /// First step after every recorded occurrence and observation.
  int end() const;
};

/// Adds the history facts, `occurs(A, I) :- hpd(A, I).` and the observation
/// constraints. Throws Error("BadHistory") for unknown actions or fluents or
/// steps beyond the horizon.
void add_history(AspProgram& program, const History& history, const alm::SystemDescription& sd);

/// Fluent values at each step (index = step) plus the occurrences.
struct Trajectory {
  std::vector<std::map<Term, Term>> states;
  std::vector<std::pair<int, Term>> occurrences;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

Trajectory trajectory(const GroundProgram& gp, const AnswerSet& model, int horizon);

/// Values shared by every trajectory; std::nullopt where they disagree.
std::vector<std::map<Term, std::optional<Term>>> common_values(const std::vector<Trajectory>& trajectories);

struct ReasoningOptions {
  std::size_t max_models = 0;
  bool check_models = false;  // run the independent checker on every model
};

/// Temporal projection: one trajectory per answer set. Throws
/// Error("Inconsistent") when there is none.
std::vector<Trajectory> project(const alm::SystemDescription& sd, const History& history, int horizon,
                                const ReasoningOptions& options = {});

using Goal = std::vector<std::pair<Term, Term>>;  // (fluent, value)

/// `fluent(args)=value` items separated by commas. Throws Error("BadGoal").
Goal parse_goal(std::string_view text);

struct Plan {
  std::vector<std::pair<int, Term>> steps;  // (step, action)

  std::string str() const;
  friend bool operator==(const Plan&, const Plan&) = default;
  friend auto operator<=>(const Plan& a, const Plan& b) {
    auto key = [](const Plan& p) {
      std::vector<std::pair<std::string, int>> k;
      for (const auto& [i, a] : p.steps) k.emplace_back(a.str(), i);
      return k;
    };
    return key(a) <=> key(b);
  }
};

/// All shortest plans achieving the goal after the history, trying lengths
/// 0..max_length. At most one action per step. Throws
/// Error("NoPlanWithinHorizon").
std::vector<Plan> plan(const alm::SystemDescription& sd, const History& history, const Goal& goal,
                       int max_length, const ReasoningOptions& options = {});

/// Program used by `plan` for one length, exposed for inspection.
AspProgram planning_program(const alm::SystemDescription& sd, const History& history, const Goal& goal, int length);

/// Step-0 values of the basic fluents not observed at step 0, one entry per
/// distinct completion consistent with the history. Throws
/// Error("Inconsistent").
std::vector<std::map<Term, Term>> postdict(const alm::SystemDescription& sd, const History& history, int horizon,
                                           const ReasoningOptions& options = {});

/// Ground basic fluent terms of the description with their ranges
/// (booleans for boolean fluents).
std::vector<std::pair<Term, std::string>> basic_fluents(const alm::SystemDescription& sd);

}  // namespace corealm::asp

#include <algorithm>
#include <cstdint>
#include <map>

#include "corealm/asp/solver.hpp"
#include "corealm/error.hpp"

namespace corealm::asp {

namespace {

// ---------------------------------------------------------------------------
// Reduct checks shared by the oracle and the post-hoc checker
// ---------------------------------------------------------------------------

bool body_true(const GroundRule& r, const std::vector<char>& in) {
  for (int a : r.pos) {
    if (!in[static_cast<std::size_t>(a)]) return false;
  }
  for (int a : r.neg) {
    if (in[static_cast<std::size_t>(a)]) return false;
  }
  return true;
}

int count_true(const std::vector<int>& atoms, const std::vector<char>& in) {
  int n = 0;
  for (int a : atoms) n += in[static_cast<std::size_t>(a)] ? 1 : 0;
  return n;
}

/// Least model of the reduct of `gp` with respect to `in`.
std::vector<char> reduct_least_model(const GroundProgram& gp, const std::vector<char>& in) {
  const std::size_t n = gp.size();
  std::vector<char> derived(n, 0);
  // Rules whose negative part survives the reduct, with a counter of
  // positive atoms not yet derived.
  std::vector<std::vector<std::size_t>> watch(n);
  std::vector<int> missing(gp.rules.size(), -1);
  std::vector<int> queue;
  auto fire = [&](std::size_t ri) {
    const GroundRule& r = gp.rules[ri];
    for (int h : r.head) {
      if (r.kind == GroundRule::Kind::Choice && !in[static_cast<std::size_t>(h)]) continue;
      if (!derived[static_cast<std::size_t>(h)]) {
        derived[static_cast<std::size_t>(h)] = 1;
        queue.push_back(h);
      }
    }
  };
  for (std::size_t ri = 0; ri < gp.rules.size(); ++ri) {
    const GroundRule& r = gp.rules[ri];
    if (r.kind == GroundRule::Kind::Constraint) continue;
    bool blocked = std::ranges::any_of(r.neg, [&](int a) { return in[static_cast<std::size_t>(a)]; });
    if (blocked) continue;
    missing[ri] = static_cast<int>(r.pos.size());
    for (int a : r.pos) watch[static_cast<std::size_t>(a)].push_back(ri);
    if (r.pos.empty()) fire(ri);
  }
  while (!queue.empty()) {
    int a = queue.back();
    queue.pop_back();
    for (std::size_t ri : watch[static_cast<std::size_t>(a)]) {
      if (--missing[ri] == 0) fire(ri);
    }
  }
  return derived;
}

std::vector<char> membership(const GroundProgram& gp, const AnswerSet& model) {
  std::vector<char> in(gp.size(), 0);
  for (int a : model) in[static_cast<std::size_t>(a)] = 1;
  return in;
}

bool satisfies_rules(const GroundProgram& gp, const std::vector<char>& in) {
  for (const auto& r : gp.rules) {
    if (!body_true(r, in)) continue;
    switch (r.kind) {
      case GroundRule::Kind::Normal:
        if (!in[static_cast<std::size_t>(r.head[0])]) return false;
        break;
      case GroundRule::Kind::Constraint:
        return false;
      case GroundRule::Kind::Choice: {
        int c = count_true(r.head, in);
        if (c < r.lower || (r.upper >= 0 && c > r.upper)) return false;
        break;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

constexpr signed char kUnknown = 0;
constexpr signed char kTrue = 1;
constexpr signed char kFalse = -1;

class Solver {
 public:
  Solver(const GroundProgram& gp, const SolveOptions& options) : gp_(gp), options_(options), n_(gp.size()) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> body_ids;
    auto body_of = [&](const GroundRule& r) {
      auto key = std::make_pair(r.pos, r.neg);
      auto it = body_ids.find(key);
      if (it != body_ids.end()) return it->second;
      int id = static_cast<int>(bodies_.size());
      bodies_.push_back({r.pos, r.neg, {}, {}, false});
      body_ids.emplace(std::move(key), id);
      return id;
    };
    atoms_.resize(n_);
    for (const auto& r : gp.rules) {
      int b = body_of(r);
      switch (r.kind) {
        case GroundRule::Kind::Normal:
          bodies_[static_cast<std::size_t>(b)].heads.push_back(r.head[0]);
          atoms_[static_cast<std::size_t>(r.head[0])].supports.push_back(b);
          atoms_[static_cast<std::size_t>(r.head[0])].rule_bodies.push_back(b);
          break;
        case GroundRule::Kind::Constraint:
          bodies_[static_cast<std::size_t>(b)].constraint = true;
          break;
        case GroundRule::Kind::Choice: {
          int g = static_cast<int>(groups_.size());
          groups_.push_back({b, r.head, r.lower, r.upper});
          bodies_[static_cast<std::size_t>(b)].groups.push_back(g);
          for (int a : r.head) {
            atoms_[static_cast<std::size_t>(a)].supports.push_back(b);
            atoms_[static_cast<std::size_t>(a)].groups.push_back(g);
            atoms_[static_cast<std::size_t>(a)].chosen = true;
          }
          break;
        }
      }
    }
    for (std::size_t b = 0; b < bodies_.size(); ++b) {
      for (int a : bodies_[b].pos) atoms_[static_cast<std::size_t>(a)].occurs.push_back({static_cast<int>(b), true});
      for (int a : bodies_[b].neg) atoms_[static_cast<std::size_t>(a)].occurs.push_back({static_cast<int>(b), false});
    }
    for (auto& a : atoms_) {
      std::ranges::sort(a.supports);
      a.supports.erase(std::unique(a.supports.begin(), a.supports.end()), a.supports.end());
    }
    value_.assign(n_ + bodies_.size(), kUnknown);
    // Choice atoms first: they are the free part of most programs.
    for (std::size_t a = 0; a < n_; ++a) {
      if (atoms_[a].chosen) order_.push_back(static_cast<int>(a));
    }
    for (std::size_t a = 0; a < n_; ++a) {
      if (!atoms_[a].chosen) order_.push_back(static_cast<int>(a));
    }
  }

  std::vector<AnswerSet> run() {
    std::vector<AnswerSet> models;
    if (!initialize()) return models;
    for (;;) {
      if (!propagate()) {
        if (!backtrack()) break;
        continue;
      }
      int var = pick();
      if (var < 0) {
        AnswerSet m;
        for (std::size_t a = 0; a < n_; ++a) {
          if (value_[a] == kTrue) m.push_back(static_cast<int>(a));
        }
        if (stable(m)) {
          models.push_back(std::move(m));
          if (options_.max_models && models.size() >= options_.max_models) break;
        }
        if (!backtrack()) break;
        continue;
      }
      decisions_.push_back({var, false, trail_.size()});
      assign(static_cast<std::size_t>(var), kFalse);
    }
    std::ranges::sort(models);
    return models;
  }

 private:
  struct BodyInfo {
    std::vector<int> pos;
    std::vector<int> neg;
    std::vector<int> heads;   // normal rules
    std::vector<int> groups;  // choice rules
    bool constraint = false;
  };
  struct AtomInfo {
    std::vector<int> supports;     // bodies of rules that can derive the atom
    std::vector<int> rule_bodies;  // bodies of normal rules with this head
    std::vector<int> groups;
    std::vector<std::pair<int, bool>> occurs;  // (body, positive)
    bool chosen = false;
  };
  struct Group {
    int body;
    std::vector<int> atoms;
    int lower;
    int upper;
  };
  struct Decision {
    int var;
    bool flipped;
    std::size_t trail_mark;
  };

  std::size_t body_var(int b) const { return n_ + static_cast<std::size_t>(b); }
  signed char body_value(int b) const { return value_[body_var(b)]; }
  signed char atom_value(int a) const { return value_[static_cast<std::size_t>(a)]; }

  bool assign(std::size_t var, signed char v) {
    if (value_[var] == v) return true;
    if (value_[var] != kUnknown) return false;
    value_[var] = v;
    trail_.push_back(var);
    return true;
  }

  bool initialize() {
    for (std::size_t b = 0; b < bodies_.size(); ++b) {
      if (bodies_[b].constraint && !assign(body_var(static_cast<int>(b)), kFalse)) return false;
      if (bodies_[b].pos.empty() && bodies_[b].neg.empty() && !assign(body_var(static_cast<int>(b)), kTrue)) {
        return false;
      }
    }
    for (std::size_t a = 0; a < n_; ++a) {
      if (atoms_[a].supports.empty() && !assign(a, kFalse)) return false;
    }
    for (int lit : options_.assumptions) {
      std::size_t a = static_cast<std::size_t>(lit >= 0 ? lit : -lit - 1);
      if (a >= n_) throw Error("BadAssumption", "assumption refers to atom " + std::to_string(a));
      if (!assign(a, lit >= 0 ? kTrue : kFalse)) return false;
    }
    // Every group and body is examined once; afterwards only changes matter.
    for (std::size_t b = 0; b < bodies_.size(); ++b) {
      if (!check_body(static_cast<int>(b))) return false;
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (!check_group(static_cast<int>(g))) return false;
    }
    return true;
  }

  bool lit_true(int a, bool positive) const { return atom_value(a) == (positive ? kTrue : kFalse); }
  bool lit_false(int a, bool positive) const { return atom_value(a) == (positive ? kFalse : kTrue); }

  bool check_body(int b) {
    const BodyInfo& body = bodies_[static_cast<std::size_t>(b)];
    int unknown = 0;
    int last_atom = -1;
    bool last_positive = true;
    auto scan = [&](const std::vector<int>& atoms, bool positive) {
      for (int a : atoms) {
        if (lit_false(a, positive)) return false;
        if (!lit_true(a, positive)) {
          ++unknown;
          last_atom = a;
          last_positive = positive;
        }
      }
      return true;
    };
    if (!scan(body.pos, true) || !scan(body.neg, false)) return assign(body_var(b), kFalse);
    if (unknown == 0) return assign(body_var(b), kTrue);
    signed char v = body_value(b);
    if (v == kTrue) {
      for (int a : body.pos) {
        if (!assign(static_cast<std::size_t>(a), kTrue)) return false;
      }
      for (int a : body.neg) {
        if (!assign(static_cast<std::size_t>(a), kFalse)) return false;
      }
    } else if (v == kFalse && unknown == 1) {
      return assign(static_cast<std::size_t>(last_atom), last_positive ? kFalse : kTrue);
    }
    return true;
  }

  bool check_support(int a) {
    const AtomInfo& info = atoms_[static_cast<std::size_t>(a)];
    if (atom_value(a) == kFalse) {
      for (int b : info.rule_bodies) {
        if (!assign(body_var(b), kFalse)) return false;
      }
    }
    int open = 0;
    int last = -1;
    for (int b : info.supports) {
      if (body_value(b) != kFalse) {
        ++open;
        last = b;
      }
    }
    if (open == 0) return assign(static_cast<std::size_t>(a), kFalse);
    if (open == 1 && atom_value(a) == kTrue) {
      // A choice rule supports the atom only when the atom is chosen, which
      // still requires its body.
      return assign(body_var(last), kTrue);
    }
    return true;
  }

  bool check_group(int g) {
    const Group& grp = groups_[static_cast<std::size_t>(g)];
    int t = 0;
    int not_false = 0;
    for (int a : grp.atoms) {
      if (atom_value(a) == kTrue) ++t;
      if (atom_value(a) != kFalse) ++not_false;
    }
    bool too_many = grp.upper >= 0 && t > grp.upper;
    bool too_few = not_false < grp.lower;
    signed char bv = body_value(grp.body);
    if (bv == kFalse) return true;
    if (bv == kUnknown) {
      if (too_many || too_few) return assign(body_var(grp.body), kFalse);
      return true;
    }
    if (too_many || too_few) return false;
    if (grp.upper >= 0 && t == grp.upper) {
      for (int a : grp.atoms) {
        if (atom_value(a) == kUnknown && !assign(static_cast<std::size_t>(a), kFalse)) return false;
      }
    }
    if (not_false == grp.lower) {
      for (int a : grp.atoms) {
        if (atom_value(a) == kUnknown && !assign(static_cast<std::size_t>(a), kTrue)) return false;
      }
    }
    return true;
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      std::size_t var = trail_[head_++];
      if (var < n_) {
        int a = static_cast<int>(var);
        const AtomInfo& info = atoms_[var];
        for (const auto& [b, positive] : info.occurs) {
          if (!check_body(b)) return false;
        }
        if (!check_support(a)) return false;
        for (int g : info.groups) {
          if (!check_group(g)) return false;
        }
      } else {
        int b = static_cast<int>(var - n_);
        const BodyInfo& body = bodies_[static_cast<std::size_t>(b)];
        if (body.constraint && body_value(b) == kTrue) return false;
        if (!check_body(b)) return false;
        for (int h : body.heads) {
          if (body_value(b) == kTrue) {
            if (!assign(static_cast<std::size_t>(h), kTrue)) return false;
          } else if (!check_support(h)) {
            return false;
          }
        }
        for (int g : body.groups) {
          if (!check_group(g)) return false;
          if (body_value(b) == kFalse) {
            for (int a : groups_[static_cast<std::size_t>(g)].atoms) {
              if (!check_support(a)) return false;
            }
          }
        }
      }
    }
    return true;
  }

  int pick() {
    while (cursor_ < order_.size() && value_[static_cast<std::size_t>(order_[cursor_])] != kUnknown) ++cursor_;
    if (cursor_ < order_.size()) return order_[cursor_];
    return -1;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnknown;
      trail_.pop_back();
    }
    head_ = std::min(head_, mark);
    cursor_ = 0;
  }

  bool backtrack() {
    while (!decisions_.empty()) {
      Decision d = decisions_.back();
      decisions_.pop_back();
      undo_to(d.trail_mark);
      if (!d.flipped) {
        decisions_.push_back({d.var, true, trail_.size()});
        assign(static_cast<std::size_t>(d.var), kTrue);
        return true;
      }
    }
    return false;
  }

  bool stable(const AnswerSet& m) const {
    std::vector<char> in(n_, 0);
    for (int a : m) in[static_cast<std::size_t>(a)] = 1;
    return reduct_least_model(gp_, in) == in;
  }

  const GroundProgram& gp_;
  SolveOptions options_;
  std::size_t n_;
  std::vector<BodyInfo> bodies_;
  std::vector<AtomInfo> atoms_;
  std::vector<Group> groups_;
  std::vector<signed char> value_;
  std::vector<std::size_t> trail_;
  std::size_t head_ = 0;
  std::vector<Decision> decisions_;
  std::vector<int> order_;
  std::size_t cursor_ = 0;
};

}  // namespace

std::vector<AnswerSet> solve(const GroundProgram& gp, const SolveOptions& options) {
  if (gp.size() > options.max_atoms) {
    throw Error("ResourceLimit", "ground program has " + std::to_string(gp.size()) + " atoms, limit is " +
                                     std::to_string(options.max_atoms));
  }
  return Solver(gp, options).run();
}

std::vector<AnswerSet> solve(const GroundProgram& gp, std::size_t max_models) {
  SolveOptions o;
  o.max_models = max_models;
  return solve(gp, o);
}

bool is_stable(const GroundProgram& gp, const AnswerSet& model) {
  std::vector<char> in = membership(gp, model);
  return satisfies_rules(gp, in) && reduct_least_model(gp, in) == in;
}

std::vector<AnswerSet> brute_force(const GroundProgram& gp, std::size_t atom_limit) {
  const std::size_t n = gp.size();
  if (n > atom_limit) {
    throw Error("TooLarge", "brute force over " + std::to_string(n) + " atoms exceeds the limit of " +
                                std::to_string(atom_limit));
  }
  std::vector<AnswerSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    AnswerSet m;
    for (std::size_t a = 0; a < n; ++a) {
      if (mask & (std::uint64_t{1} << a)) m.push_back(static_cast<int>(a));
    }
    if (is_stable(gp, m)) out.push_back(std::move(m));
  }
  std::ranges::sort(out);
  return out;
}

std::vector<std::string> check_model(const GroundProgram& gp, const AnswerSet& model) {
  std::vector<std::string> out;
  std::vector<char> in = membership(gp, model);
  for (const auto& r : gp.rules) {
    if (!body_true(r, in)) continue;
    bool ok = true;
    if (r.kind == GroundRule::Kind::Normal) ok = in[static_cast<std::size_t>(r.head[0])];
    if (r.kind == GroundRule::Kind::Constraint) ok = false;
    if (r.kind == GroundRule::Kind::Choice) {
      int c = count_true(r.head, in);
      ok = c >= r.lower && (r.upper < 0 || c <= r.upper);
    }
    if (!ok) out.push_back("violated: " + gp.str(r));
  }
  std::vector<char> least = reduct_least_model(gp, in);
  for (std::size_t a = 0; a < gp.size(); ++a) {
    if (in[a] && !least[a]) out.push_back("unsupported: " + gp.atoms[a].str());
  }
  return out;
}

std::vector<Term> model_atoms(const GroundProgram& gp, const AnswerSet& model) {
  std::vector<Term> out;
  out.reserve(model.size());
  for (int a : model) out.push_back(gp.atoms[static_cast<std::size_t>(a)]);
  return out;
}

}  // namespace corealm::asp

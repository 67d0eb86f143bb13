#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <map>
#include <set>
#include <unordered_set>

#include "corealm/asp/solver.hpp"
#include "corealm/error.hpp"

namespace corealm::asp {

int GroundProgram::intern(const Term& key) {
  auto [it, inserted] = index.emplace(key, static_cast<int>(atoms.size()));
  if (inserted) atoms.push_back(key);
  return it->second;
}

int GroundProgram::find(const Term& key) const {
  auto it = index.find(key);
  return it == index.end() ? -1 : it->second;
}

std::string GroundProgram::str(const GroundRule& r) const {
  std::string head;
  if (r.kind == GroundRule::Kind::Normal) head = atoms[static_cast<std::size_t>(r.head[0])].str();
  if (r.kind == GroundRule::Kind::Choice) {
    if (r.lower > 0) head += std::to_string(r.lower) + " ";
    head += "{ ";
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      head += (i ? "; " : "") + atoms[static_cast<std::size_t>(r.head[i])].str();
    }
    head += " }";
    if (r.upper >= 0) head += " " + std::to_string(r.upper);
  }
  std::vector<std::string> body;
  for (int a : r.pos) body.push_back(atoms[static_cast<std::size_t>(a)].str());
  for (int a : r.neg) body.push_back("not " + atoms[static_cast<std::size_t>(a)].str());
  std::string out = head;
  if (!body.empty() || head.empty()) out += head.empty() ? ":- " : " :- ";
  for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ", " : "") + body[i];
  return out + ".";
}

std::vector<std::string> GroundProgram::canonical() const {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    GroundRule s = r;
    auto by_name = [&](int a, int b) { return atoms[static_cast<std::size_t>(a)] < atoms[static_cast<std::size_t>(b)]; };
    std::ranges::sort(s.pos, by_name);
    std::ranges::sort(s.neg, by_name);
    if (s.kind == GroundRule::Kind::Choice) std::ranges::sort(s.head, by_name);
    out.push_back(str(s));
  }
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using Binding = std::map<std::string, Term>;

bool match(const Term& pattern, const Term& ground, Binding& b, std::vector<std::string>& trail) {
  switch (pattern.kind) {
    case Term::Kind::Variable: {
      if (pattern.name == "_") return true;
      auto it = b.find(pattern.name);
      if (it != b.end()) return it->second == ground;
      b.emplace(pattern.name, ground);
      trail.push_back(pattern.name);
      return true;
    }
    case Term::Kind::Symbol:
    case Term::Kind::Integer:
      return pattern == ground;
    case Term::Kind::Function:
      if (ground.kind != Term::Kind::Function || ground.name != pattern.name || ground.args.size() != pattern.args.size()) {
        return false;
      }
      for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        if (!match(pattern.args[i], ground.args[i], b, trail)) return false;
      }
      return true;
    case Term::Kind::Arith: {
      Term t = pattern.substitute(b);
      if (!t.is_ground()) return false;
      return evaluate(t) == ground;
    }
  }
  return false;
}

void undo(Binding& b, std::vector<std::string>& trail, std::size_t mark) {
  while (trail.size() > mark) {
    b.erase(trail.back());
    trail.pop_back();
  }
}

Term instantiate(const Term& t, const Binding& b) { return evaluate(t.substitute(b)); }

Term instantiate(const Atom& a, const Binding& b) {
  Atom g = a;
  for (auto& t : g.args) t = instantiate(t, b);
  return g.key();
}

bool bound(const std::vector<std::string>& vars, const Binding& b) {
  return std::ranges::all_of(vars, [&](const std::string& v) { return v == "_" || b.contains(v); });
}

std::vector<std::string> vars_of(const Term& t) {
  std::vector<std::string> out;
  t.collect_variables(out);
  return out;
}

std::vector<std::string> vars_of(const Atom& a) {
  std::vector<std::string> out;
  for (const auto& t : a.args) t.collect_variables(out);
  return out;
}

/// Derivable atoms grouped by predicate, in insertion order, with an index on
/// the first argument.
class AtomStore {
 public:
  bool add(const Term& key) {
    if (!all_.insert(key).second) return false;
    auto& p = preds_[key.name];
    std::size_t pos = p.atoms.size();
    p.atoms.push_back(key);
    if (!key.args.empty()) p.first[key.args[0]].push_back(pos);
    return true;
  }
  bool contains(const Term& key) const { return all_.contains(key); }
  std::size_t size(const std::string& pred) const {
    auto it = preds_.find(pred);
    return it == preds_.end() ? 0 : it->second.atoms.size();
  }
  std::size_t total() const { return all_.size(); }

  /// Calls f(atom) for atoms of `pred` at positions [lo, hi) that may match
  /// `first` (when ground).
  template <typename F>
  void scan(const std::string& pred, const Term* first, std::size_t lo, std::size_t hi, F&& f) const {
    auto it = preds_.find(pred);
    if (it == preds_.end()) return;
    const auto& p = it->second;
    hi = std::min(hi, p.atoms.size());
    if (first) {
      auto fit = p.first.find(*first);
      if (fit == p.first.end()) return;
      const auto& positions = fit->second;
      auto begin = std::lower_bound(positions.begin(), positions.end(), lo);
      for (auto i = begin; i != positions.end() && *i < hi; ++i) f(p.atoms[*i]);
      return;
    }
    for (std::size_t i = lo; i < hi; ++i) f(p.atoms[i]);
  }

  const std::unordered_set<Term, TermHash>& all() const { return all_; }

 private:
  struct Pred {
    std::vector<Term> atoms;
    std::unordered_map<Term, std::vector<std::size_t>, TermHash> first;
  };
  std::unordered_map<std::string, Pred> preds_;
  std::unordered_set<Term, TermHash> all_;
};

struct Instance {
  std::size_t rule;
  Binding binding;
};

class Grounder {
 public:
  explicit Grounder(const AspProgram& program) : rules_(program.all_rules()) {
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      Prepared p;
      for (const auto& l : rules_[r].body) {
        if (l.kind == BodyLiteral::Kind::Comparison) {
          auto v = vars_of(l.lhs);
          auto w = vars_of(l.rhs);
          v.insert(v.end(), w.begin(), w.end());
          p.comparisons.push_back({&l, v});
        } else if (!l.naf) {
          p.positive.push_back(&l.atom);
        } else {
          p.negative.push_back(&l.atom);
        }
      }
      prepared_.push_back(std::move(p));
    }
  }

  GroundProgram run() {
    std::map<std::string, std::pair<std::size_t, std::size_t>> window;  // pred -> [lo, hi) delta
    bool first_round = true;
    for (;;) {
      std::map<std::string, std::size_t> hi;
      for (std::size_t r = 0; r < rules_.size(); ++r) {
        for (const Atom* a : prepared_[r].positive) hi[a->key().name] = store_.size(a->key().name);
      }
      std::vector<Instance> found;
      for (std::size_t r = 0; r < rules_.size(); ++r) {
        const auto& pos = prepared_[r].positive;
        if (pos.empty()) {
          if (first_round) emit(r, {}, found);
          continue;
        }
        for (std::size_t pivot = 0; pivot < pos.size(); ++pivot) {
          const std::string pred = pos[pivot]->key().name;
          std::size_t lo = window.contains(pred) ? window[pred].first : 0;
          std::size_t h = hi[pred];
          if (!first_round && lo >= h) continue;
          if (first_round) lo = 0;
          if (first_round && pivot > 0) break;  // the first round sees everything through pivot 0
          Binding b;
          std::vector<std::string> trail;
          std::vector<std::pair<std::size_t, std::size_t>> ranges(pos.size());
          for (std::size_t j = 0; j < pos.size(); ++j) {
            const std::string pj = pos[j]->key().name;
            std::size_t old_lo = window.contains(pj) ? window[pj].first : 0;
            if (first_round) {
              ranges[j] = {0, hi[pj]};
            } else if (j < pivot) {
              ranges[j] = {0, old_lo};
            } else if (j == pivot) {
              ranges[j] = {lo, h};
            } else {
              ranges[j] = {0, hi[pj]};
            }
          }
          std::vector<std::size_t> order{pivot};
          for (std::size_t j = 0; j < pos.size(); ++j) {
            if (j != pivot) order.push_back(j);
          }
          join(r, order, ranges, 0, b, trail, found);
        }
      }
      // New atoms become the next delta.
      std::map<std::string, std::size_t> before;
      for (const auto& [pred, h] : hi) before[pred] = h;
      bool grew = false;
      for (auto& inst : found) {
        for (const Term& h : heads(inst)) {
          if (store_.add(h)) grew = true;
        }
        instances_.push_back(std::move(inst));
      }
      if (refresh_choices()) grew = true;
      window.clear();
      for (const auto& [pred, h] : before) window[pred] = {h, store_.size(pred)};
      first_round = false;
      if (!grew) break;
    }
    return build();
  }

 private:
  struct Comparison {
    const BodyLiteral* lit;
    std::vector<std::string> vars;
  };
  struct Prepared {
    std::vector<const Atom*> positive;
    std::vector<const Atom*> negative;
    std::vector<Comparison> comparisons;
  };

  void join(std::size_t r, const std::vector<std::size_t>& order,
            const std::vector<std::pair<std::size_t, std::size_t>>& ranges, std::size_t depth, Binding& b,
            std::vector<std::string>& trail, std::vector<Instance>& out) {
    if (!comparisons_ok(r, b)) return;
    if (depth == order.size()) {
      emit(r, b, out);
      return;
    }
    const Atom& pattern = *prepared_[r].positive[order[depth]];
    Term key_pattern = pattern.key();
    std::optional<Term> first;
    if (!key_pattern.args.empty()) {
      Term f = key_pattern.args[0].substitute(b);
      if (f.is_ground()) first = evaluate(f);
    }
    auto [lo, hi] = ranges[order[depth]];
    // Matching may extend the store only between rounds, so scanning is safe.
    std::vector<Term> candidates;
    store_.scan(key_pattern.name, first ? &*first : nullptr, lo, hi,
                [&](const Term& t) { candidates.push_back(t); });
    for (const Term& t : candidates) {
      std::size_t mark = trail.size();
      if (match(key_pattern, t, b, trail)) join(r, order, ranges, depth + 1, b, trail, out);
      undo(b, trail, mark);
    }
  }

  /// Checks comparisons whose variables are bound; false prunes the branch.
  bool comparisons_ok(std::size_t r, const Binding& b) const {
    for (const auto& c : prepared_[r].comparisons) {
      if (!bound(c.vars, b)) continue;
      if (!compare(instantiate(c.lit->lhs, b), c.lit->op, instantiate(c.lit->rhs, b))) return false;
    }
    return true;
  }

  /// Completes the binding through `V = term` comparisons and emits the instance.
  void emit(std::size_t r, Binding b, std::vector<Instance>& out) {
    const auto& cmps = prepared_[r].comparisons;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& c : cmps) {
        if (bound(c.vars, b) || c.lit->op != "=") continue;
        const Term* var = nullptr;
        const Term* val = nullptr;
        if (c.lit->lhs.is_variable() && !b.contains(c.lit->lhs.name)) {
          var = &c.lit->lhs;
          val = &c.lit->rhs;
        } else if (c.lit->rhs.is_variable() && !b.contains(c.lit->rhs.name)) {
          var = &c.lit->rhs;
          val = &c.lit->lhs;
        }
        if (!var || !bound(vars_of(*val), b)) continue;
        b.emplace(var->name, instantiate(*val, b));
        progress = true;
      }
    }
    for (const auto& c : cmps) {
      if (!bound(c.vars, b)) throw Error("UnsafeRule", "unbound variable in comparison: " + rules_[r].str());
    }
    if (!comparisons_ok(r, b)) return;
    const Rule& rule = rules_[r];
    std::vector<std::string> need;
    if (rule.kind == Rule::Kind::Normal) need = vars_of(rule.head);
    for (const Atom* a : prepared_[r].negative) {
      auto v = vars_of(*a);
      need.insert(need.end(), v.begin(), v.end());
    }
    if (!bound(need, b)) throw Error("UnsafeRule", "unsafe variable in rule: " + rule.str());
    out.push_back({r, std::move(b)});
  }

  /// Expands choice elements against the current store.
  std::vector<Term> choice_atoms(const Instance& inst) const {
    std::vector<Term> out;
    for (const auto& e : rules_[inst.rule].elements) {
      std::vector<const Atom*> cond_atoms;
      std::vector<const BodyLiteral*> cmps;
      for (const auto& c : e.condition) {
        if (c.kind == BodyLiteral::Kind::Comparison) {
          cmps.push_back(&c);
        } else if (!c.naf) {
          cond_atoms.push_back(&c.atom);
        } else {
          throw Error("UnsupportedRule", "negative condition in choice element: " + rules_[inst.rule].str());
        }
      }
      Binding b = inst.binding;
      std::vector<std::string> trail;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == cond_atoms.size()) {
          for (const auto* c : cmps) {
            Term l = c->lhs.substitute(b);
            Term r = c->rhs.substitute(b);
            if (!l.is_ground() || !r.is_ground()) {
              throw Error("UnsafeRule", "unbound variable in choice condition: " + rules_[inst.rule].str());
            }
            if (!compare(evaluate(l), c->op, evaluate(r))) return;
          }
          if (!bound(vars_of(e.atom), b)) {
            throw Error("UnsafeRule", "unbound variable in choice element: " + rules_[inst.rule].str());
          }
          out.push_back(instantiate(e.atom, b));
          return;
        }
        Term pattern = cond_atoms[i]->key();
        std::vector<Term> candidates;
        store_.scan(pattern.name, nullptr, 0, SIZE_MAX, [&](const Term& t) { candidates.push_back(t); });
        for (const Term& t : candidates) {
          std::size_t mark = trail.size();
          if (match(pattern, t, b, trail)) rec(i + 1);
          undo(b, trail, mark);
        }
      };
      rec(0);
    }
    std::ranges::sort(out);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<Term> heads(const Instance& inst) const {
    const Rule& rule = rules_[inst.rule];
    if (rule.kind == Rule::Kind::Normal) return {instantiate(rule.head, inst.binding)};
    if (rule.kind == Rule::Kind::Choice) return choice_atoms(inst);
    return {};
  }

  bool refresh_choices() {
    bool grew = false;
    for (const auto& inst : instances_) {
      if (rules_[inst.rule].kind != Rule::Kind::Choice) continue;
      for (const Term& h : choice_atoms(inst)) grew = store_.add(h) || grew;
    }
    return grew;
  }

  struct Draft {
    GroundRule::Kind kind;
    std::vector<Term> head;
    int lower = 0;
    int upper = -1;
    std::vector<Term> pos;
    std::vector<Term> neg;
  };

  GroundProgram build() {
    std::vector<Draft> drafts;
    for (const auto& inst : instances_) {
      const Rule& rule = rules_[inst.rule];
      Draft d;
      d.kind = rule.kind == Rule::Kind::Normal     ? GroundRule::Kind::Normal
               : rule.kind == Rule::Kind::Choice ? GroundRule::Kind::Choice
                                                 : GroundRule::Kind::Constraint;
      d.head = heads(inst);
      d.lower = rule.lower;
      d.upper = rule.upper;
      for (const Atom* a : prepared_[inst.rule].positive) d.pos.push_back(instantiate(*a, inst.binding));
      for (const Atom* a : prepared_[inst.rule].negative) {
        Term t = instantiate(*a, inst.binding);
        if (store_.contains(t)) d.neg.push_back(t);  // otherwise `not t` is trivially true
      }
      drafts.push_back(std::move(d));
    }

    // Atoms fixed by the definite part of the program.
    std::unordered_set<Term, TermHash> certain;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& d : drafts) {
        if (d.kind != GroundRule::Kind::Normal || !d.neg.empty() || certain.contains(d.head[0])) continue;
        if (std::ranges::all_of(d.pos, [&](const Term& t) { return certain.contains(t); })) {
          certain.insert(d.head[0]);
          changed = true;
        }
      }
    }

    std::set<std::tuple<int, std::vector<Term>, int, int, std::vector<Term>, std::vector<Term>>> seen;
    std::vector<Draft> kept;
    for (auto& d : drafts) {
      if (std::ranges::any_of(d.neg, [&](const Term& t) { return certain.contains(t); })) continue;
      std::erase_if(d.pos, [&](const Term& t) { return certain.contains(t); });
      if (d.kind == GroundRule::Kind::Normal && certain.contains(d.head[0]) && !d.pos.empty()) continue;
      if (d.kind == GroundRule::Kind::Normal && certain.contains(d.head[0])) d.neg.clear();
      std::ranges::sort(d.pos);
      d.pos.erase(std::unique(d.pos.begin(), d.pos.end()), d.pos.end());
      std::ranges::sort(d.neg);
      d.neg.erase(std::unique(d.neg.begin(), d.neg.end()), d.neg.end());
      if (!seen.insert({static_cast<int>(d.kind), d.head, d.lower, d.upper, d.pos, d.neg}).second) continue;
      kept.push_back(std::move(d));
    }

    // Interned atoms are numbered in term order so ids do not depend on rule order.
    std::set<Term> used;
    for (const auto& d : kept) {
      used.insert(d.head.begin(), d.head.end());
      used.insert(d.pos.begin(), d.pos.end());
      used.insert(d.neg.begin(), d.neg.end());
    }
    GroundProgram gp;
    for (const Term& t : used) gp.intern(t);
    auto ids = [&](const std::vector<Term>& ts) {
      std::vector<int> out;
      for (const auto& t : ts) out.push_back(gp.find(t));
      return out;
    };
    for (const auto& d : kept) {
      gp.rules.push_back({d.kind, ids(d.head), d.lower, d.upper, ids(d.pos), ids(d.neg)});
    }
    for (const Term& t : used) {
      if (t.name.empty() || t.name[0] != '-') continue;
      Term positive = t;
      positive.name = t.name.substr(1);
      int p = gp.find(positive);
      if (p >= 0) gp.rules.push_back({GroundRule::Kind::Constraint, {}, 0, -1, {p, gp.find(t)}, {}});
    }
    return gp;
  }

  std::vector<Rule> rules_;
  std::vector<Prepared> prepared_;
  AtomStore store_;
  std::vector<Instance> instances_;
};

}  // namespace

GroundProgram ground(const AspProgram& program) { return Grounder(program).run(); }

}  // namespace corealm::asp

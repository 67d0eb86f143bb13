#include "corealm/alm/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "corealm/alm/parser.hpp"

namespace corealm::alm {

namespace {

template <typename T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

const std::vector<std::string> kNoParents;

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

Vocabulary::Vocabulary(const std::vector<ModuleDecl>& modules, const Structure* structure) {
  for (const char* s : {kUniverse, kActions, kBooleans}) {
    sort_order_.push_back(s);
    parents_[s];
  }
  parents_[kActions].push_back(kUniverse);
  parents_[kBooleans].push_back(kUniverse);

  for (const auto& m : modules) {
    for (const auto& s : m.sorts) {
      for (const auto& name : s.names) {
        if (!parents_.contains(name)) sort_order_.push_back(name);
        auto& ps = parents_[name];
        for (const auto& p : s.parents) push_unique(ps, p);
        for (const auto& a : s.attributes) push_unique(attributes_, AttributeInfo{name, a});
      }
    }
    for (const auto& f : m.functions) push_unique(functions_, f);
  }

  if (structure) {
    for (const auto& decl : structure->instances) {
      if (decl.is_schema()) continue;
      for (const auto& n : decl.names) {
        auto it = std::find_if(instances_.begin(), instances_.end(),
                               [&](const auto& e) { return e.first == n; });
        if (it == instances_.end()) {
          instances_.push_back({n, {decl.sort}});
        } else {
          push_unique(it->second, decl.sort);
        }
      }
    }
  }
}

const std::vector<std::string>& Vocabulary::parents(const std::string& sort) const {
  auto it = parents_.find(sort);
  return it == parents_.end() ? kNoParents : it->second;
}

bool Vocabulary::is_subsort(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  std::set<std::string> seen{sub};
  std::deque<std::string> queue{sub};
  while (!queue.empty()) {
    std::string s = queue.front();
    queue.pop_front();
    for (const auto& p : parents(s)) {
      if (p == super) return true;
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  return false;
}

std::set<std::string> Vocabulary::ancestors(const std::string& sort) const {
  std::set<std::string> seen{sort};
  std::deque<std::string> queue{sort};
  while (!queue.empty()) {
    std::string s = queue.front();
    queue.pop_front();
    for (const auto& p : parents(s)) {
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  return seen;
}

const FunctionDecl* Vocabulary::function(const std::string& name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<const AttributeInfo*> Vocabulary::attributes(const std::string& name) const {
  std::vector<const AttributeInfo*> out;
  for (const auto& a : attributes_) {
    if (a.decl.name == name) out.push_back(&a);
  }
  return out;
}

const AttributeInfo* Vocabulary::attribute_for(const std::string& name, const std::string& sort) const {
  for (const auto& a : attributes_) {
    if (a.decl.name == name && is_subsort(sort, a.owner)) return &a;
  }
  return nullptr;
}

std::optional<Signature> Vocabulary::signature(const std::string& name) const {
  if (const auto* f = function(name)) {
    return Signature{f->name, f->arg_sorts, f->range, false, f->kind};
  }
  auto attrs = attributes(name);
  if (attrs.empty()) return std::nullopt;
  const AttributeInfo& a = *attrs.front();
  Signature sig{name, {a.owner}, a.decl.range, true, FunctionKind::BasicStatic};
  sig.args.insert(sig.args.end(), a.decl.arg_sorts.begin(), a.decl.arg_sorts.end());
  return sig;
}

std::vector<Term> Vocabulary::instances_of(const std::string& sort) const {
  if (sort == kBooleans) return {Term::symbol("true"), Term::symbol("false")};
  std::vector<Term> out;
  for (const auto& [name, sorts] : instances_) {
    if (std::any_of(sorts.begin(), sorts.end(), [&](const auto& s) { return is_subsort(s, sort); })) {
      out.push_back(name);
    }
  }
  return out;
}

bool Vocabulary::is_instance(const Term& t, const std::string& sort) const {
  if (sort == kBooleans) return t == Term::symbol("true") || t == Term::symbol("false");
  const auto* sorts = declared_sorts(t);
  if (!sorts) return false;
  return std::any_of(sorts->begin(), sorts->end(), [&](const auto& s) { return is_subsort(s, sort); });
}

const std::vector<std::string>* Vocabulary::declared_sorts(const Term& instance) const {
  for (const auto& [name, sorts] : instances_) {
    if (name == instance) return &sorts;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Dependency handling
// ---------------------------------------------------------------------------

namespace {

const ModuleDecl* find_module(const std::vector<ModuleDecl>& theory, const std::string& name) {
  for (const auto& m : theory) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

void visit_module(const std::vector<ModuleDecl>& theory, const std::string& name,
                  std::map<std::string, int>& state, std::vector<std::string>& order,
                  std::vector<std::string>& path) {
  int& st = state[name];
  if (st == 2) return;
  if (st == 1) {
    std::string cycle;
    auto it = std::find(path.begin(), path.end(), name);
    for (; it != path.end(); ++it) cycle += *it + " -> ";
    throw Error("DependencyCycle", "module dependency cycle: " + cycle + name);
  }
  const ModuleDecl* m = find_module(theory, name);
  if (!m) throw Error("UnknownModule", "unknown module '" + name + "'");
  st = 1;
  path.push_back(name);
  for (const auto& d : m->depends_on) visit_module(theory, d, state, order, path);
  path.pop_back();
  state[name] = 2;
  order.push_back(name);
}

void append_module(ModuleDecl& into, const ModuleDecl& m) {
  for (const auto& s : m.sorts) push_unique(into.sorts, s);
  for (const auto& f : m.functions) push_unique(into.functions, f);
  for (const auto& a : m.axioms) push_unique(into.axioms, a);
}

}  // namespace

std::vector<std::string> dependency_order(const std::vector<ModuleDecl>& theory, const std::string& root,
                                          bool include_optional) {
  std::map<std::string, int> state;
  std::vector<std::string> order;
  std::vector<std::string> path;
  visit_module(theory, root, state, order, path);
  if (!include_optional) return order;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& m : theory) {
      if (!m.optional || state[m.name] == 2 || m.depends_on.empty()) continue;
      bool inside = std::all_of(m.depends_on.begin(), m.depends_on.end(),
                                [&](const std::string& d) { return state.count(d) && state.at(d) == 2; });
      if (inside) {
        visit_module(theory, m.name, state, order, path);
        changed = true;
      }
    }
  }
  return order;
}

ModuleDecl flatten_theory(const std::vector<ModuleDecl>& theory, const std::string& root,
                          bool include_optional) {
  ModuleDecl merged;
  merged.name = root;
  for (const auto& name : dependency_order(theory, root, include_optional)) {
    append_module(merged, *find_module(theory, name));
  }
  classify_axioms(merged.axioms, merged.functions);
  return merged;
}

ModuleDecl merge_theory(const std::vector<ModuleDecl>& theory, const std::string& name) {
  std::map<std::string, int> state;
  std::vector<std::string> order;
  std::vector<std::string> path;
  for (const auto& m : theory) visit_module(theory, m.name, state, order, path);
  ModuleDecl merged;
  merged.name = name;
  for (const auto& n : order) append_module(merged, *find_module(theory, n));
  classify_axioms(merged.axioms, merged.functions);
  return merged;
}

// ---------------------------------------------------------------------------
// Schema expansion
// ---------------------------------------------------------------------------

Structure expand_schemas(const Structure& structure, const std::vector<ModuleDecl>& theory,
                         std::vector<std::string>* warnings) {
  Vocabulary vocab(theory, &structure);
  Structure out;
  out.name = structure.name;
  out.statics = structure.statics;

  for (const auto& decl : structure.instances) {
    if (!decl.is_schema()) {
      out.instances.push_back(decl);
      continue;
    }
    std::vector<std::string> vars;
    for (const auto& n : decl.names) n.collect_variables(vars);

    std::vector<std::vector<Term>> domains;
    bool empty = false;
    for (const auto& var : vars) {
      std::string sort;
      for (const auto& a : decl.assignments) {
        const AttributeInfo* info = vocab.attribute_for(a.name, decl.sort);
        if (!info) {
          auto all = vocab.attributes(a.name);
          if (!all.empty()) info = all.front();
        }
        if (!info) continue;
        if (a.value.is_variable() && a.value.name == var && info->decl.functional()) {
          sort = info->decl.range;
        }
        for (std::size_t i = 0; i < a.args.size() && i < info->decl.arg_sorts.size(); ++i) {
          if (a.args[i].is_variable() && a.args[i].name == var) sort = info->decl.arg_sorts[i];
        }
        if (!sort.empty()) break;
      }
      if (sort.empty()) {
        throw Error("UntypedSchemaVariable",
                    "cannot infer the sort of schema variable " + var + " from its attribute assignments",
                    decl.span);
      }
      domains.push_back(vocab.instances_of(sort));
      if (domains.back().empty()) {
        if (warnings) {
          warnings->push_back("EmptySort: schema over variable " + var + " expands to nothing; sort '" +
                              sort + "' has no instances");
        }
        empty = true;
      }
    }
    if (empty) continue;

    std::vector<std::size_t> idx(vars.size(), 0);
    while (true) {
      std::map<std::string, Term> binding;
      for (std::size_t i = 0; i < vars.size(); ++i) binding[vars[i]] = domains[i][idx[i]];
      InstanceDecl inst;
      inst.sort = decl.sort;
      inst.span = decl.span;
      for (const auto& n : decl.names) inst.names.push_back(n.substitute(binding));
      for (const auto& a : decl.assignments) {
        Assignment g = a;
        for (auto& arg : g.args) arg = arg.substitute(binding);
        g.value = g.value.substitute(binding);
        inst.assignments.push_back(std::move(g));
      }
      out.instances.push_back(std::move(inst));

      std::size_t k = vars.size();
      while (k > 0) {
        --k;
        if (++idx[k] < domains[k].size()) break;
        idx[k] = 0;
        if (k == 0) {
          k = vars.size() + 1;
          break;
        }
      }
      if (k == vars.size() + 1 || vars.empty()) break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variable typing
// ---------------------------------------------------------------------------

std::map<std::string, std::vector<std::string>> variable_sorts(const Axiom& axiom, const Vocabulary& vocab) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& v : axiom.variables()) out[v];
  if (axiom.trigger.is_variable()) push_unique(out[axiom.trigger.name], std::string(kActions));

  auto visit = [&](const Literal& l) {
    switch (l.kind) {
      case LiteralKind::Instance:
        if (!l.negated && l.args[0].is_variable()) push_unique(out[l.args[0].name], l.name);
        break;
      case LiteralKind::Boolean:
      case LiteralKind::Value: {
        auto sig = vocab.signature(l.name);
        if (!sig || sig->args.size() != l.args.size()) break;
        for (std::size_t i = 0; i < l.args.size(); ++i) {
          if (l.args[i].is_variable()) push_unique(out[l.args[i].name], sig->args[i]);
        }
        if (l.kind == LiteralKind::Value && l.value.is_variable()) push_unique(out[l.value.name], sig->range);
        break;
      }
      case LiteralKind::Comparison:
        break;
    }
  };
  if (axiom.head) visit(*axiom.head);
  for (const auto& l : axiom.body) visit(l);
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const auto& d) { return d.code == code; });
}

std::string ValidationReport::str() const {
  std::ostringstream out;
  for (const auto& d : diagnostics) {
    out << (d.span.valid() ? d.span.str() + ": " : "") << "error: " << d.code << ": " << d.message << "\n";
  }
  for (const auto& w : warnings) {
    out << (w.span.valid() ? w.span.str() + ": " : "") << "warning: " << w.code << ": " << w.message << "\n";
  }
  return out.str();
}

namespace {

class Validator {
 public:
  explicit Validator(ValidationReport& report) : report_(report) {}

  void error(std::string code, std::string message, const SourceSpan& span) {
    report_.diagnostics.push_back({std::move(code), std::move(message), span});
  }
  void warning(std::string code, std::string message, const SourceSpan& span) {
    report_.warnings.push_back({std::move(code), std::move(message), span});
  }

  /// Returns false when the dependency graph is unusable.
  bool check_modules(const std::vector<ModuleDecl>& modules) {
    bool usable = true;
    std::set<std::string> names;
    for (const auto& m : modules) {
      if (!names.insert(m.name).second) {
        error("duplicate module", "module '" + m.name + "' is declared twice", m.span);
      }
    }
    for (const auto& m : modules) {
      for (const auto& d : m.depends_on) {
        if (!names.contains(d)) {
          error("unknown module", "module '" + m.name + "' depends on unknown module '" + d + "'", m.span);
          usable = false;
        }
      }
    }
    if (!usable) return false;
    for (const auto& m : modules) {
      try {
        dependency_order(modules, m.name);
      } catch (const Error& e) {
        error("dependency cycle", e.detail(), m.span);
        return false;
      }
    }
    return true;
  }

  void check_sorts(const std::vector<ModuleDecl>& modules, const Vocabulary& vocab) {
    for (const auto& m : modules) {
      for (const auto& s : m.sorts) {
        for (const auto& name : s.names) {
          // `actions :: universe` may be restated to attach attributes to all actions.
          bool restated_actions = name == kActions && s.parents == std::vector<std::string>{kUniverse};
          if (is_predefined_sort(name) && !restated_actions) {
            error("predefined sort", "predefined sort '" + name + "' cannot be redeclared", s.span);
          }
        }
        for (const auto& p : s.parents) {
          if (!vocab.has_sort(p)) error("unknown sort", "unknown parent sort '" + p + "'", s.span);
          if (p == kBooleans) error("sort mismatch", "sorts cannot specialize booleans", s.span);
        }
        for (const auto& a : s.attributes) {
          for (const auto& arg : a.arg_sorts) require_sort(vocab, arg, a.span);
          require_sort(vocab, a.range, a.span);
          if (!a.arg_sorts.empty() && a.range != kBooleans) {
            error("sort mismatch", "relational attribute '" + a.name + "' must have range booleans", a.span);
          }
        }
      }
    }
    // Cycle detection over the union of all parent edges.
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> dfs = [&](const std::string& s) {
      int& st = state[s];
      if (st == 1) return true;
      if (st == 2) return false;
      st = 1;
      for (const auto& p : vocab.parents(s)) {
        if (dfs(p)) return true;
      }
      state[s] = 2;
      return false;
    };
    for (const auto& s : vocab.sorts()) {
      if (state[s] == 0 && dfs(s)) {
        error("sort cycle", "sort hierarchy contains a cycle through '" + s + "'", {});
        break;
      }
    }
  }

  void check_functions(const Vocabulary& vocab) {
    std::map<std::string, std::string> seen;
    auto note = [&](const std::string& name, const std::string& sig, const SourceSpan& span) {
      auto [it, inserted] = seen.emplace(name, sig);
      if (!inserted && it->second != sig) {
        error("conflicting declaration",
              "'" + name + "' declared as '" + it->second + "' and as '" + sig + "'", span);
      }
    };
    for (const auto& f : vocab.functions()) {
      for (const auto& a : f.arg_sorts) require_sort(vocab, a, f.span);
      require_sort(vocab, f.range, f.span);
      if (is_defined(f.kind) && f.range != kBooleans) {
        error("sort mismatch", "defined function '" + f.name + "' must have range booleans", f.span);
      }
      std::string sig = to_string(f.kind) + " ";
      for (const auto& a : f.arg_sorts) sig += a + " * ";
      note(f.name, sig + "-> " + f.range, f.span);
    }
    for (const auto& a : vocab.all_attributes()) {
      if (vocab.function(a.decl.name)) {
        error("conflicting declaration", "'" + a.decl.name + "' is both a function and an attribute", a.decl.span);
      }
    }
  }

  void check_axiom(const Axiom& a, const Vocabulary& vocab) {
    std::string text = a.str();
    auto bad = [&](const std::string& code, const std::string& msg) { error(code, msg + " in: " + text, a.span); };

    auto check_literal = [&](const Literal& l) -> std::optional<Signature> {
      switch (l.kind) {
        case LiteralKind::Instance:
          if (!vocab.has_sort(l.name)) bad("unknown sort", "unknown sort '" + l.name + "'");
          return std::nullopt;
        case LiteralKind::Comparison:
          return std::nullopt;
        case LiteralKind::Boolean:
        case LiteralKind::Value: {
          auto sig = vocab.signature(l.name);
          if (!sig) {
            bad("unknown function", "unknown function or attribute '" + l.name + "'");
            return std::nullopt;
          }
          if (sig->args.size() != l.args.size()) {
            bad("arity mismatch", "'" + l.name + "' expects " + std::to_string(sig->args.size()) +
                                      " argument(s), got " + std::to_string(l.args.size()));
            return std::nullopt;
          }
          if (l.kind == LiteralKind::Boolean && !sig->boolean()) {
            bad("sort mismatch", "'" + l.name + "' is not boolean-valued and needs a value");
          }
          if (l.kind == LiteralKind::Value && sig->boolean()) {
            bad("sort mismatch", "boolean '" + l.name + "' compared with a non-boolean value");
          }
          return sig;
        }
      }
      return std::nullopt;
    };

    std::optional<Signature> head_sig;
    if (a.head) head_sig = check_literal(*a.head);
    bool body_has_fluent = false;
    for (const auto& l : a.body) {
      auto sig = check_literal(l);
      if (sig && sig->fluent()) body_has_fluent = true;
    }

    switch (a.kind) {
      case AxiomKind::DynamicCausalLaw:
        if (!a.head) {
          bad("bad head", "dynamic causal law needs an effect");
        } else if (a.head->kind == LiteralKind::Instance || a.head->kind == LiteralKind::Comparison) {
          bad("bad head", "effect must be a fluent literal");
        } else if (head_sig && (!head_sig->fluent() || head_sig->defined())) {
          bad("bad head", "effect '" + a.head->name + "' is not a basic fluent");
        }
        break;
      case AxiomKind::Executability:
        break;
      case AxiomKind::Definition:
        if (!a.head || a.head->kind != LiteralKind::Boolean || a.head->negated) {
          bad("bad head", "definition head must be a positive defined-function literal");
        } else if (head_sig && !head_sig->fluent() && body_has_fluent) {
          bad("static depends on fluent", "defined static '" + a.head->name + "' defined in terms of fluents");
        }
        break;
      case AxiomKind::StateConstraint:
        if (a.head) {
          if (a.head->kind == LiteralKind::Instance || a.head->kind == LiteralKind::Comparison) {
            bad("bad head", "state constraint head must be a function literal or false");
          } else if (head_sig && head_sig->defined()) {
            bad("bad head", "defined function '" + a.head->name + "' used as a constraint head");
          } else if (head_sig && !head_sig->fluent() && body_has_fluent) {
            bad("static depends on fluent", "static '" + a.head->name + "' constrained by fluents");
          }
        }
        break;
    }

    for (const auto& [var, sorts] : variable_sorts(a, vocab)) {
      if (sorts.empty()) bad("untyped variable", "variable " + var + " has no inferable sort");
    }
  }

  void check_structure(const Structure& structure, const std::vector<ModuleDecl>& modules) {
    std::vector<std::string> warnings;
    Structure expanded;
    try {
      expanded = expand_schemas(structure, modules, &warnings);
    } catch (const Error& e) {
      error("untyped schema variable", e.detail(), e.span());
      return;
    }
    for (const auto& w : warnings) warning("empty sort", w, {});

    Vocabulary vocab(modules, &expanded);
    for (const auto& decl : expanded.instances) {
      if (!vocab.has_sort(decl.sort)) {
        error("unknown sort", "instances declared in unknown sort '" + decl.sort + "'", decl.span);
        continue;
      }
      if (decl.sort == kBooleans || decl.sort == kUniverse) {
        error("sort mismatch", "instances cannot be declared directly in '" + decl.sort + "'", decl.span);
      }
      for (const auto& a : decl.assignments) {
        const AttributeInfo* info = vocab.attribute_for(a.name, decl.sort);
        if (!info) {
          error("unknown attribute", "attribute '" + a.name + "' is not declared for sort '" + decl.sort + "'",
                a.span);
          continue;
        }
        if (info->decl.functional()) {
          if (!a.args.empty()) {
            error("arity mismatch", "functional attribute '" + a.name + "' takes no arguments", a.span);
          } else if (!vocab.is_instance(a.value, info->decl.range)) {
            error("sort mismatch",
                  "value " + a.value.str(true) + " of '" + a.name + "' is not an instance of '" + info->decl.range + "'",
                  a.span);
          }
          continue;
        }
        if (a.args.size() != info->decl.arg_sorts.size()) {
          error("arity mismatch", "attribute '" + a.name + "' expects " +
                                      std::to_string(info->decl.arg_sorts.size()) + " argument(s)", a.span);
          continue;
        }
        check_arguments(vocab, a, info->decl.arg_sorts);
        if (!vocab.is_instance(a.value, info->decl.range)) {
          error("sort mismatch", "value " + a.value.str(true) + " of '" + a.name + "' is not in '" +
                                     info->decl.range + "'", a.span);
        }
      }
    }
    for (const auto& a : expanded.statics) {
      const FunctionDecl* f = vocab.function(a.name);
      if (!f) {
        error("unknown function", "static '" + a.name + "' is not declared", a.span);
        continue;
      }
      if (f->kind != FunctionKind::BasicStatic) {
        error("bad head", "only basic statics can be given values in a structure ('" + a.name + "')", a.span);
        continue;
      }
      if (a.args.size() != f->arg_sorts.size()) {
        error("arity mismatch", "static '" + a.name + "' expects " + std::to_string(f->arg_sorts.size()) +
                                    " argument(s)", a.span);
        continue;
      }
      check_arguments(vocab, a, f->arg_sorts);
      if (!vocab.is_instance(a.value, f->range)) {
        error("sort mismatch", "value " + a.value.str(true) + " of '" + a.name + "' is not in '" + f->range + "'",
              a.span);
      }
    }
  }

 private:
  void require_sort(const Vocabulary& vocab, const std::string& sort, const SourceSpan& span) {
    if (!vocab.has_sort(sort)) error("unknown sort", "unknown sort '" + sort + "'", span);
  }

  void check_arguments(const Vocabulary& vocab, const Assignment& a, const std::vector<std::string>& sorts) {
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!vocab.is_instance(a.args[i], sorts[i])) {
        error("sort mismatch", "argument " + a.args[i].str(true) + " of '" + a.name + "' is not an instance of '" +
                                   sorts[i] + "'", a.span);
      }
    }
  }

  ValidationReport& report_;
};

void validate_modules(Validator& v, const std::vector<ModuleDecl>& modules) {
  if (!v.check_modules(modules)) return;
  Vocabulary all(modules);
  v.check_sorts(modules, all);
  v.check_functions(all);
  for (const auto& m : modules) {
    std::vector<ModuleDecl> scope;
    for (const auto& name : dependency_order(modules, m.name)) {
      for (const auto& other : modules) {
        if (other.name == name) scope.push_back(other);
      }
    }
    Vocabulary vocab(scope);
    std::vector<Axiom> axioms = m.axioms;
    classify_axioms(axioms, vocab.functions());
    for (const auto& a : axioms) v.check_axiom(a, vocab);
  }
}

}  // namespace

ValidationReport validate(const std::vector<ModuleDecl>& modules) {
  ValidationReport report;
  Validator v(report);
  validate_modules(v, modules);
  return report;
}

ValidationReport validate(const SystemDescription& sd) {
  ValidationReport report;
  Validator v(report);
  validate_modules(v, sd.modules);
  if (report.ok()) v.check_structure(sd.structure, sd.modules);
  return report;
}

}  // namespace corealm::alm

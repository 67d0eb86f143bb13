#include "corealm/asp/compile.hpp"

#include <algorithm>
#include <set>

#include "corealm/alm/model.hpp"
#include "corealm/alm/parser.hpp"
#include "corealm/error.hpp"

namespace corealm::asp {

using alm::FunctionKind;
using alm::Literal;
using alm::LiteralKind;

namespace {

Term sym(const std::string& s) { return Term::symbol(s); }
Term var(const std::string& s) { return Term::variable(s); }
Term num(int i) { return Term::integer(i); }

Term fterm(const std::string& name, const std::vector<Term>& args) {
  return args.empty() ? Term::symbol(name) : Term::function(name, args);
}

BodyLiteral pos(std::string p, std::vector<Term> args, bool negated = false) {
  return BodyLiteral::pos(Atom::make(std::move(p), std::move(args), negated));
}

BodyLiteral naf(std::string p, std::vector<Term> args, bool negated = false) {
  return BodyLiteral::neg(Atom::make(std::move(p), std::move(args), negated));
}

/// Resolved inputs shared by compilation and the reasoning tasks.
struct Context {
  alm::SystemDescription sd;  // structure with schemas expanded
  alm::Vocabulary vocab;
  std::vector<std::string> warnings;
};

Context prepare(const alm::SystemDescription& input) {
  auto report = alm::validate(input);
  if (!report.ok()) throw Error("InvalidSystemDescription", report.str());
  Context ctx;
  ctx.sd = input;
  ctx.sd.structure = alm::expand_schemas(input.structure, input.modules, &ctx.warnings);
  ctx.vocab = alm::Vocabulary(ctx.sd.modules, &ctx.sd.structure);
  return ctx;
}

class AxiomCompiler {
 public:
  AxiomCompiler(const alm::Vocabulary& vocab, int horizon, std::vector<std::string>& warnings)
      : vocab_(vocab), horizon_(horizon), warnings_(warnings) {}

  Rule compile(const alm::Axiom& axiom) {
    std::vector<std::string> used = axiom.variables();
    time_ = fresh(used, "I");
    fresh_count_ = 0;
    used_ = used;

    bool temporal = axiom.kind == alm::AxiomKind::DynamicCausalLaw || axiom.kind == alm::AxiomKind::Executability;
    if (axiom.head && is_fluent_literal(*axiom.head)) temporal = true;
    for (const auto& l : axiom.body) temporal = temporal || is_fluent_literal(l);

    std::vector<BodyLiteral> body;
    if (axiom.kind == alm::AxiomKind::DynamicCausalLaw || axiom.kind == alm::AxiomKind::Executability) {
      body.push_back(pos("occurs", {axiom.trigger, var(time_)}));
    }
    for (const auto& l : axiom.body) translate_body(l, body);
    if (axiom.kind == alm::AxiomKind::DynamicCausalLaw) {
      body.push_back(pos("step", {var(time_)}));
      body.push_back(BodyLiteral::compare(var(time_), "<", num(horizon_)));
    } else if (temporal && axiom.kind != alm::AxiomKind::Executability) {
      body.push_back(pos("step", {var(time_)}));
    }

    Rule rule;
    if (!axiom.head) {
      rule = Rule::constraint({});
    } else {
      Term t = axiom.kind == alm::AxiomKind::DynamicCausalLaw ? Term::arith('+', var(time_), num(1)) : var(time_);
      rule = Rule::normal(head_atom(*axiom.head, t), {});
    }
    rule.body = std::move(body);
    make_safe(axiom, rule);
    return rule;
  }

 private:
  static std::string fresh(const std::vector<std::string>& used, const std::string& base) {
    if (std::ranges::find(used, base) == used.end()) return base;
    for (int i = 0;; ++i) {
      std::string cand = base + std::to_string(i);
      if (std::ranges::find(used, cand) == used.end()) return cand;
    }
  }

  std::optional<alm::Signature> sig(const std::string& name) const { return vocab_.signature(name); }

  bool is_fluent_literal(const Literal& l) const {
    if (l.kind != LiteralKind::Boolean && l.kind != LiteralKind::Value) return false;
    auto s = sig(l.name);
    return s && s->fluent();
  }

  /// `f(x) = true` and `f(x) = false` on boolean functions become plain
  /// boolean literals.
  static Literal normalize(const Literal& l, const alm::Signature& s) {
    if (l.kind == LiteralKind::Value && s.boolean() && l.value.is_constant() &&
        (l.value.name == "true" || l.value.name == "false")) {
      bool truth = (l.value.name == "true") != l.negated;
      return Literal::boolean(l.name, l.args, !truth);
    }
    return l;
  }

  Atom head_atom(const Literal& raw, const Term& t) const {
    auto s = sig(raw.name);
    if (!s) throw Error("UnknownFunction", "unknown function " + raw.name, raw.span);
    Literal l = normalize(raw, *s);
    Term f = fterm(l.name, l.args);
    bool fluent = !s->attribute && alm::is_fluent(s->kind);
    if (l.kind == LiteralKind::Boolean) {
      return fluent ? Atom::make("holds", {f, t}, l.negated) : Atom::make("stat", {f}, l.negated);
    }
    if (l.kind == LiteralKind::Value && !l.negated) {
      return fluent ? Atom::make("val", {f, l.value, t}) : Atom::make("stat", {f, l.value});
    }
    throw Error("BadHead", "unsupported head literal " + raw.str(), raw.span);
  }

  void translate_body(const Literal& raw, std::vector<BodyLiteral>& out) {
    switch (raw.kind) {
      case LiteralKind::Instance:
        if (raw.negated) {
          out.push_back(naf("instance", {raw.args[0], sym(raw.name)}));
        } else {
          out.push_back(pos("instance", {raw.args[0], sym(raw.name)}));
        }
        return;
      case LiteralKind::Comparison:
        out.push_back(BodyLiteral::compare(raw.args[0], raw.negated ? "!=" : "=", raw.args[1]));
        return;
      case LiteralKind::Boolean:
      case LiteralKind::Value:
        break;
    }
    auto s = sig(raw.name);
    if (!s) throw Error("UnknownFunction", "unknown function " + raw.name, raw.span);
    Literal l = normalize(raw, *s);
    Term f = fterm(l.name, l.args);
    bool fluent = !s->attribute && alm::is_fluent(s->kind);
    Term t = var(time_);
    if (l.kind == LiteralKind::Boolean) {
      out.push_back(fluent ? pos("holds", {f, t}, l.negated) : pos("stat", {f}, l.negated));
      return;
    }
    if (!l.negated) {
      out.push_back(fluent ? pos("val", {f, l.value, t}) : pos("stat", {f, l.value}));
      return;
    }
    // f(x) != v: f has some other value.
    std::vector<std::string> used = used_;
    used.push_back(time_);
    Term w = var(fresh(used, "W" + std::to_string(fresh_count_++)));
    used_.push_back(w.name);
    out.push_back(fluent ? pos("val", {f, w, t}) : pos("stat", {f, w}));
    out.push_back(BodyLiteral::compare(w, "!=", l.value));
  }

  /// Adds `instance(V, s)` for variables not bound by a positive atom.
  void make_safe(const alm::Axiom& axiom, Rule& rule) {
    std::set<std::string> bound;
    for (const auto& l : rule.body) {
      if (l.kind == BodyLiteral::Kind::Atom && !l.naf) {
        std::vector<std::string> v;
        for (const auto& a : l.atom.args) a.collect_variables(v);
        bound.insert(v.begin(), v.end());
      }
    }
    std::vector<std::string> needed;
    for (const auto& l : rule.body) {
      if (l.kind == BodyLiteral::Kind::Comparison) {
        l.lhs.collect_variables(needed);
        l.rhs.collect_variables(needed);
      } else if (l.naf) {
        for (const auto& a : l.atom.args) a.collect_variables(needed);
      }
    }
    if (rule.kind == Rule::Kind::Normal) {
      for (const auto& a : rule.head.args) a.collect_variables(needed);
    }
    auto sorts = alm::variable_sorts(axiom, vocab_);
    std::vector<BodyLiteral> extra;
    for (const auto& v : needed) {
      if (bound.contains(v)) continue;
      auto it = sorts.find(v);
      if (it == sorts.end() || it->second.empty()) {
        throw Error("UnsafeVariable", "variable " + v + " of axiom '" + axiom.str() + "' has no sort", axiom.span);
      }
      extra.push_back(pos("instance", {var(v), sym(it->second.front())}));
      bound.insert(v);
    }
    for (const auto& [v, ss] : sorts) {
      for (const auto& s : ss) {
        if (vocab_.instances_of(s).empty()) {
          warnings_.push_back("UnboundedSort: variable " + v + " of '" + axiom.str() + "' ranges over empty sort " + s);
        }
      }
    }
    rule.body.insert(rule.body.begin() + (rule.body.empty() ? 0 : 0), extra.begin(), extra.end());
  }

  const alm::Vocabulary& vocab_;
  int horizon_;
  std::vector<std::string>& warnings_;
  std::string time_;
  std::vector<std::string> used_;
  int fresh_count_ = 0;
};

std::vector<Term> arg_vars(std::size_t n) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(var("X" + std::to_string(i + 1)));
  return out;
}

std::vector<BodyLiteral> typed(const std::vector<Term>& vars, const std::vector<std::string>& sorts) {
  std::vector<BodyLiteral> out;
  for (std::size_t i = 0; i < vars.size(); ++i) out.push_back(pos("instance", {vars[i], sym(sorts[i])}));
  return out;
}

/// Domain rule `pred(f(X1..Xn)[, V]) :- instance(X1, s1), ...`.
Rule domain_rule(const std::string& pred, const std::string& fn, const std::vector<std::string>& sorts,
                 const std::optional<std::string>& range) {
  auto vars = arg_vars(sorts.size());
  auto body = typed(vars, sorts);
  std::vector<Term> head{fterm(fn, vars)};
  if (range) {
    head.push_back(var("V"));
    body.push_back(pos("instance", {var("V"), sym(*range)}));
  }
  return Rule::normal(Atom::make(pred, head), body);
}

/// Facts for an assignment `f(args) = v` on a static or attribute.
void assignment_facts(AspProgram& p, const Term& f, const Term& value, bool boolean) {
  if (boolean) {
    p.facts.push_back(Atom::make("stat", {f}, value == sym("false")));
  } else {
    p.facts.push_back(Atom::make("stat", {f, value}));
  }
}

void add_generic_rules(AspProgram& p, int h) {
  const Term F = var("F"), V = var("V"), W = var("W"), I = var("I"), S = var("S"), S1 = var("S1"), S2 = var("S2"),
             X = var("X");
  const Term next = Term::arith('+', I, num(1));
  auto& r = p.rules;
  r.push_back(Rule::normal(Atom::make("instance", {X, S}), {pos("is_a", {X, S})}));
  r.push_back(Rule::normal(Atom::make("instance", {X, S2}), {pos("instance", {X, S1}), pos("subsort", {S1, S2})}));
  // Boolean basic fluents: free initial value, then inertia.
  r.push_back(Rule::choice({{Atom::make("holds", {F, num(0)}), {}}}, 0, -1, {pos("bfluent", {F})}));
  r.push_back(Rule::normal(Atom::make("holds", {F, num(0)}, true), {pos("bfluent", {F}), naf("holds", {F, num(0)})}));
  r.push_back(Rule::normal(Atom::make("holds", {F, next}),
                           {pos("bfluent", {F}), pos("holds", {F, I}), naf("holds", {F, next}, true), pos("step", {I}),
                            BodyLiteral::compare(I, "<", num(h))}));
  r.push_back(Rule::normal(Atom::make("holds", {F, next}, true),
                           {pos("bfluent", {F}), pos("holds", {F, I}, true), naf("holds", {F, next}), pos("step", {I}),
                            BodyLiteral::compare(I, "<", num(h))}));
  // Non-boolean basic fluents: one value per step, kept unless overridden.
  r.push_back(Rule::choice({{Atom::make("val", {F, V, num(0)}), {}}}, 0, -1, {pos("vfluent", {F, V})}));
  r.push_back(Rule::normal(Atom::make("has_value", {F, I}), {pos("val", {F, V, I})}));
  r.push_back(Rule::constraint({pos("vfluent", {F, V}), pos("step", {I}), naf("has_value", {F, I})}));
  r.push_back(Rule::constraint({pos("val", {F, V, I}), pos("val", {F, W, I}), BodyLiteral::compare(V, "!=", W)}));
  r.push_back(Rule::normal(Atom::make("overridden", {F, V, I}),
                           {pos("vfluent", {F, V}), pos("val", {F, W, I}), BodyLiteral::compare(W, "!=", V)}));
  r.push_back(Rule::normal(Atom::make("val", {F, V, next}),
                           {pos("vfluent", {F, V}), pos("val", {F, V, I}), naf("overridden", {F, V, next}),
                            pos("step", {I}), BodyLiteral::compare(I, "<", num(h))}));
  // Closed world for defined functions and boolean statics.
  r.push_back(Rule::normal(Atom::make("holds", {F, I}, true),
                           {pos("dfluent", {F}), pos("step", {I}), naf("holds", {F, I})}));
  r.push_back(Rule::normal(Atom::make("stat", {F}, true), {pos("dstatic", {F}), naf("stat", {F})}));
  r.push_back(Rule::normal(Atom::make("stat", {F}, true), {pos("bstatic", {F}), naf("stat", {F})}));
  r.push_back(Rule::constraint({pos("stat", {F, V}), pos("stat", {F, W}), BodyLiteral::compare(V, "!=", W)}));
}

}  // namespace

AspProgram compile(const alm::SystemDescription& input, int horizon) {
  if (horizon < 0) throw Error("BadHorizon", "horizon must be non-negative");
  Context ctx = prepare(input);
  const auto& vocab = ctx.vocab;
  AspProgram p;
  p.horizon = horizon;
  p.warnings = ctx.warnings;

  for (int i = 0; i <= horizon; ++i) p.facts.push_back(Atom::make("step", {num(i)}));
  for (const auto& s : vocab.sorts()) {
    for (const auto& parent : vocab.parents(s)) p.facts.push_back(Atom::make("subsort", {sym(s), sym(parent)}));
    p.sorts[s] = vocab.instances_of(s);
  }
  p.facts.push_back(Atom::make("is_a", {sym("true"), sym(alm::kBooleans)}));
  p.facts.push_back(Atom::make("is_a", {sym("false"), sym(alm::kBooleans)}));
  for (const auto& [inst, sorts] : vocab.instances()) {
    for (const auto& s : sorts) p.facts.push_back(Atom::make("is_a", {inst, sym(s)}));
  }
  for (const auto& decl : ctx.sd.structure.instances) {
    for (const auto& inst : decl.names) {
      for (const auto& a : decl.assignments) {
        const alm::AttributeInfo* info = vocab.attribute_for(a.name, decl.sort);
        if (!info) throw Error("UnknownAttribute", "no attribute " + a.name + " for sort " + decl.sort, a.span);
        std::vector<Term> args{inst};
        args.insert(args.end(), a.args.begin(), a.args.end());
        assignment_facts(p, fterm(a.name, args), a.value, info->decl.range == alm::kBooleans);
      }
    }
  }
  for (const auto& a : ctx.sd.structure.statics) {
    auto s = vocab.signature(a.name);
    if (!s) throw Error("UnknownFunction", "unknown static " + a.name, a.span);
    assignment_facts(p, fterm(a.name, a.args), a.value, s->boolean());
  }

  add_generic_rules(p, horizon);

  for (const auto& f : vocab.functions()) {
    bool boolean = f.range == alm::kBooleans;
    switch (f.kind) {
      case FunctionKind::BasicFluent:
        p.rules.push_back(boolean ? domain_rule("bfluent", f.name, f.arg_sorts, std::nullopt)
                                  : domain_rule("vfluent", f.name, f.arg_sorts, f.range));
        break;
      case FunctionKind::DefinedFluent:
        p.rules.push_back(domain_rule("dfluent", f.name, f.arg_sorts, std::nullopt));
        break;
      case FunctionKind::BasicStatic:
        if (boolean) p.rules.push_back(domain_rule("bstatic", f.name, f.arg_sorts, std::nullopt));
        break;
      case FunctionKind::DefinedStatic:
        p.rules.push_back(domain_rule("dstatic", f.name, f.arg_sorts, std::nullopt));
        break;
    }
  }
  std::set<std::string> attribute_names;
  for (const auto& info : vocab.all_attributes()) {
    if (info.decl.range != alm::kBooleans || !attribute_names.insert(info.decl.name).second) continue;
    auto s = vocab.signature(info.decl.name);
    p.rules.push_back(domain_rule("bstatic", info.decl.name, s->args, std::nullopt));
  }

  AxiomCompiler ac(vocab, horizon, p.warnings);
  for (const auto& m : ctx.sd.modules) {
    for (const auto& a : m.axioms) p.rules.push_back(ac.compile(a));
  }
  std::ranges::sort(p.warnings);
  p.warnings.erase(std::unique(p.warnings.begin(), p.warnings.end()), p.warnings.end());
  return p;
}

// ---------------------------------------------------------------------------
// History
// ---------------------------------------------------------------------------

History History::parse(std::string_view text, const std::string& file) {
  AspProgram p;
  try {
    p = parse_program(text, file);
  } catch (const Error& e) {
    throw Error("BadHistory", e.what());
  }
  if (!p.rules.empty()) throw Error("BadHistory", "history files hold facts only: " + p.rules.front().str());
  History h;
  for (const auto& f : p.facts) {
    auto step = [&](const Term& t) {
      if (t.kind != Term::Kind::Integer || t.value < 0) throw Error("BadHistory", "bad step in " + f.str());
      return static_cast<int>(t.value);
    };
    if (f.predicate == "hpd" && f.args.size() == 2 && !f.negated) {
      h.happened.emplace_back(f.args[0], step(f.args[1]));
    } else if (f.predicate == "obs" && f.args.size() == 3 && !f.negated) {
      h.observed.push_back({f.args[0], f.args[1], step(f.args[2])});
    } else {
      throw Error("BadHistory", "expected hpd(a, i) or obs(f, v, i), got " + f.str());
    }
  }
  return h;
}

int History::end() const {
  int e = 0;
  for (const auto& [_, i] : happened) e = std::max(e, i + 1);
  for (const auto& o : observed) e = std::max(e, o.step);
  return e;
}

void add_history(AspProgram& program, const History& history, const alm::SystemDescription& input) {
  alm::SystemDescription sd = input;
  sd.structure = alm::expand_schemas(input.structure, input.modules);
  alm::Vocabulary vocab(sd.modules, &sd.structure);
  const Term F = var("F"), V = var("V"), I = var("I"), A = var("A");
  for (const auto& [a, i] : history.happened) {
    if (!vocab.is_instance(a, alm::kActions)) throw Error("BadHistory", "unknown action " + a.str(true));
    if (i >= program.horizon) {
      throw Error("BadHistory", "hpd(" + a.str() + ", " + std::to_string(i) + ") lies beyond the horizon");
    }
    program.facts.push_back(Atom::make("hpd", {a, num(i)}));
  }
  for (const auto& o : history.observed) {
    auto s = vocab.signature(o.fluent.functor());
    if (!s || s->attribute || !alm::is_fluent(s->kind)) {
      throw Error("BadHistory", "observation of " + o.fluent.str(true) + " which is not a fluent");
    }
    bool typed = o.fluent.args.size() == s->args.size();
    for (std::size_t k = 0; typed && k < s->args.size(); ++k) typed = vocab.is_instance(o.fluent.args[k], s->args[k]);
    if (!typed || !vocab.is_instance(o.value, s->range)) {
      throw Error("BadHistory", "observation " + o.fluent.str(true) + " = " + o.value.str(true) +
                                    " does not match the signature of " + s->name);
    }
    if (o.step > program.horizon) throw Error("BadHistory", "observation at step " + std::to_string(o.step) +
                                                                 " lies beyond the horizon");
    program.facts.push_back(Atom::make("obs", {o.fluent, o.value, num(o.step)}));
  }
  program.rules.push_back(Rule::normal(Atom::make("occurs", {A, I}), {pos("hpd", {A, I})}));
  program.rules.push_back(Rule::constraint({pos("obs", {F, sym("true"), I}), naf("holds", {F, I})}));
  program.rules.push_back(Rule::constraint({pos("obs", {F, sym("false"), I}), naf("holds", {F, I}, true)}));
  program.rules.push_back(Rule::constraint({pos("obs", {F, V, I}), pos("vfluent", {F, V}), naf("val", {F, V, I})}));
}

// ---------------------------------------------------------------------------
// Reasoning tasks
// ---------------------------------------------------------------------------

Trajectory trajectory(const GroundProgram& gp, const AnswerSet& model, int horizon) {
  Trajectory t;
  t.states.resize(static_cast<std::size_t>(horizon) + 1);
  for (int a : model) {
    const Term& k = gp.atoms[static_cast<std::size_t>(a)];
    auto step_of = [&](const Term& s) { return s.kind == Term::Kind::Integer ? static_cast<int>(s.value) : -1; };
    if ((k.name == "holds" || k.name == "-holds") && k.args.size() == 2) {
      int i = step_of(k.args[1]);
      if (i >= 0 && i <= horizon) t.states[static_cast<std::size_t>(i)][k.args[0]] = sym(k.name == "holds" ? "true" : "false");
    } else if (k.name == "val" && k.args.size() == 3) {
      int i = step_of(k.args[2]);
      if (i >= 0 && i <= horizon) t.states[static_cast<std::size_t>(i)][k.args[0]] = k.args[1];
    } else if (k.name == "occurs" && k.args.size() == 2) {
      t.occurrences.emplace_back(step_of(k.args[1]), k.args[0]);
    }
  }
  std::ranges::sort(t.occurrences);
  return t;
}

std::vector<std::map<Term, std::optional<Term>>> common_values(const std::vector<Trajectory>& trajectories) {
  std::vector<std::map<Term, std::optional<Term>>> out;
  if (trajectories.empty()) return out;
  out.resize(trajectories.front().states.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& [f, v] : trajectories.front().states[i]) out[i][f] = v;
    for (const auto& t : trajectories) {
      for (auto& [f, v] : out[i]) {
        auto it = t.states[i].find(f);
        if (!v || it == t.states[i].end() || it->second != *v) v.reset();
      }
    }
  }
  return out;
}

namespace {

std::vector<AnswerSet> run(const AspProgram& p, const ReasoningOptions& options, GroundProgram& gp) {
  gp = ground(p);
  SolveOptions so;
  so.max_models = options.max_models;
  auto models = solve(gp, so);
  if (options.check_models) {
    for (const auto& m : models) {
      auto problems = check_model(gp, m);
      if (!problems.empty()) throw Error("CheckFailed", problems.front());
    }
  }
  return models;
}

}  // namespace

std::vector<Trajectory> project(const alm::SystemDescription& sd, const History& history, int horizon,
                                const ReasoningOptions& options) {
  AspProgram p = compile(sd, horizon);
  add_history(p, history, sd);
  GroundProgram gp;
  auto models = run(p, options, gp);
  if (models.empty()) throw Error("Inconsistent", "the history contradicts the system description");
  std::vector<Trajectory> out;
  for (const auto& m : models) out.push_back(trajectory(gp, m, horizon));
  return out;
}

Goal parse_goal(std::string_view text) {
  Goal g;
  std::string s(text);
  std::size_t start = 0;
  int depth = 0;
  std::vector<std::string> items;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '(') ++depth;
    if (i < s.size() && s[i] == ')') --depth;
    if (i == s.size() || (s[i] == ',' && depth == 0)) {
      items.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  for (const auto& item : items) {
    auto eq = item.rfind('=');
    if (eq == std::string::npos) throw Error("BadGoal", "expected fluent(args)=value, got '" + item + "'");
    try {
      g.emplace_back(alm::parse_term(item.substr(0, eq)), alm::parse_term(item.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error("BadGoal", "cannot read goal item '" + item + "': " + e.what());
    }
  }
  if (g.empty()) throw Error("BadGoal", "empty goal");
  return g;
}

std::string Plan::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) out += (i ? ", " : "") + steps[i].second.str();
  return out + "]";
}

AspProgram planning_program(const alm::SystemDescription& sd, const History& history, const Goal& goal, int length) {
  const int start = history.end();
  const int horizon = start + length;
  AspProgram p = compile(sd, horizon);
  add_history(p, history, sd);
  const Term A = var("A"), I = var("I");
  p.rules.push_back(Rule::choice({{Atom::make("occurs", {A, I}), {pos("instance", {A, sym(alm::kActions)})}}}, 0, 1,
                                 {pos("step", {I}), BodyLiteral::compare(I, ">=", num(start)),
                                  BodyLiteral::compare(I, "<", num(horizon))}));
  alm::SystemDescription expanded = sd;
  expanded.structure = alm::expand_schemas(sd.structure, sd.modules);
  alm::Vocabulary vocab(expanded.modules, &expanded.structure);
  for (const auto& [f, v] : goal) {
    auto s = vocab.signature(f.functor());
    if (!s || s->attribute || !alm::is_fluent(s->kind)) throw Error("BadGoal", f.str(true) + " is not a fluent");
    if (s->boolean()) {
      if (v != sym("true") && v != sym("false")) throw Error("BadGoal", "boolean goal value expected for " + f.str(true));
      p.rules.push_back(Rule::constraint({naf("holds", {f, num(horizon)}, v == sym("false"))}));
    } else {
      p.rules.push_back(Rule::constraint({naf("val", {f, v, num(horizon)})}));
    }
  }
  return p;
}

std::vector<Plan> plan(const alm::SystemDescription& sd, const History& history, const Goal& goal, int max_length,
                       const ReasoningOptions& options) {
  const int start = history.end();
  for (int length = 0; length <= max_length; ++length) {
    AspProgram p = planning_program(sd, history, goal, length);
    GroundProgram gp;
    auto models = run(p, options, gp);
    if (models.empty()) continue;
    std::set<Plan> plans;
    for (const auto& m : models) {
      Trajectory t = trajectory(gp, m, start + length);
      Plan pl;
      for (const auto& [i, a] : t.occurrences) {
        if (i >= start) pl.steps.emplace_back(i, a);
      }
      plans.insert(std::move(pl));
    }
    return {plans.begin(), plans.end()};
  }
  throw Error("NoPlanWithinHorizon", "no plan of length at most " + std::to_string(max_length));
}

std::vector<std::pair<Term, std::string>> basic_fluents(const alm::SystemDescription& input) {
  alm::SystemDescription sd = input;
  sd.structure = alm::expand_schemas(input.structure, input.modules);
  alm::Vocabulary vocab(sd.modules, &sd.structure);
  std::vector<std::pair<Term, std::string>> out;
  for (const auto& f : vocab.functions()) {
    if (f.kind != FunctionKind::BasicFluent) continue;
    std::vector<std::vector<Term>> combos{{}};
    for (const auto& s : f.arg_sorts) {
      std::vector<std::vector<Term>> next;
      for (const auto& c : combos) {
        for (const auto& t : vocab.instances_of(s)) {
          auto e = c;
          e.push_back(t);
          next.push_back(std::move(e));
        }
      }
      combos = std::move(next);
    }
    for (const auto& c : combos) out.emplace_back(fterm(f.name, c), f.range);
  }
  std::ranges::sort(out);
  return out;
}

std::vector<std::map<Term, Term>> postdict(const alm::SystemDescription& sd, const History& history, int horizon,
                                           const ReasoningOptions& options) {
  auto trajectories = project(sd, history, horizon, options);
  std::set<Term> fixed;
  for (const auto& o : history.observed) {
    if (o.step == 0) fixed.insert(o.fluent);
  }
  std::set<Term> basic;
  for (const auto& [f, _] : basic_fluents(sd)) basic.insert(f);
  std::set<std::map<Term, Term>> completions;
  for (const auto& t : trajectories) {
    std::map<Term, Term> c;
    for (const auto& [f, v] : t.states.front()) {
      if (basic.contains(f) && !fixed.contains(f)) c[f] = v;
    }
    completions.insert(std::move(c));
  }
  return {completions.begin(), completions.end()};
}

}  // namespace corealm::asp

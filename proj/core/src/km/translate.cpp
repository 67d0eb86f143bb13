#include "corealm/km/translate.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>

#include <json.hpp>

#include "corealm/alm/parser.hpp"

namespace corealm::km {

using alm::Axiom;

void TranslationOutput::append(const TranslationOutput& other) {
  auto add = [](auto& into, const auto& from) {
    for (const auto& x : from) {
      if (std::find(into.begin(), into.end(), x) == into.end()) into.push_back(x);
    }
  };
  add(sorts, other.sorts);
  add(functions, other.functions);
  add(attributes, other.attributes);
  add(axioms, other.axioms);
  add(optional_axioms, other.optional_axioms);
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

TranslationConfig TranslationConfig::from_json(const std::string& text) {
  TranslationConfig c;
  try {
    auto j = nlohmann::json::parse(text);
    const auto prepositions = j.value("prepositions", nlohmann::json::array());
    for (const auto& p : prepositions) {
      c.prepositions[{p.at("state").get<std::string>(), p.at("relation").get<std::string>()}] =
          p.at("preposition").get<std::string>();
    }
    const auto negations = j.value("state_negations", nlohmann::json::object());
    for (const auto& [k, v] : negations.items()) {
      c.state_negations[k] = v.get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("ConfigError", std::string("bad translation config: ") + e.what());
  }
  return c;
}

Patch Patch::from_json(const std::string& text) {
  Patch p;
  try {
    auto j = nlohmann::json::parse(text);
    const auto rename = j.value("rename", nlohmann::json::object());
    for (const auto& [k, v] : rename.items()) p.rename[k] = v.get<std::string>();
    if (j.contains("km")) {
      if (j["km"].is_array()) {
        for (const auto& line : j["km"]) p.km += line.get<std::string>() + "\n";
      } else {
        p.km = j["km"].get<std::string>();
      }
    }
    const auto axioms = j.value("axioms", nlohmann::json::object());
    for (const auto& [k, v] : axioms.items()) {
      p.axioms[k] = v.get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("ConfigError", std::string("bad patch file: ") + e.what());
  }
  return p;
}

std::string alm_name(const std::string& km_name) {
  if (km_name == "Action" || km_name == "Event") return alm::kActions;
  if (km_name == "Thing") return alm::kUniverse;
  std::string out;
  for (char c : km_name) {
    if (c == '*') continue;
    out += c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Pattern matching over KM expressions
// ---------------------------------------------------------------------------

std::optional<std::string> the_of_self(const SExpr& e) {
  if (e.is_list() && e.size() == 4 && e[0].is_symbol("the") && e[1].is_symbol() && e[2].is_symbol("of") &&
      e[3].is_symbol("Self")) {
    return e[1].text;
  }
  return std::nullopt;
}

bool is_resulting_state(const SExpr& e) {
  auto a = the_of_self(e);
  return a && *a == "resulting-state";
}

bool is_it(const SExpr& e) {
  return e.is_symbol("It") || (e.is_list() && e.size() == 1 && e[0].is_symbol("It"));
}

/// `(if (has-value (the a of Self)) then X [else Y])`
struct IfValue {
  std::string attr;
  const SExpr* then_branch = nullptr;
  const SExpr* else_branch = nullptr;
};

std::optional<IfValue> match_if(const SExpr& e) {
  if (!e.is_list() || (e.size() != 4 && e.size() != 6) || !e[0].is_symbol("if") || !e[2].is_symbol("then")) {
    return std::nullopt;
  }
  const SExpr& cond = e[1];
  if (!cond.is_list() || cond.size() != 2 || !cond[0].is_symbol("has-value")) return std::nullopt;
  auto attr = the_of_self(cond[1]);
  if (!attr) return std::nullopt;
  IfValue r{*attr, &e[3], nullptr};
  if (e.size() == 6) {
    if (!e[4].is_symbol("else")) return std::nullopt;
    r.else_branch = &e[5];
  }
  return r;
}

/// `(:triple (the resulting-state of Self) object (the a of Self))` -> a
std::optional<std::string> match_simple_add(const SExpr& e) {
  if (e.is_list() && e.size() == 4 && e[0].is_symbol(":triple") && is_resulting_state(e[1]) &&
      e[2].is_symbol("object")) {
    return the_of_self(e[3]);
  }
  return std::nullopt;
}

/// Binary add-list forms naming a second attribute of the resulting state.
///   (:triple (the resulting-state of Self) a2 (the a2 of Self))
///   (forall (the a2 of Self) (:triple It a2-of (the resulting-state of Self)))
std::optional<std::string> match_binary_add(const SExpr& e) {
  if (e.is_list() && e.size() == 4 && e[0].is_symbol(":triple") && is_resulting_state(e[1]) && e[2].is_symbol()) {
    auto a = the_of_self(e[3]);
    if (a && *a == e[2].text) return a;
  }
  if (e.is_list() && e.size() == 3 && e[0].is_symbol("forall")) {
    auto a = the_of_self(e[1]);
    const SExpr& t = e[2];
    if (a && t.is_list() && t.size() == 4 && t[0].is_symbol(":triple") && is_it(t[1]) &&
        t[2].is_symbol(*a + "-of") && is_resulting_state(t[3])) {
      return a;
    }
  }
  return std::nullopt;
}

struct AddItem {
  std::optional<std::string> simple;  // E1: attribute that becomes the object
  std::string attr2;                  // binary form: second attribute
  std::optional<std::string> else_attr;
};

std::optional<AddItem> match_add_item(const SExpr& e) {
  if (auto a = match_simple_add(e)) return AddItem{a, "", std::nullopt};
  if (auto iv = match_if(e)) {
    auto a2 = match_binary_add(*iv->then_branch);
    if (!a2 || *a2 != iv->attr) return std::nullopt;
    AddItem item{std::nullopt, *a2, std::nullopt};
    if (iv->else_branch) {
      auto a1 = match_simple_add(*iv->else_branch);
      if (!a1) return std::nullopt;
      item.else_attr = a1;
    }
    return item;
  }
  return std::nullopt;
}

/// `(forall (the a1 of Self) (:triple It object-of (a S [with (a2 ((the a2 of Self)))])))`
struct PreItem {
  std::string attr1;
  std::string state;
  std::string attr2;  // empty for the unary form
};

std::optional<PreItem> match_pre_item(const SExpr& e) {
  if (!e.is_list() || e.size() != 3 || !e[0].is_symbol("forall")) return std::nullopt;
  auto a1 = the_of_self(e[1]);
  const SExpr& t = e[2];
  if (!a1 || !t.is_list() || t.size() != 4 || !t[0].is_symbol(":triple") || !is_it(t[1]) ||
      !t[2].is_symbol("object-of")) {
    return std::nullopt;
  }
  const SExpr& s = t[3];
  if (!s.is_list() || s.size() < 2 || !s[0].is_symbol("a") || !s[1].is_symbol()) return std::nullopt;
  if (s.size() == 2) return PreItem{*a1, s[1].text, ""};
  if (s.size() != 4 || !s[2].is_symbol("with")) return std::nullopt;
  const SExpr& w = s[3];
  if (!w.is_list() || w.size() != 2 || !w[0].is_symbol() || !w[1].is_list() || w[1].size() != 1) return std::nullopt;
  auto a2 = the_of_self(w[1][0]);
  if (!a2 || *a2 != w[0].text) return std::nullopt;
  return PreItem{*a1, s[1].text, *a2};
}

/// `(allof (the object-of of (the a of Self)) where ((the classes of It) = S))`
std::optional<std::pair<std::string, std::string>> match_defeats(const SExpr& e) {
  if (!e.is_list() || e.size() != 4 || !e[0].is_symbol("allof") || !e[2].is_symbol("where")) return std::nullopt;
  const SExpr& of = e[1];
  if (!of.is_list() || of.size() != 4 || !of[0].is_symbol("the") || !of[1].is_symbol("object-of") ||
      !of[2].is_symbol("of")) {
    return std::nullopt;
  }
  auto a = the_of_self(of[3]);
  const SExpr& cond = e[3];
  if (!a || !cond.is_list() || cond.size() != 3 || !cond[1].is_symbol("=") || !cond[2].is_symbol()) return std::nullopt;
  const SExpr& cls = cond[0];
  if (!cls.is_list() || cls.size() != 4 || !cls[0].is_symbol("the") || !cls[1].is_symbol("classes") ||
      !is_it(cls[3])) {
    return std::nullopt;
  }
  return std::make_pair(*a, cond[2].text);
}

/// `(forall (the defeats of Self) (:triple (It) object (the a of Self)))` -> a
std::optional<std::string> match_del_item(const SExpr& e) {
  if (!e.is_list() || e.size() != 3 || !e[0].is_symbol("forall")) return std::nullopt;
  auto d = the_of_self(e[1]);
  const SExpr& t = e[2];
  if (!d || *d != "defeats" || !t.is_list() || t.size() != 4 || !t[0].is_symbol(":triple") || !is_it(t[1]) ||
      !t[2].is_symbol("object")) {
    return std::nullopt;
  }
  return the_of_self(t[3]);
}

/// Preparatory Move: `(a C with (object ((the ao of Self)))
///   (destination ((a C2 with (slot ((the ad of Self)))))))`, possibly wrapped
/// in `:default` and `(if (has-value ...) then ...)`.
struct Preparatory {
  std::string object_attr;
  std::string slot;
  std::string target_attr;
};

const SExpr* with_entry(const SExpr& frame, const std::string& slot) {
  for (std::size_t i = 3; i < frame.size(); ++i) {
    const SExpr& w = frame[i];
    if (w.is_list() && w.size() == 2 && w[0].is_symbol(slot) && w[1].is_list() && w[1].size() == 1) return &w[1][0];
  }
  return nullptr;
}

std::optional<Preparatory> match_preparatory(const SExpr& value) {
  const SExpr* e = &value;
  while (e->is_list() && e->size() == 1 && (*e)[0].is_list()) e = &(*e)[0];
  if (e->is_list() && e->size() == 2 && (*e)[0].is_symbol(":default")) e = &(*e)[1];
  if (auto iv = match_if(*e)) {
    if (iv->else_branch) return std::nullopt;
    e = iv->then_branch;
  }
  if (!e->is_list() || e->size() < 4 || !(*e)[0].is_symbol("a") || !(*e)[2].is_symbol("with")) return std::nullopt;
  const SExpr* obj = with_entry(*e, "object");
  const SExpr* dest = with_entry(*e, "destination");
  if (!obj || !dest) return std::nullopt;
  auto ao = the_of_self(*obj);
  if (!ao || !dest->is_list() || dest->size() != 4 || !(*dest)[0].is_symbol("a") || !(*dest)[2].is_symbol("with")) {
    return std::nullopt;
  }
  const SExpr& w = (*dest)[3];
  if (!w.is_list() || w.size() != 2 || !w[0].is_symbol() || !w[1].is_list() || w[1].size() != 1) return std::nullopt;
  auto ad = the_of_self(w[1][0]);
  if (!ad) return std::nullopt;
  return Preparatory{*ao, w[0].text, *ad};
}

[[noreturn]] void unrecognized(const std::string& cls, const std::string& clause, const SExpr& e) {
  throw Error("UnrecognizedTriplePattern", cls + " " + clause + ": unsupported expression " + e.str(), e.span);
}

// ---------------------------------------------------------------------------
// Translation context
// ---------------------------------------------------------------------------

bool is_action_attribute(const SlotDef& s) {
  return s.instance_of == "Participant-Relation" || (s.instance_of == "Spatial-Relation" && s.domain == "Event");
}

bool declares_attribute(const AttrSpec& s) {
  return !s.cls.empty() && s.kind != SpecKind::MustntBeA && !(s.kind == SpecKind::Exactly && s.n == 0);
}

struct StateRef {
  std::string f;         // fluent stem, e.g. "obstructed"
  bool positive = true;  // false for states expressed by a negated fluent
  std::string km;        // state whose fluent is used
};

class Ctx {
 public:
  Ctx(const KmKb& kb, const TranslationConfig& config, const Patch* patch)
      : kb_(kb), config_(config), patch_(patch) {}

  const KmKb& kb() const { return kb_; }

  std::string sort(const std::string& km) const {
    if (patch_) {
      if (auto it = patch_->rename.find(km); it != patch_->rename.end()) return it->second;
    }
    return alm_name(km);
  }

  const ClassDecl& state_decl(const std::string& km, const std::string& user) const {
    const ClassDecl* d = kb_.cls(km);
    if (!d || d->kind != ClassKind::State) {
      throw Error("UnknownState", user + " refers to undeclared state " + km, d ? d->span : SourceSpan{});
    }
    return *d;
  }

  StateRef state_ref(const std::string& km) const {
    StateRef r{"", true, km};
    if (auto it = config_.state_negations.find(km); it != config_.state_negations.end()) {
      r.km = it->second;
      r.positive = false;
    }
    std::string stem = r.km.rfind("Be-", 0) == 0 ? r.km.substr(3) : r.km;
    r.f = alm_name(stem);
    return r;
  }

  /// `is_f(arg)` when `holds`, else `-is_f(arg)`, accounting for negated states.
  static std::string unary(const StateRef& s, const std::string& arg, bool holds) {
    return std::string(holds == s.positive ? "" : "-") + "is_" + s.f + "(" + arg + ")";
  }

  std::string prep(const std::string& state, const std::string& relation) const {
    auto it = config_.prepositions.find({state, relation});
    if (it == config_.prepositions.end()) {
      throw Error("UnknownPreposition", "no preposition for relation '" + relation + "' of state " + state);
    }
    return it->second;
  }

  std::string binary_name(const std::string& state, const std::string& relation) const {
    return state_ref(state).f + "_" + prep(state, relation);
  }

  std::string binary(const std::string& state, const std::string& relation, const std::string& a1,
                     const std::string& a2, bool holds) const {
    bool positive = state_ref(state).positive;
    return std::string(holds == positive ? "" : "-") + binary_name(state, relation) + "(" + a1 + ", " + a2 + ")";
  }

  /// Most specific `object` class over the state and its state ancestors.
  std::string object_class(const std::string& state) const {
    std::vector<std::string> candidates;
    std::set<std::string> seen;
    std::function<void(const std::string&)> walk = [&](const std::string& s) {
      if (!seen.insert(s).second) return;
      const ClassDecl* d = kb_.cls(s);
      if (!d) return;
      for (const auto& c : d->every) {
        if (c.kind != ClauseKind::AttrSpec || c.attr != "object") continue;
        for (const auto& spec : c.specs) {
          if (!spec.cls.empty() && spec.kind != SpecKind::MustntBeA) candidates.push_back(spec.cls);
        }
      }
      for (const auto& sup : d->superclasses) {
        const ClassDecl* sd = kb_.cls(sup);
        if (sd && sd->kind == ClassKind::State) walk(sup);
      }
    };
    walk(state);
    if (candidates.empty()) {
      const ClassDecl* d = kb_.cls(state);
      throw Error("MissingObjectRelation", "state " + state + " has no object participant", d ? d->span : SourceSpan{});
    }
    for (const auto& c : candidates) {
      bool most = std::all_of(candidates.begin(), candidates.end(),
                              [&](const std::string& o) { return kb_.is_subclass(c, o); });
      if (most) return sort(c);
    }
    return sort(candidates.front());
  }

  /// Second participant relations of a state: required ones from its own
  /// declaration, associated ones from actions that mention them.
  std::vector<std::pair<std::string, std::string>> relations(const std::string& state) const {
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](const std::string& rel, const std::string& range) {
      for (const auto& [r, _] : out) {
        if (r == rel) return;
      }
      out.emplace_back(rel, range);
    };
    if (const ClassDecl* d = kb_.cls(state)) {
      for (const auto& c : d->every) {
        if (c.kind != ClauseKind::AttrSpec || c.attr == "object") continue;
        for (const auto& spec : c.specs) {
          if (spec.kind == SpecKind::A || spec.kind == SpecKind::AtLeast || spec.kind == SpecKind::Exactly) {
            add(c.attr, sort(spec.cls));
            break;
          }
        }
      }
    }
    auto slot_range = [&](const std::string& rel) {
      const SlotDef* s = kb_.slot(rel);
      return s ? sort(s->range) : std::string(alm::kUniverse);
    };
    for (const auto& cls : kb_.classes) {
      if (cls.kind != ClassKind::Action) continue;
      const EveryClause* rs = cls.find(ClauseKind::ResultingState);
      for (const auto& c : cls.every) {
        if (c.kind == ClauseKind::AddList && rs && rs->state == state) {
          for (const auto& item : c.items) {
            auto m = match_add_item(item);
            if (m && !m->attr2.empty()) add(m->attr2, slot_range(m->attr2));
          }
        }
        if (c.kind == ClauseKind::PcsList || c.kind == ClauseKind::NcsList || c.kind == ClauseKind::SoftPcsList) {
          for (const auto& item : c.items) {
            auto m = match_pre_item(item);
            if (m && m->state == state && !m->attr2.empty()) add(m->attr2, slot_range(m->attr2));
          }
        }
      }
    }
    return out;
  }

  bool functional_attribute(const std::string& attr) const {
    const SlotDef* s = kb_.slot(attr);
    return s && is_action_attribute(*s) && s->cardinality == "N-to-1";
  }

  std::string attr_lit(const std::string& attr, const std::string& x, const std::string& v) const {
    std::string a = alm_name(attr);
    return functional_attribute(attr) ? a + "(" + x + ") = " + v : a + "(" + x + ", " + v + ")";
  }

  /// Owner sort and range of the attribute as visible from `cls`; with
  /// `include_self` false only superclasses are consulted.
  std::optional<std::pair<std::string, std::string>> attribute_decl(const std::string& cls, const std::string& attr,
                                                                    bool include_self) const {
    if (const SlotDef* s = kb_.slot(attr); s && is_action_attribute(*s)) {
      return std::make_pair(std::string(alm::kActions), sort(s->range));
    }
    std::set<std::string> seen;
    std::function<std::optional<std::pair<std::string, std::string>>(const std::string&, bool)> walk =
        [&](const std::string& c, bool self) -> std::optional<std::pair<std::string, std::string>> {
      if (!seen.insert(c).second) return std::nullopt;
      const ClassDecl* d = kb_.cls(c);
      if (!d) return std::nullopt;
      for (const auto& sup : d->superclasses) {
        if (auto r = walk(sup, true)) return r;
      }
      if (!self) return std::nullopt;
      for (const auto& clause : d->every) {
        if (clause.kind != ClauseKind::AttrSpec || clause.attr != attr) continue;
        for (const auto& spec : clause.specs) {
          if (declares_attribute(spec)) return std::make_pair(sort(c), sort(spec.cls));
        }
      }
      return std::nullopt;
    };
    return walk(cls, include_self);
  }

  void require_attribute(TranslationOutput& out, const ClassDecl& cls, const std::string& attr,
                         const std::string& range) const {
    if (attribute_decl(cls.name, attr, false)) return;
    alm::AttributeDecl d{alm_name(attr), {range}, alm::kBooleans, {}};
    alm::AttributeInfo info{sort(cls.name), d};
    if (std::find(out.attributes.begin(), out.attributes.end(), info) == out.attributes.end()) {
      out.attributes.push_back(info);
    }
  }

  /// `defined_<attr>` over the attribute's owner sort plus its definition.
  std::string defined_static(TranslationOutput& out, const ClassDecl& cls, const std::string& attr) const {
    auto decl = attribute_decl(cls.name, attr, true);
    std::string owner = decl ? decl->first : sort(cls.name);
    std::string name = "defined_" + alm_name(attr);
    out.functions.push_back({name, alm::FunctionKind::DefinedStatic, {owner}, alm::kBooleans, {}});
    out.axioms.push_back(alm::parse_axiom(name + "(X) if " + attr_lit(attr, "X", "A") + "."));
    return name;
  }

  TranslationOutput attr_spec(const ClassDecl& cls, const std::string& attr, const AttrSpec& spec) const;
  TranslationOutput precondition(const ClassDecl& cls, const EveryClause& clause, bool optional) const;
  TranslationOutput effects(const ClassDecl& cls) const;
  TranslationOutput defeasible(const ClassDecl& cls, const EveryClause& clause) const;
  TranslationOutput state(const ClassDecl& st) const;
  TranslationOutput action(const ClassDecl& act) const;

 private:
  const KmKb& kb_;
  const TranslationConfig& config_;
  const Patch* patch_;
};

Axiom ax(const std::string& text) { return alm::parse_axiom(text); }

TranslationOutput Ctx::attr_spec(const ClassDecl& cls, const std::string& attr, const AttrSpec& spec) const {
  TranslationOutput out;
  out.source = cls.name;
  const std::string c = sort(cls.name);
  const std::string c1 = spec.cls.empty() ? std::string() : sort(spec.cls);
  auto lit = [&](const std::string& x, const std::string& v) { return attr_lit(attr, x, v); };
  auto inherited = attribute_decl(cls.name, attr, false);

  auto narrowing = [&](bool negated) {
    out.axioms.push_back(ax("false if instance(X, " + c + "), " + lit("X", "A") + ", " + (negated ? "-" : "") +
                            "instance(A, " + c1 + ")."));
  };
  auto exists = [&]() {
    if (!inherited) {
      require_attribute(out, cls, attr, c1);
    } else if (inherited->second != c1) {
      narrowing(true);
    }
    std::string d = defined_static(out, cls, attr);
    out.axioms.push_back(ax("false if instance(X, " + c + "), -" + d + "(X)."));
  };
  auto at_most = [&](int n) {
    if (!inherited) require_attribute(out, cls, attr, c1);
    if (n == 1) {
      out.axioms.push_back(ax("-" + lit("X", "A1") + " if " + lit("X", "A2") + ", A1 != A2, instance(X, " + c +
                              "), instance(A1, " + c1 + "), instance(A2, " + c1 + ")."));
    } else {
      out.axioms.push_back(ax("-" + lit("X", "A1") + " if " + lit("X", "A2") + ", " + lit("X", "A3") +
                              ", A1 != A2, A1 != A3, A2 != A3, instance(X, " + c + "), instance(A1, " + c1 +
                              "), instance(A2, " + c1 + "), instance(A3, " + c1 + ")."));
    }
  };
  auto at_least_2 = [&]() {
    if (!inherited) require_attribute(out, cls, attr, c1);
    auto decl = attribute_decl(cls.name, attr, true);
    std::string owner = decl ? decl->first : c;
    std::string name = "at_least_2_" + alm_name(attr);
    if (decl && decl->second != c1) name += "_" + c1;
    out.functions.push_back({name, alm::FunctionKind::DefinedStatic, {owner}, alm::kBooleans, {}});
    out.axioms.push_back(ax(name + "(X) if " + lit("X", "A1") + ", " + lit("X", "A2") + ", A1 != A2, instance(A1, " +
                            c1 + "), instance(A2, " + c1 + ")."));
    out.axioms.push_back(ax("false if instance(X, " + c + "), -" + name + "(X)."));
  };

  switch (spec.kind) {
    case SpecKind::A:
      exists();
      break;
    case SpecKind::MustBeA:
      if (!inherited) require_attribute(out, cls, attr, c1);
      narrowing(true);
      break;
    case SpecKind::MustntBeA:
      if (!inherited) require_attribute(out, cls, attr, alm::kUniverse);
      narrowing(false);
      break;
    case SpecKind::AtMost:
      at_most(spec.n);
      break;
    case SpecKind::AtLeast:
      if (spec.n == 1) {
        exists();
      } else {
        at_least_2();
      }
      break;
    case SpecKind::Exactly:
      if (spec.n == 0) {
        if (!inherited) require_attribute(out, cls, attr, c1);
        out.axioms.push_back(ax("false if instance(X, " + c + "), " + lit("X", "A") + ", instance(A, " + c1 + ")."));
      } else if (spec.n == 1) {
        exists();
        at_most(1);
      } else {
        at_least_2();
        at_most(2);
      }
      break;
    case SpecKind::TheAttrOfSelf:
      out.axioms.push_back(ax(lit("X", "V") + " if " + attr_lit(spec.attr2, "X", "V") + ", instance(X, " + c + ")."));
      break;
    case SpecKind::ExcludedValues:
      out.axioms.push_back(
          ax("false if instance(X, " + c + "), " + lit("X", "A") + ", " + attr_lit(spec.attr2, "X", "A") + "."));
      break;
    case SpecKind::UnifyConstraint: {
      auto decl = attribute_decl(cls.name, attr, true);
      std::string owner = decl ? decl->first : c;
      std::string name = "unequal_" + alm_name(attr) + "_" + alm_name(spec.attr2);
      out.functions.push_back({name, alm::FunctionKind::DefinedStatic, {owner}, alm::kBooleans, {}});
      out.axioms.push_back(
          ax(name + "(X) if " + lit("X", "A1") + ", " + attr_lit(spec.attr2, "X", "A2") + ", A1 != A2."));
      out.axioms.push_back(ax("false if instance(X, " + c + "), " + name + "(X)."));
      out.axioms.push_back(ax(lit("X", "V") + " if " + attr_lit(spec.attr2, "X", "V") + ", instance(X, " + c + ")."));
      out.axioms.push_back(ax(attr_lit(spec.attr2, "X", "V") + " if " + lit("X", "V") + ", instance(X, " + c + ")."));
      break;
    }
  }
  return out;
}

TranslationOutput Ctx::precondition(const ClassDecl& cls, const EveryClause& clause, bool optional) const {
  TranslationOutput out;
  out.source = cls.name;
  const std::string c = sort(cls.name);
  // pcs-list: impossible unless the state holds; ncs-list: impossible if it holds.
  bool holds_blocks = clause.kind == ClauseKind::NcsList;
  auto& target = optional ? out.optional_axioms : out.axioms;
  for (const auto& item : clause.items) {
    auto m = match_pre_item(item);
    if (!m) unrecognized(cls.name, to_string(clause.kind), item);
    state_decl(m->state, cls.name);
    if (m->attr2.empty()) {
      target.push_back(ax("impossible occurs(X) if instance(X, " + c + "), " + attr_lit(m->attr1, "X", "A") + ", " +
                          unary(state_ref(m->state), "A", holds_blocks) + "."));
    } else {
      target.push_back(ax("impossible occurs(X) if instance(X, " + c + "), " + attr_lit(m->attr1, "X", "A1") + ", " +
                          attr_lit(m->attr2, "X", "A2") + ", " +
                          binary(m->state, m->attr2, "A1", "A2", holds_blocks) + "."));
    }
  }
  return out;
}

TranslationOutput Ctx::effects(const ClassDecl& cls) const {
  TranslationOutput out;
  out.source = cls.name;
  const std::string c = sort(cls.name);
  const EveryClause* rs = cls.find(ClauseKind::ResultingState);
  const EveryClause* add = cls.find(ClauseKind::AddList);
  const EveryClause* defeats = cls.find(ClauseKind::Defeats);
  const EveryClause* del = cls.find(ClauseKind::DelList);

  if (add) {
    if (!rs) throw Error("UnrecognizedTriplePattern", cls.name + " add-list without a resulting-state", add->span);
    state_decl(rs->state, cls.name);
    StateRef s = state_ref(rs->state);
    std::vector<AddItem> items;
    std::string object_attr = "object";
    for (const auto& item : add->items) {
      auto m = match_add_item(item);
      if (!m) unrecognized(cls.name, "add-list", item);
      if (m->simple) object_attr = *m->simple;
      items.push_back(*m);
    }
    for (const auto& m : items) {
      if (m.simple) {
        out.axioms.push_back(ax("occurs(X) causes " + unary(s, "A", true) + " if instance(X, " + c + "), " +
                                attr_lit(*m.simple, "X", "A") + "."));
        continue;
      }
      std::string a1 = m.else_attr ? *m.else_attr : object_attr;
      out.axioms.push_back(ax("occurs(X) causes " + binary(rs->state, m.attr2, "A1", "A2", true) + " if instance(X, " +
                              c + "), " + attr_lit(a1, "X", "A1") + ", " + attr_lit(m.attr2, "X", "A2") + "."));
      if (m.else_attr) {
        std::string d = defined_static(out, cls, m.attr2);
        out.axioms.push_back(ax("occurs(X) causes " + unary(s, "A", true) + " if instance(X, " + c + "), " +
                                attr_lit(a1, "X", "A") + ", -" + d + "(X)."));
      }
    }
  }

  if (del) {
    std::vector<std::pair<std::string, std::string>> defeated;
    if (defeats) {
      for (const auto& item : defeats->items) {
        auto m = match_defeats(item);
        if (!m) unrecognized(cls.name, "defeats", item);
        state_decl(m->second, cls.name);
        defeated.push_back(*m);
      }
    }
    if (defeated.empty()) throw Error("UnrecognizedTriplePattern", cls.name + " del-list without defeats", del->span);
    for (const auto& item : del->items) {
      auto attr = match_del_item(item);
      if (!attr) unrecognized(cls.name, "del-list", item);
      for (const auto& [_, state] : defeated) {
        StateRef s = state_ref(state);
        out.axioms.push_back(ax("occurs(X) causes " + unary(s, "A", false) + " if instance(X, " + c + "), " +
                                attr_lit(*attr, "X", "A") + ", " + unary(s, "A", true) + "."));
      }
    }
  }
  return out;
}

TranslationOutput Ctx::defeasible(const ClassDecl& cls, const EveryClause& clause) const {
  if (clause.kind == ClauseKind::SoftPcsList) {
    EveryClause as_pcs = clause;
    as_pcs.kind = ClauseKind::PcsList;
    return precondition(cls, as_pcs, true);
  }
  TranslationOutput out;
  out.source = cls.name;
  const std::string c = sort(cls.name);
  for (const auto& item : clause.items) {
    auto m = match_preparatory(item);
    if (!m) unrecognized(cls.name, "preparatory-event", item);
    const SlotDef* s = kb_.slot(m->slot);
    if (!s || is_action_attribute(*s) || s->cardinality != "N-to-N") unrecognized(cls.name, "preparatory-event", item);
    out.optional_axioms.push_back(ax("impossible occurs(X) if instance(X, " + c + "), " +
                                     attr_lit(m->object_attr, "X", "A1") + ", " +
                                     attr_lit(m->target_attr, "X", "A2") + ", -" + alm_name(m->slot) + "(A1, A2)."));
  }
  return out;
}

TranslationOutput Ctx::state(const ClassDecl& st) const {
  TranslationOutput out;
  out.source = st.name;
  out.synsets = st.synsets;
  StateRef self = state_ref(st.name);
  const std::string c1 = object_class(kb_.cls(self.km) ? self.km : st.name);
  const std::string is_f = "is_" + self.f;
  out.symbol = is_f;
  out.functions.push_back({is_f, alm::FunctionKind::BasicFluent, {c1}, alm::kBooleans, {}});
  if (!self.positive) out.notes.push_back(st.name + " is expressed as -" + is_f);

  if (self.positive) {
    for (const auto& [rel, range] : relations(st.name)) {
      std::string name = binary_name(st.name, rel);
      std::string v(1, static_cast<char>(std::toupper(static_cast<unsigned char>(alm_name(rel)[0]))));
      if (v == "O") v = "V";
      out.functions.push_back({name, alm::FunctionKind::BasicFluent, {c1, range}, alm::kBooleans, {}});
      out.axioms.push_back(ax(is_f + "(O) if " + name + "(O, " + v + ")."));
      out.axioms.push_back(ax("-" + name + "(O, " + v + ") if -" + is_f + "(O)."));
    }
  }

  for (const auto& sup : st.superclasses) {
    // An undeclared Be- superclass is still known to be a state.
    const ClassDecl* d = kb_.cls(sup);
    bool state = d ? d->kind == ClassKind::State : sup.rfind("Be-", 0) == 0;
    if (!state || sup == "State") continue;
    std::string head = unary(state_ref(sup), "O", true);
    std::string body = unary(self, "O", true);
    if (head != body) out.axioms.push_back(ax(head + " if " + body + "."));
  }
  return out;
}

TranslationOutput Ctx::action(const ClassDecl& act) const {
  TranslationOutput out;
  out.source = act.name;
  out.synsets = act.synsets;
  const std::string c = sort(act.name);
  out.symbol = c;
  alm::SortDecl decl;
  decl.names = {c};
  for (const auto& s : act.superclasses) {
    std::string p = sort(s);
    if (std::find(decl.parents.begin(), decl.parents.end(), p) == decl.parents.end()) decl.parents.push_back(p);
  }
  if (decl.parents.empty()) decl.parents.push_back(alm::kActions);
  out.sorts.push_back(decl);

  bool effects_done = false;
  for (const auto& clause : act.every) {
    switch (clause.kind) {
      case ClauseKind::AttrSpec:
        for (const auto& spec : clause.specs) out.append(attr_spec(act, clause.attr, spec));
        break;
      case ClauseKind::PcsList:
      case ClauseKind::NcsList:
        out.append(precondition(act, clause, false));
        break;
      case ClauseKind::SoftPcsList:
      case ClauseKind::PreparatoryEvent:
        out.append(defeasible(act, clause));
        break;
      case ClauseKind::ResultingState:
      case ClauseKind::AddList:
      case ClauseKind::Defeats:
      case ClauseKind::DelList:
        if (!effects_done) out.append(effects(act));
        effects_done = true;
        break;
    }
  }
  if (patch_) {
    if (auto it = patch_->axioms.find(act.name); it != patch_->axioms.end()) {
      for (const auto& text : it->second) out.axioms.push_back(ax(text));
    }
  }
  return out;
}

/// Classes of one kind, superclasses first, otherwise in declaration order.
std::vector<const ClassDecl*> ordered(const KmKb& kb, ClassKind kind) {
  static const std::set<std::string> kBuiltin = {"Thing", "Action", "Event", "State"};
  std::vector<const ClassDecl*> out;
  std::set<std::string> done;
  std::function<void(const ClassDecl&)> visit = [&](const ClassDecl& c) {
    if (!done.insert(c.name).second) return;
    for (const auto& s : c.superclasses) {
      const ClassDecl* d = kb.cls(s);
      if (d && d->kind == kind && !kBuiltin.contains(d->name)) visit(*d);
    }
    out.push_back(&c);
  };
  for (const auto& c : kb.classes) {
    if (c.kind == kind && !kBuiltin.contains(c.name)) visit(c);
  }
  return out;
}

}  // namespace

TranslationOutput translate_slot(const SlotDef& slot) {
  TranslationOutput out;
  out.source = slot.name;
  std::string name = alm_name(slot.name);
  std::string c1 = alm_name(slot.domain);
  std::string c2 = alm_name(slot.range);
  if (slot.cardinality != "N-to-N" && slot.cardinality != "N-to-1") {
    throw Error("UnsupportedCardinality", "slot " + slot.name + " has cardinality " + slot.cardinality, slot.span);
  }
  bool relational = slot.cardinality == "N-to-N";
  if (is_action_attribute(slot)) {
    alm::AttributeDecl d{name, {}, c2, {}};
    if (relational) d = alm::AttributeDecl{name, {c2}, alm::kBooleans, {}};
    out.attributes.push_back({alm::kActions, d});
    out.notes.push_back(slot.name + " describes an intrinsic property of events");
    return out;
  }
  alm::FunctionDecl f;
  f.name = name;
  f.kind = slot.fluent_status == "*Non-Fluent" ? alm::FunctionKind::BasicStatic : alm::FunctionKind::BasicFluent;
  f.arg_sorts = relational ? std::vector<std::string>{c1, c2} : std::vector<std::string>{c1};
  f.range = relational ? std::string(alm::kBooleans) : c2;
  out.functions.push_back(f);
  out.symbol = name;
  return out;
}

TranslationOutput translate_state(const ClassDecl& state, const KmKb& kb, const TranslationConfig& config) {
  return Ctx(kb, config, nullptr).state(state);
}

TranslationOutput translate_action(const ClassDecl& action, const KmKb& kb, const TranslationConfig& config,
                                   const Patch* patch) {
  return Ctx(kb, config, patch).action(action);
}

TranslationOutput translate_attr_spec(const ClassDecl& cls, const std::string& attr, const AttrSpec& spec,
                                      const KmKb& kb) {
  TranslationConfig none;
  return Ctx(kb, none, nullptr).attr_spec(cls, attr, spec);
}

TranslationOutput translate_precondition(const ClassDecl& cls, const EveryClause& clause, const KmKb& kb,
                                         const TranslationConfig& config) {
  return Ctx(kb, config, nullptr).precondition(cls, clause, false);
}

TranslationOutput translate_effects(const ClassDecl& cls, const KmKb& kb, const TranslationConfig& config) {
  return Ctx(kb, config, nullptr).effects(cls);
}

TranslationOutput translate_defeasible(const ClassDecl& cls, const EveryClause& clause, const KmKb& kb,
                                       const TranslationConfig& config) {
  return Ctx(kb, config, nullptr).defeasible(cls, clause);
}

std::vector<TranslationOutput> translate_kb(const KmKb& kb, const TranslationConfig& config, const Patch* patch) {
  Ctx ctx(kb, config, patch);
  std::vector<TranslationOutput> out;
  for (const ClassDecl* c : ordered(kb, ClassKind::Entity)) {
    TranslationOutput o;
    o.source = c->name;
    alm::SortDecl d;
    d.names = {ctx.sort(c->name)};
    for (const auto& s : c->superclasses) d.parents.push_back(ctx.sort(s));
    if (d.parents.empty()) d.parents.push_back(alm::kUniverse);
    o.sorts.push_back(d);
    out.push_back(std::move(o));
  }
  for (const auto& s : kb.slots) out.push_back(translate_slot(s));
  for (const ClassDecl* c : ordered(kb, ClassKind::State)) out.push_back(ctx.state(*c));
  for (const ClassDecl* c : ordered(kb, ClassKind::Action)) out.push_back(ctx.action(*c));
  return out;
}

namespace {

template <typename T>
bool contains(const std::vector<T>& v, const T& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

alm::ModuleDecl build_module(const std::vector<TranslationOutput>& outputs, const std::string& name,
                             const std::vector<std::string>& depends_on,
                             const std::vector<alm::ModuleDecl>& ancestors) {
  alm::ModuleDecl m;
  m.name = name;
  m.depends_on = depends_on;

  auto inherited_sort = [&](const alm::SortDecl& s) {
    for (const auto& a : ancestors) {
      for (const auto& d : a.sorts) {
        if (d.names == s.names && d.parents == s.parents) return true;
      }
    }
    return false;
  };
  auto inherited_attribute = [&](const alm::AttributeInfo& info) {
    for (const auto& a : ancestors) {
      for (const auto& d : a.sorts) {
        if (contains(d.names, info.owner) && contains(d.attributes, info.decl)) return true;
      }
    }
    return false;
  };

  std::vector<alm::FunctionDecl> visible;
  for (const auto& a : ancestors) visible.insert(visible.end(), a.functions.begin(), a.functions.end());

  for (const auto& o : outputs) {
    for (const auto& s : o.sorts) {
      alm::SortDecl bare{s.names, s.parents, {}, {}};
      if (!inherited_sort(bare) && !contains(m.sorts, bare)) m.sorts.push_back(bare);
    }
  }
  for (const auto& o : outputs) {
    for (const auto& info : o.attributes) {
      if (inherited_attribute(info)) continue;
      auto it = std::find_if(m.sorts.begin(), m.sorts.end(),
                             [&](const alm::SortDecl& s) { return contains(s.names, info.owner); });
      if (it == m.sorts.end()) {
        std::string parent = info.owner == alm::kActions ? alm::kUniverse : alm::kActions;
        m.sorts.push_back({{info.owner}, {parent}, {}, {}});
        it = std::prev(m.sorts.end());
      }
      if (!contains(it->attributes, info.decl)) it->attributes.push_back(info.decl);
    }
    for (const auto& f : o.functions) {
      if (!contains(visible, f) && !contains(m.functions, f)) m.functions.push_back(f);
    }
  }
  visible.insert(visible.end(), m.functions.begin(), m.functions.end());
  std::vector<alm::Axiom> candidates;
  for (const auto& o : outputs) candidates.insert(candidates.end(), o.axioms.begin(), o.axioms.end());
  alm::classify_axioms(candidates, visible);
  for (const auto& a : candidates) {
    bool seen = contains(m.axioms, a);
    for (const auto& anc : ancestors) seen = seen || contains(anc.axioms, a);
    if (!seen) m.axioms.push_back(a);
  }
  return m;
}

alm::ModuleDecl build_optional_module(const std::vector<TranslationOutput>& outputs, const std::string& name,
                                      const std::string& parent) {
  alm::ModuleDecl m;
  m.name = name;
  m.optional = true;
  m.depends_on = {parent};
  for (const auto& o : outputs) {
    for (const auto& a : o.optional_axioms) {
      if (!contains(m.axioms, a)) m.axioms.push_back(a);
    }
  }
  return m;
}

std::vector<std::string> opposites_report(const std::vector<TranslationOutput>& outputs,
                                          const std::vector<std::pair<std::string, std::string>>& opposites) {
  std::set<std::string> fluents;
  for (const auto& o : outputs) {
    for (const auto& f : o.functions) {
      if (alm::is_fluent(f.kind)) fluents.insert(f.name);
    }
  }
  auto guarded = [&](const std::string& km) -> std::optional<std::set<std::string>> {
    for (const auto& o : outputs) {
      if (o.source != km) continue;
      std::set<std::string> out;
      for (const auto& a : o.axioms) {
        if (a.kind != alm::AxiomKind::Executability) continue;
        for (const auto& l : a.body) {
          if (fluents.contains(l.name)) out.insert(l.name);
        }
      }
      return out;
    }
    return std::nullopt;
  };
  std::vector<std::string> report;
  for (const auto& [a, b] : opposites) {
    auto fa = guarded(a);
    auto fb = guarded(b);
    if (!fa || !fb) {
      report.push_back("opposite pair " + a + "/" + b + ": " + (!fa ? a : b) + " is not in the knowledge base");
      continue;
    }
    for (const auto& [x, fx, y, fy] : {std::tuple{a, *fa, b, *fb}, std::tuple{b, *fb, a, *fa}}) {
      for (const auto& f : fx) {
        if (!fy.contains(f)) {
          report.push_back(x + " has an executability condition over " + f + " but its opposite " + y +
                           " has none");
        }
      }
    }
  }
  return report;
}

}  // namespace corealm::km

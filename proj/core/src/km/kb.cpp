#include "corealm/km/kb.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>

namespace corealm::km {

std::string to_string(SpecKind k) {
  switch (k) {
    case SpecKind::A: return "a";
    case SpecKind::MustBeA: return "must-be-a";
    case SpecKind::MustntBeA: return "mustnt-be-a";
    case SpecKind::AtMost: return "at-most";
    case SpecKind::AtLeast: return "at-least";
    case SpecKind::Exactly: return "exactly";
    case SpecKind::TheAttrOfSelf: return "the-of-self";
    case SpecKind::ExcludedValues: return "excluded-values";
    case SpecKind::UnifyConstraint: return "constraint";
  }
  return {};
}

std::string to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::AttrSpec: return "attribute";
    case ClauseKind::PcsList: return "pcs-list";
    case ClauseKind::NcsList: return "ncs-list";
    case ClauseKind::AddList: return "add-list";
    case ClauseKind::DelList: return "del-list";
    case ClauseKind::ResultingState: return "resulting-state";
    case ClauseKind::Defeats: return "defeats";
    case ClauseKind::SoftPcsList: return "soft-pcs-list";
    case ClauseKind::PreparatoryEvent: return "preparatory-event";
  }
  return {};
}

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::Action: return "action";
    case ClassKind::State: return "state";
    case ClassKind::Entity: return "entity";
  }
  return {};
}

const EveryClause* ClassDecl::find(ClauseKind k) const {
  for (const auto& c : every) {
    if (c.kind == k) return &c;
  }
  return nullptr;
}

const SlotDef* KmKb::slot(const std::string& name) const {
  for (const auto& s : slots) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ClassDecl* KmKb::cls(const std::string& name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool KmKb::is_subclass(const std::string& sub, const std::string& super) const {
  std::set<std::string> seen;
  std::function<bool(const std::string&)> walk = [&](const std::string& c) {
    if (c == super) return true;
    if (!seen.insert(c).second) return false;
    const ClassDecl* d = cls(c);
    if (!d) return false;
    for (const auto& s : d->superclasses) {
      if (walk(s)) return true;
    }
    return false;
  };
  return walk(sub);
}

namespace {

const std::map<std::string, ClauseKind> kListSlots = {
    {"pcs-list", ClauseKind::PcsList},       {"ncs-list", ClauseKind::NcsList},
    {"add-list", ClauseKind::AddList},       {"del-list", ClauseKind::DelList},
    {"soft-pcs-list", ClauseKind::SoftPcsList}, {"defeats", ClauseKind::Defeats},
    {"preparatory-event", ClauseKind::PreparatoryEvent},
};

const std::set<std::string> kSlotFields = {"instance-of", "domain", "range", "cardinality", "fluent-status"};

// Event structure and text generation slots lie outside the fragment even
// when their values look like attribute specifications.
const std::set<std::string> kExcludedSlots = {"subevents",   "first-subevent", "next-event", "actions",
                                              "time-during", "duration",       "text-defn",  "role"};

/// `(the attr of Self)` -> attr
std::optional<std::string> the_of_self(const SExpr& e) {
  if (e.is_list() && e.size() == 4 && e[0].is_symbol("the") && e[1].is_symbol() && e[2].is_symbol("of") &&
      e[3].is_symbol("Self")) {
    return e[1].text;
  }
  return std::nullopt;
}

std::optional<AttrSpec> parse_spec(const SExpr& e) {
  if (auto a = the_of_self(e)) return AttrSpec{SpecKind::TheAttrOfSelf, 0, "", *a};
  if (!e.is_list() || e.size() < 2 || !e[0].is_symbol()) return std::nullopt;
  const std::string& head = e[0].text;
  if (e.size() == 2 && e[1].is_symbol()) {
    if (head == "a") return AttrSpec{SpecKind::A, 0, e[1].text, ""};
    if (head == "must-be-a") return AttrSpec{SpecKind::MustBeA, 0, e[1].text, ""};
    if (head == "mustnt-be-a") return AttrSpec{SpecKind::MustntBeA, 0, e[1].text, ""};
  }
  if (e.size() == 3 && e[1].kind == SExpr::Kind::Integer && e[2].is_symbol() && e[1].value >= 0 &&
      e[1].value <= 2) {
    int n = static_cast<int>(e[1].value);
    if (head == "at-most" && n > 0) return AttrSpec{SpecKind::AtMost, n, e[2].text, ""};
    if (head == "at-least" && n > 0) return AttrSpec{SpecKind::AtLeast, n, e[2].text, ""};
    if (head == "exactly") return AttrSpec{SpecKind::Exactly, n, e[2].text, ""};
  }
  if (head == "excluded-values" && e.size() == 2) {
    if (auto a = the_of_self(e[1])) return AttrSpec{SpecKind::ExcludedValues, 0, "", *a};
  }
  if (head == "constraint" && e.size() == 2 && e[1].is_list() && e[1].size() == 3 && e[1][0].is_symbol("TheValue") &&
      e[1][1].is_symbol("&")) {
    if (auto a = the_of_self(e[1][2])) return AttrSpec{SpecKind::UnifyConstraint, 0, "", *a};
  }
  return std::nullopt;
}

std::vector<std::string> symbols_of(const SExpr& values) {
  std::vector<std::string> out;
  for (const auto& v : values.items) {
    if (v.is_symbol()) out.push_back(v.text);
  }
  return out;
}

class Lifter {
 public:
  KmKb run(const std::vector<SExpr>& exprs) {
    for (const auto& e : exprs) frame(e);
    for (auto& c : kb_.classes) c.kind = kind_of(c.name);
    return std::move(kb_);
  }

 private:
  void unsupported(const std::string& name, const SourceSpan& span) {
    kb_.unsupported.push_back({name, span});
  }

  ClassDecl& class_named(const std::string& name, const SourceSpan& span) {
    for (auto& c : kb_.classes) {
      if (c.name == name) return c;
    }
    ClassDecl c;
    c.name = name;
    c.span = span;
    kb_.classes.push_back(std::move(c));
    return kb_.classes.back();
  }

  void frame(const SExpr& e) {
    if (e.is_list() && e.size() >= 2 && e[0].is_symbol() && e[1].is_symbol("has")) {
      has_frame(e);
    } else if (e.is_list() && e.size() >= 3 && e[0].is_symbol("every") && e[1].is_symbol() && e[2].is_symbol("has")) {
      every_frame(e);
    } else {
      ++kb_.input_clauses;
      std::string name = e.is_list() && e.size() > 0 && e[0].is_symbol() ? e[0].text : e.str();
      unsupported(name, e.span);
    }
  }

  static bool entry_shape(const SExpr& entry) {
    return entry.is_list() && entry.size() == 2 && entry[0].is_symbol() && entry[1].is_list();
  }

  void has_frame(const SExpr& e) {
    const std::string& name = e[0].text;
    bool is_slot = false;
    for (std::size_t i = 2; i < e.size(); ++i) {
      if (entry_shape(e[i]) && e[i][0].is_symbol("instance-of")) is_slot = true;
    }
    if (is_slot) {
      slot_frame(e);
      return;
    }
    ClassDecl& c = class_named(name, e.span);
    for (std::size_t i = 2; i < e.size(); ++i) {
      const SExpr& entry = e[i];
      ++kb_.input_clauses;
      if (!entry_shape(entry)) {
        unsupported(entry.is_list() && entry.size() && entry[0].is_symbol() ? entry[0].text : entry.str(),
                    entry.span);
        continue;
      }
      const std::string& slot = entry[0].text;
      if (slot == "superclasses") {
        for (const auto& s : symbols_of(entry[1])) c.superclasses.push_back(s);
        ++kb_.lifted_clauses;
      } else if (slot == "wn20-synset") {
        read_synsets(entry[1], c.synsets);
        ++kb_.lifted_clauses;
      } else {
        unsupported(slot, entry.span);
      }
    }
  }

  static void read_synsets(const SExpr& e, std::vector<Synset>& out) {
    if (!e.is_list()) return;
    if (e.size() == 4 && e[0].is_symbol(":triple") && e[1].kind == SExpr::Kind::String &&
        e[2].kind == SExpr::Kind::Integer && e[3].kind == SExpr::Kind::String) {
      out.push_back({e[1].text, static_cast<int>(e[2].value), e[3].text});
      return;
    }
    for (const auto& i : e.items) read_synsets(i, out);
  }

  void slot_frame(const SExpr& e) {
    SlotDef s;
    s.name = e[0].text;
    s.span = e.span;
    std::set<std::string> seen;
    for (std::size_t i = 2; i < e.size(); ++i) {
      const SExpr& entry = e[i];
      ++kb_.input_clauses;
      if (!entry_shape(entry) || !kSlotFields.contains(entry[0].text) || entry[1].size() != 1 ||
          !entry[1][0].is_symbol()) {
        unsupported(entry_shape(entry) ? entry[0].text : entry.str(), entry.span);
        continue;
      }
      const std::string& field = entry[0].text;
      const std::string& value = entry[1][0].text;
      if (field == "instance-of") s.instance_of = value;
      if (field == "domain") s.domain = value;
      if (field == "range") s.range = value;
      if (field == "cardinality") s.cardinality = value;
      if (field == "fluent-status") s.fluent_status = value;
      seen.insert(field);
      ++kb_.lifted_clauses;
    }
    if (seen.size() != kSlotFields.size()) {
      ++kb_.input_clauses;
      unsupported("incomplete slot definition " + s.name, e.span);
      return;
    }
    kb_.slots.push_back(std::move(s));
  }

  void every_frame(const SExpr& e) {
    ClassDecl& c = class_named(e[1].text, e.span);
    for (std::size_t i = 3; i < e.size(); ++i) {
      const SExpr& entry = e[i];
      ++kb_.input_clauses;
      if (!entry_shape(entry)) {
        unsupported(entry.is_list() && entry.size() && entry[0].is_symbol() ? entry[0].text : entry.str(),
                    entry.span);
        continue;
      }
      if (auto clause = every_clause(entry)) {
        c.every.push_back(std::move(*clause));
        ++kb_.lifted_clauses;
      } else {
        unsupported(entry[0].text, entry.span);
      }
    }
  }

  static std::optional<EveryClause> every_clause(const SExpr& entry) {
    const std::string& slot = entry[0].text;
    const SExpr& values = entry[1];
    EveryClause c;
    c.span = entry.span;
    if (slot == "resulting-state") {
      if (values.size() != 1 || !values[0].is_list() || values[0].size() != 2 || !values[0][0].is_symbol("a") ||
          !values[0][1].is_symbol()) {
        return std::nullopt;
      }
      c.kind = ClauseKind::ResultingState;
      c.state = values[0][1].text;
      return c;
    }
    if (auto it = kListSlots.find(slot); it != kListSlots.end()) {
      c.kind = it->second;
      c.items = values.items;
      return c;
    }
    if (kExcludedSlots.contains(slot)) return std::nullopt;
    c.kind = ClauseKind::AttrSpec;
    c.attr = slot;
    if (values.items.empty()) return std::nullopt;
    for (const auto& v : values.items) {
      auto spec = parse_spec(v);
      if (!spec) return std::nullopt;
      c.specs.push_back(*spec);
    }
    return c;
  }

  ClassKind kind_of(const std::string& name) {
    std::set<std::string> seen;
    std::function<std::optional<ClassKind>(const std::string&)> walk =
        [&](const std::string& n) -> std::optional<ClassKind> {
      if (n == "Action") return ClassKind::Action;
      if (n == "State") return ClassKind::State;
      if (n.rfind("Be-", 0) == 0) return ClassKind::State;
      if (!seen.insert(n).second) return std::nullopt;
      const ClassDecl* c = kb_.cls(n);
      if (!c) return std::nullopt;
      for (const auto& s : c->superclasses) {
        if (auto k = walk(s)) return k;
      }
      return std::nullopt;
    };
    if (auto k = walk(name)) return *k;
    // Undeclared ancestry: an action is recognizable by its effect and
    // precondition slots.
    if (const ClassDecl* c = kb_.cls(name)) {
      for (const auto& clause : c->every) {
        if (clause.kind != ClauseKind::AttrSpec) return ClassKind::Action;
      }
    }
    return ClassKind::Entity;
  }

  KmKb kb_;
};

}  // namespace

KmKb lift_km(const std::vector<SExpr>& exprs) { return Lifter().run(exprs); }

KmKb load_km(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<SExpr> all;
  for (const auto& [name, text] : files) {
    auto exprs = parse_sexprs(text, name);
    all.insert(all.end(), std::make_move_iterator(exprs.begin()), std::make_move_iterator(exprs.end()));
  }
  return lift_km(all);
}

}  // namespace corealm::km

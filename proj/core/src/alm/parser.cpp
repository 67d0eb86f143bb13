#include "corealm/alm/parser.hpp"

#include <algorithm>
#include <set>

#include "corealm/lexer.hpp"

namespace corealm::alm {

namespace {

const std::set<std::string, std::less<>> kSectionWords = {
    "module", "optional", "depends", "sort", "function", "axioms", "attributes",
    "structure", "instances", "values", "theory", "import", "system"};

class Parser {
 public:
  Parser(std::string_view text, const std::string& file)
      : ts_(tokenize(text, LexOptions{file, true})) {
    ts_.skip_newlines();
  }

  SystemDescription system_description() {
    SystemDescription sd;
    ts_.expect_ident("system");
    ts_.expect_ident("description");
    sd.name = ts_.expect_identifier("system description name");
    ts_.end_statement();

    ts_.expect_ident("theory");
    sd.theory_name = ts_.expect_identifier("theory name");
    ts_.end_statement();
    while (true) {
      if (ts_.peek().ident("import")) {
        Import imp;
        imp.span = ts_.next().span;
        ts_.expect_ident("from");
        imp.library = ts_.expect_identifier("library name");
        ts_.expect_ident("module");
        imp.module = ts_.expect_identifier("module name");
        ts_.end_statement();
        sd.imports.push_back(std::move(imp));
      } else if (ts_.peek().ident("module") || ts_.peek().ident("optional")) {
        sd.modules.push_back(module());
      } else {
        break;
      }
    }

    ts_.expect_ident("structure");
    sd.structure.name = ts_.expect_identifier("structure name");
    ts_.end_statement();
    if (ts_.accept_ident("instances")) {
      ts_.end_statement();
      instances(sd.structure);
    }
    if (ts_.accept_ident("values")) {
      ts_.expect_ident("of");
      ts_.expect_ident("statics");
      ts_.end_statement();
      while (!at_section_word() && !ts_.at_end()) {
        sd.structure.statics.push_back(assignment());
      }
    }
    expect_end();
    return sd;
  }

  ModuleDecl module() {
    ModuleDecl m;
    m.span = ts_.peek().span;
    if (ts_.accept_ident("optional")) m.optional = true;
    if (!ts_.peek().ident("module")) {
      if (ts_.peek().kind == Token::Kind::Identifier) {
        throw Error("UnknownKeyword", "unknown keyword '" + ts_.peek().text + "'", ts_.peek().span);
      }
      ts_.fail("expected 'module'");
    }
    ts_.next();
    m.name = ts_.expect_identifier("module name");
    ts_.end_statement();

    if (ts_.accept_ident("depends")) {
      ts_.expect_ident("on");
      m.depends_on = name_list("module name");
      ts_.end_statement();
    }
    if (ts_.peek().ident("sort") && ts_.peek(1).ident("declarations")) {
      ts_.next();
      ts_.next();
      ts_.end_statement();
      while (starts_sort_line()) m.sorts.push_back(sort_decl());
    }
    if (ts_.peek().ident("function") && ts_.peek(1).ident("declarations")) {
      ts_.next();
      ts_.next();
      ts_.end_statement();
      while (ts_.peek().ident("fluent") || ts_.peek().ident("static")) function_decls(m.functions);
    }
    if (ts_.accept_ident("axioms")) {
      ts_.end_statement();
      while (!ts_.at_end() && !at_section_word()) m.axioms.push_back(axiom());
    }
    classify_axioms(m.axioms, m.functions);
    return m;
  }

  std::vector<ModuleDecl> modules() {
    std::vector<ModuleDecl> out;
    while (!ts_.at_end()) out.push_back(module());
    return out;
  }

  Axiom single_axiom() {
    Axiom a = axiom();
    expect_end();
    return a;
  }

  Term single_term() {
    Term t = term();
    ts_.skip_newlines();
    expect_end();
    return t;
  }

  void expect_end() {
    ts_.skip_newlines();
    if (!ts_.at_end()) {
      if (ts_.peek().kind == Token::Kind::Identifier && !kSectionWords.contains(ts_.peek().text) &&
          ts_.peek(1).kind == Token::Kind::Newline) {
        throw Error("UnknownKeyword", "unknown keyword '" + ts_.peek().text + "'", ts_.peek().span);
      }
      ts_.fail("unexpected trailing input");
    }
  }

 private:
  bool at_section_word() const {
    const Token& t = ts_.peek();
    if (t.kind != Token::Kind::Identifier || !kSectionWords.contains(t.text)) return false;
    // `values` and `function` may name ordinary functions; require the keyword shape.
    if (t.text == "values") return ts_.peek(1).ident("of");
    if (t.text == "function" || t.text == "sort") return ts_.peek(1).ident("declarations");
    return ts_.peek(1).kind != Token::Kind::Punct || t.text == "module";
  }

  std::vector<std::string> name_list(std::string_view what) {
    std::vector<std::string> names{ts_.expect_identifier(what)};
    while (ts_.accept_punct(",")) names.push_back(ts_.expect_identifier(what));
    return names;
  }

  bool starts_sort_line() const {
    if (ts_.peek().kind != Token::Kind::Identifier) return false;
    for (std::size_t i = 1;; i += 2) {
      const Token& t = ts_.peek(i);
      if (t.punct("::")) return true;
      if (!t.punct(",") || ts_.peek(i + 1).kind != Token::Kind::Identifier) return false;
    }
  }

  SortDecl sort_decl() {
    SortDecl s;
    s.span = ts_.peek().span;
    s.names = name_list("sort name");
    ts_.expect_punct("::");
    s.parents = name_list("parent sort");
    ts_.end_statement();
    if (ts_.accept_ident("attributes")) {
      ts_.end_statement();
      while (ts_.peek().kind == Token::Kind::Identifier && !starts_sort_line() && !at_section_word()) {
        SourceSpan span = ts_.peek().span;
        auto names = name_list("attribute name");
        ts_.expect_punct(":");
        auto [args, range] = signature();
        ts_.end_statement();
        for (auto& n : names) s.attributes.push_back(AttributeDecl{n, args, range, span});
      }
    }
    return s;
  }

  std::pair<std::vector<std::string>, std::string> signature() {
    std::vector<std::string> sorts{ts_.expect_identifier("sort name")};
    while (ts_.accept_punct("*")) sorts.push_back(ts_.expect_identifier("sort name"));
    if (ts_.accept_punct("->")) {
      return {sorts, ts_.expect_identifier("range sort")};
    }
    if (sorts.size() != 1) ts_.fail("expected '->'");
    return {{}, sorts.front()};
  }

  void function_decls(std::vector<FunctionDecl>& out) {
    SourceSpan span = ts_.peek().span;
    bool fluent = ts_.next().text == "fluent";
    bool defined;
    if (ts_.accept_ident("basic")) {
      defined = false;
    } else if (ts_.accept_ident("defined")) {
      defined = true;
    } else {
      ts_.fail("expected 'basic' or 'defined'");
    }
    FunctionKind kind = fluent ? (defined ? FunctionKind::DefinedFluent : FunctionKind::BasicFluent)
                               : (defined ? FunctionKind::DefinedStatic : FunctionKind::BasicStatic);
    auto names = name_list("function name");
    ts_.expect_punct(":");
    auto [args, range] = signature();
    ts_.end_statement();
    for (auto& n : names) out.push_back(FunctionDecl{n, kind, args, range, span});
  }

  Axiom axiom() {
    Axiom a;
    a.span = ts_.peek().span;
    if (ts_.peek().ident("impossible")) {
      ts_.next();
      a.kind = AxiomKind::Executability;
      a.trigger = occurs();
      if (!ts_.peek().ident("if")) ts_.fail("expected 'if' after impossible occurs(...)");
    } else if (ts_.peek().ident("occurs") && ts_.peek(1).punct("(")) {
      a.kind = AxiomKind::DynamicCausalLaw;
      a.trigger = occurs();
      ts_.expect_ident("causes");
      if (ts_.peek().kind == Token::Kind::Newline || ts_.peek().kind == Token::Kind::End ||
          ts_.peek().punct(".")) {
        ts_.fail("expected effect literal after 'causes'");
      }
      a.head = literal();
    } else if (ts_.peek().ident("false")) {
      ts_.next();
      a.kind = AxiomKind::StateConstraint;
    } else {
      a.kind = AxiomKind::StateConstraint;
      a.head = literal();
    }
    if (ts_.accept_ident("if")) {
      a.body.push_back(literal());
      while (ts_.accept_punct(",")) a.body.push_back(literal());
    }
    if (a.head && a.head->kind == LiteralKind::Comparison) {
      throw Error("SyntaxError", "comparison cannot be an axiom head", a.head->span);
    }
    ts_.end_statement();
    return a;
  }

  Term occurs() {
    ts_.expect_ident("occurs");
    ts_.expect_punct("(");
    Term t = term();
    ts_.expect_punct(")");
    return t;
  }

  Literal literal() {
    SourceSpan span = ts_.peek().span;
    bool negated = ts_.accept_punct("-");
    Literal l;
    if (ts_.peek().ident("instance") && ts_.peek(1).punct("(")) {
      ts_.next();
      ts_.next();
      Term t = term();
      ts_.expect_punct(",");
      std::string sort = ts_.expect_identifier("sort name");
      ts_.expect_punct(")");
      l = Literal::instance(std::move(t), std::move(sort), negated);
    } else if (ts_.peek().kind == Token::Kind::Variable || ts_.peek().kind == Token::Kind::Integer) {
      if (negated) ts_.fail("negation applies to function literals only");
      Term lhs = term();
      bool neq = relation(true);
      Term rhs = term();
      l = Literal::compare(std::move(lhs), std::move(rhs), neq);
    } else {
      std::string fn = ts_.expect_identifier("function name");
      std::vector<Term> args = ts_.peek().punct("(") ? arguments() : std::vector<Term>{};
      if (ts_.peek().punct("=") || ts_.peek().punct("!=")) {
        if (negated) ts_.fail("negated literal cannot carry a value");
        bool neq = relation(false);
        Term value = term();
        if (value.kind == Term::Kind::Symbol && (value.name == "true" || value.name == "false")) {
          l = Literal::boolean(std::move(fn), std::move(args), (value.name == "false") != neq);
        } else {
          l = Literal::equals(std::move(fn), std::move(args), std::move(value), neq);
        }
      } else {
        l = Literal::boolean(std::move(fn), std::move(args), negated);
      }
    }
    l.span = span;
    return l;
  }

  bool relation(bool required) {
    if (ts_.accept_punct("=")) return false;
    if (ts_.accept_punct("!=")) return true;
    if (required) ts_.fail("expected '=' or '!='");
    return false;
  }

  std::vector<Term> arguments() {
    ts_.expect_punct("(");
    std::vector<Term> args{term()};
    while (ts_.accept_punct(",")) args.push_back(term());
    ts_.expect_punct(")");
    return args;
  }

  Term term() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Token::Kind::Variable:
        return Term::variable(ts_.next().text);
      case Token::Kind::Integer:
        return Term::integer(std::stoll(ts_.next().text));
      case Token::Kind::Identifier: {
        std::string name = ts_.next().text;
        if (ts_.peek().punct("(")) return Term::function(std::move(name), arguments());
        return Term::symbol(std::move(name));
      }
      default:
        ts_.fail("expected a term");
    }
  }

  void instances(Structure& s) {
    while (!ts_.at_end() && !at_section_word()) {
      SourceSpan span = ts_.peek().span;
      // Lookahead: a line containing `in` at top level declares instances.
      if (line_declares_instances()) {
        InstanceDecl decl;
        decl.span = span;
        decl.names.push_back(term());
        while (ts_.accept_punct(",")) decl.names.push_back(term());
        ts_.expect_ident("in");
        decl.sort = ts_.expect_identifier("sort name");
        ts_.end_statement();
        s.instances.push_back(std::move(decl));
      } else {
        if (s.instances.empty()) ts_.fail("attribute assignment before any instance declaration");
        s.instances.back().assignments.push_back(assignment());
      }
    }
  }

  bool line_declares_instances() const {
    int depth = 0;
    for (std::size_t i = 0;; ++i) {
      const Token& t = ts_.peek(i);
      if (t.kind == Token::Kind::Newline || t.kind == Token::Kind::End) return false;
      if (t.punct("(")) ++depth;
      if (t.punct(")")) --depth;
      if (depth == 0 && t.ident("in")) return true;
    }
  }

  Assignment assignment() {
    Assignment a;
    a.span = ts_.peek().span;
    a.name = ts_.expect_identifier("attribute or static name");
    if (ts_.peek().punct("(")) a.args = arguments();
    ts_.expect_punct("=");
    a.value = term();
    ts_.end_statement();
    return a;
  }

  TokenStream ts_;
};

}  // namespace

SystemDescription parse_system_description(std::string_view text, const std::string& file) {
  Parser p(text, file);
  return p.system_description();
}

ModuleDecl parse_module(std::string_view text, const std::string& file) {
  Parser p(text, file);
  ModuleDecl m = p.module();
  p.expect_end();
  return m;
}

std::vector<ModuleDecl> parse_modules(std::string_view text, const std::string& file) {
  Parser p(text, file);
  return p.modules();
}

Axiom parse_axiom(std::string_view text, const std::string& file) {
  Parser p(text, file);
  return p.single_axiom();
}

Term parse_term(std::string_view text) {
  Parser p(text, "");
  return p.single_term();
}

bool looks_like_system_description(std::string_view text) {
  auto tokens = tokenize(text, LexOptions{});
  return tokens.size() >= 2 && tokens[0].ident("system") && tokens[1].ident("description");
}

void classify_axioms(std::vector<Axiom>& axioms, const std::vector<FunctionDecl>& functions) {
  for (auto& a : axioms) {
    if (a.kind != AxiomKind::StateConstraint && a.kind != AxiomKind::Definition) continue;
    if (!a.head) {
      a.kind = AxiomKind::StateConstraint;
      continue;
    }
    auto it = std::find_if(functions.begin(), functions.end(),
                           [&](const FunctionDecl& f) { return f.name == a.head->name; });
    if (it != functions.end()) {
      a.kind = is_defined(it->kind) ? AxiomKind::Definition : AxiomKind::StateConstraint;
    }
  }
}

}  // namespace corealm::alm

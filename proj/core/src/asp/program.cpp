#include "corealm/asp/program.hpp"

#include "corealm/error.hpp"
#include "corealm/lexer.hpp"

namespace corealm::asp {

Atom Atom::make(std::string predicate, std::vector<Term> args, bool negated) {
  return Atom{std::move(predicate), std::move(args), negated};
}

Term Atom::key() const {
  std::string name = negated ? "-" + predicate : predicate;
  if (args.empty()) return Term::symbol(std::move(name));
  return Term::function(std::move(name), args);
}

Atom Atom::from_key(const Term& key) {
  Atom a;
  a.negated = !key.name.empty() && key.name[0] == '-';
  a.predicate = a.negated ? key.name.substr(1) : key.name;
  a.args = key.args;
  return a;
}

bool Atom::is_ground() const {
  for (const auto& t : args) {
    if (!t.is_ground()) return false;
  }
  return true;
}

std::string Atom::str() const { return key().str(); }

BodyLiteral BodyLiteral::pos(Atom a) {
  BodyLiteral l;
  l.atom = std::move(a);
  return l;
}

BodyLiteral BodyLiteral::neg(Atom a) {
  BodyLiteral l;
  l.atom = std::move(a);
  l.naf = true;
  return l;
}

BodyLiteral BodyLiteral::compare(Term lhs, std::string op, Term rhs) {
  BodyLiteral l;
  l.kind = Kind::Comparison;
  l.lhs = std::move(lhs);
  l.op = std::move(op);
  l.rhs = std::move(rhs);
  return l;
}

std::string BodyLiteral::str() const {
  if (kind == Kind::Comparison) return lhs.str() + " " + op + " " + rhs.str();
  return (naf ? "not " : "") + atom.str();
}

Rule Rule::fact(Atom head) { return normal(std::move(head), {}); }

Rule Rule::normal(Atom head, std::vector<BodyLiteral> body) {
  Rule r;
  r.head = std::move(head);
  r.body = std::move(body);
  return r;
}

Rule Rule::constraint(std::vector<BodyLiteral> body) {
  Rule r;
  r.kind = Kind::Constraint;
  r.body = std::move(body);
  return r;
}

Rule Rule::choice(std::vector<ChoiceElement> elements, int lower, int upper, std::vector<BodyLiteral> body) {
  Rule r;
  r.kind = Kind::Choice;
  r.elements = std::move(elements);
  r.lower = lower;
  r.upper = upper;
  r.body = std::move(body);
  return r;
}

std::string Rule::str() const {
  std::string head;
  switch (kind) {
    case Kind::Normal:
      head = this->head.str();
      break;
    case Kind::Constraint:
      break;
    case Kind::Choice: {
      if (lower > 0 || upper >= 0) head += std::to_string(lower) + " ";
      head += "{ ";
      for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i) head += "; ";
        head += elements[i].atom.str();
        for (std::size_t j = 0; j < elements[i].condition.size(); ++j) {
          head += (j ? ", " : " : ") + elements[i].condition[j].str();
        }
      }
      head += " }";
      if (upper >= 0) head += " " + std::to_string(upper);
      break;
    }
  }
  if (body.empty()) return (head.empty() ? ":- " : head) + ".";
  std::string out = head.empty() ? ":- " : head + " :- ";
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out += ", ";
    out += body[i].str();
  }
  return out + ".";
}

std::vector<Rule> AspProgram::all_rules() const {
  std::vector<Rule> out;
  out.reserve(facts.size() + rules.size());
  for (const auto& f : facts) out.push_back(Rule::fact(f));
  out.insert(out.end(), rules.begin(), rules.end());
  return out;
}

std::string emit_text(const AspProgram& program) {
  std::string out;
  for (const auto& f : program.facts) out += f.str() + ".\n";
  for (const auto& r : program.rules) out += r.str() + "\n";
  return out;
}

Term evaluate(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Function: {
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(evaluate(a));
      return Term::function(t.name, std::move(args));
    }
    case Term::Kind::Arith: {
      Term l = evaluate(t.args[0]);
      Term r = evaluate(t.args[1]);
      if (l.kind != Term::Kind::Integer || r.kind != Term::Kind::Integer) {
        throw Error("ArithmeticError", "non-integer operand in " + t.str());
      }
      switch (t.name[0]) {
        case '+': return Term::integer(l.value + r.value);
        case '-': return Term::integer(l.value - r.value);
        case '*': return Term::integer(l.value * r.value);
        case '/':
          if (r.value == 0) throw Error("ArithmeticError", "division by zero in " + t.str());
          return Term::integer(l.value / r.value);
        default: throw Error("ArithmeticError", "unknown operator in " + t.str());
      }
    }
    default:
      return t;
  }
}

bool compare(const Term& lhs, const std::string& op, const Term& rhs) {
  auto c = lhs <=> rhs;
  if (op == "=") return c == 0;
  if (op == "!=") return c != 0;
  if (op == "<") return c < 0;
  if (op == "<=") return c <= 0;
  if (op == ">") return c > 0;
  if (op == ">=") return c >= 0;
  throw Error("SyntaxError", "unknown comparison " + op);
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

namespace {

bool is_comparison(const Token& t) {
  if (t.kind != Token::Kind::Punct) return false;
  return t.text == "=" || t.text == "!=" || t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=";
}

class Reader {
 public:
  explicit Reader(TokenStream ts) : ts_(std::move(ts)) {}

  AspProgram program() {
    AspProgram p;
    while (!ts_.at_end()) {
      Rule r = rule();
      if (r.is_fact() && r.head.is_ground()) {
        p.facts.push_back(std::move(r.head));
      } else {
        p.rules.push_back(std::move(r));
      }
    }
    return p;
  }

 private:
  Rule rule() {
    Rule r;
    if (ts_.accept_punct(":-")) {
      r.kind = Rule::Kind::Constraint;
      r.body = body();
      ts_.expect_punct(".");
      return r;
    }
    if (ts_.peek().kind == Token::Kind::Integer || ts_.peek().punct("{")) {
      r.kind = Rule::Kind::Choice;
      if (ts_.peek().kind == Token::Kind::Integer) r.lower = std::stoi(ts_.next().text);
      ts_.expect_punct("{");
      if (!ts_.peek().punct("}")) {
        do {
          ChoiceElement e{atom(), {}};
          if (ts_.accept_punct(":")) {
            do e.condition.push_back(literal());
            while (ts_.accept_punct(","));
          }
          r.elements.push_back(std::move(e));
        } while (ts_.accept_punct(";"));
      }
      ts_.expect_punct("}");
      if (ts_.peek().kind == Token::Kind::Integer) r.upper = std::stoi(ts_.next().text);
    } else {
      r.head = atom();
    }
    if (ts_.accept_punct(":-")) r.body = body();
    ts_.expect_punct(".");
    return r;
  }

  std::vector<BodyLiteral> body() {
    std::vector<BodyLiteral> out;
    if (ts_.peek().punct(".")) ts_.fail("expected a body literal");
    do out.push_back(literal());
    while (ts_.accept_punct(","));
    return out;
  }

  BodyLiteral literal() {
    if (ts_.peek().ident("not")) {
      ts_.next();
      return BodyLiteral::neg(atom());
    }
    if (ts_.peek().punct("-") && ts_.peek(1).kind == Token::Kind::Identifier) return BodyLiteral::pos(atom());
    // A comparison is a term followed by a comparison operator.
    Term lhs = term();
    if (is_comparison(ts_.peek())) {
      std::string op = ts_.next().text;
      Term rhs = term();
      return BodyLiteral::compare(std::move(lhs), std::move(op), std::move(rhs));
    }
    if (lhs.kind != Term::Kind::Symbol && lhs.kind != Term::Kind::Function) ts_.fail("expected a literal");
    return BodyLiteral::pos(Atom{lhs.name, lhs.args, false});
  }

  Atom atom() {
    bool negated = ts_.accept_punct("-");
    Term t = simple_term();
    if (t.kind != Term::Kind::Symbol && t.kind != Term::Kind::Function) ts_.fail("expected an atom");
    return Atom{t.name, t.args, negated};
  }

  Term term() {
    Term t = simple_term();
    while (ts_.peek().punct("+") || ts_.peek().punct("-") || ts_.peek().punct("*") || ts_.peek().punct("/")) {
      char op = ts_.next().text[0];
      t = Term::arith(op, std::move(t), simple_term());
    }
    return t;
  }

  Term simple_term() {
    const Token& tok = ts_.peek();
    if (tok.kind == Token::Kind::Integer) return Term::integer(std::stoll(ts_.next().text));
    if (tok.punct("-") && ts_.peek(1).kind == Token::Kind::Integer) {
      ts_.next();
      return Term::integer(-std::stoll(ts_.next().text));
    }
    if (tok.kind == Token::Kind::Variable) return Term::variable(ts_.next().text);
    if (tok.punct("(")) {
      ts_.next();
      Term t = term();
      ts_.expect_punct(")");
      return t;
    }
    if (tok.kind != Token::Kind::Identifier) ts_.fail("expected a term");
    std::string name = ts_.next().text;
    if (!ts_.accept_punct("(")) return Term::symbol(std::move(name));
    std::vector<Term> args;
    if (!ts_.peek().punct(")")) {
      do args.push_back(term());
      while (ts_.accept_punct(","));
    }
    ts_.expect_punct(")");
    return Term::function(std::move(name), std::move(args));
  }

  TokenStream ts_;
};

}  // namespace

AspProgram parse_program(std::string_view text, const std::string& file) {
  return Reader(TokenStream(tokenize(text, LexOptions{file, false}))).program();
}

}  // namespace corealm::asp

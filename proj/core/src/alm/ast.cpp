#include "corealm/alm/ast.hpp"

namespace corealm::alm {

bool is_predefined_sort(const std::string& name) {
  return name == kUniverse || name == kActions || name == kBooleans;
}

bool is_fluent(FunctionKind k) {
  return k == FunctionKind::BasicFluent || k == FunctionKind::DefinedFluent;
}

bool is_defined(FunctionKind k) {
  return k == FunctionKind::DefinedFluent || k == FunctionKind::DefinedStatic;
}

std::string to_string(FunctionKind k) {
  switch (k) {
    case FunctionKind::BasicFluent: return "fluent basic";
    case FunctionKind::DefinedFluent: return "fluent defined";
    case FunctionKind::BasicStatic: return "static basic";
    case FunctionKind::DefinedStatic: return "static defined";
  }
  return {};
}

std::string to_string(AxiomKind k) {
  switch (k) {
    case AxiomKind::DynamicCausalLaw: return "dynamic causal law";
    case AxiomKind::StateConstraint: return "state constraint";
    case AxiomKind::Executability: return "executability condition";
    case AxiomKind::Definition: return "definition";
  }
  return {};
}

Literal Literal::boolean(std::string fn, std::vector<Term> args, bool negated) {
  Literal l;
  l.kind = LiteralKind::Boolean;
  l.name = std::move(fn);
  l.args = std::move(args);
  l.negated = negated;
  return l;
}

Literal Literal::equals(std::string fn, std::vector<Term> args, Term value, bool negated) {
  Literal l;
  l.kind = LiteralKind::Value;
  l.name = std::move(fn);
  l.args = std::move(args);
  l.value = std::move(value);
  l.negated = negated;
  return l;
}

Literal Literal::instance(Term t, std::string sort, bool negated) {
  Literal l;
  l.kind = LiteralKind::Instance;
  l.name = std::move(sort);
  l.args = {std::move(t)};
  l.negated = negated;
  return l;
}

Literal Literal::compare(Term lhs, Term rhs, bool negated) {
  Literal l;
  l.kind = LiteralKind::Comparison;
  l.args = {std::move(lhs), std::move(rhs)};
  l.negated = negated;
  return l;
}

namespace {

std::string application(const std::string& fn, const std::vector<Term>& args) {
  return Term::function(fn, args).str(true);
}

}  // namespace

std::string Literal::str() const {
  switch (kind) {
    case LiteralKind::Boolean:
      return (negated ? "-" : "") + application(name, args);
    case LiteralKind::Value:
      return application(name, args) + (negated ? " != " : " = ") + value.str(true);
    case LiteralKind::Instance:
      return std::string(negated ? "-" : "") + "instance(" + args[0].str(true) + ", " + name + ")";
    case LiteralKind::Comparison:
      return args[0].str(true) + (negated ? " != " : " = ") + args[1].str(true);
  }
  return {};
}

void Literal::collect_variables(std::vector<std::string>& out) const {
  for (const auto& a : args) a.collect_variables(out);
  if (kind == LiteralKind::Value) value.collect_variables(out);
}

std::string Axiom::str() const {
  std::string out;
  switch (kind) {
    case AxiomKind::DynamicCausalLaw:
      out = "occurs(" + trigger.str(true) + ") causes " + (head ? head->str() : "false");
      break;
    case AxiomKind::Executability:
      out = "impossible occurs(" + trigger.str(true) + ")";
      break;
    case AxiomKind::StateConstraint:
    case AxiomKind::Definition:
      out = head ? head->str() : "false";
      break;
  }
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += i == 0 ? " if " : ", ";
    out += body[i].str();
  }
  return out + ".";
}

std::vector<std::string> Axiom::variables() const {
  std::vector<std::string> vars;
  trigger.collect_variables(vars);
  if (head) head->collect_variables(vars);
  for (const auto& l : body) l.collect_variables(vars);
  return vars;
}

bool InstanceDecl::is_schema() const {
  for (const auto& n : names) {
    if (!n.is_ground()) return true;
  }
  return false;
}

}  // namespace corealm::alm

#include "corealm/alm/printer.hpp"

namespace corealm::alm {

namespace {

std::string pad(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

std::string print_signature(const std::vector<std::string>& args, const std::string& range) {
  if (args.empty()) return range;
  return join(args, " * ") + " -> " + range;
}

std::string print(const FunctionDecl& f) {
  return to_string(f.kind) + " " + f.name + " : " + print_signature(f.arg_sorts, f.range);
}

std::string print(const AttributeDecl& a) {
  return a.name + " : " + print_signature(a.arg_sorts, a.range);
}

std::string print(const Assignment& a) {
  return Term::function(a.name, a.args).str(true) + " = " + a.value.str(true);
}

std::string print(const ModuleDecl& m, int indent) {
  std::string out = pad(indent) + (m.optional ? "optional module " : "module ") + m.name + "\n";
  if (!m.depends_on.empty()) out += pad(indent + 1) + "depends on " + join(m.depends_on) + "\n";
  out += pad(indent + 1) + "sort declarations\n";
  for (const auto& s : m.sorts) {
    out += pad(indent + 2) + join(s.names) + " :: " + join(s.parents) + "\n";
    if (!s.attributes.empty()) {
      out += pad(indent + 3) + "attributes\n";
      for (const auto& a : s.attributes) out += pad(indent + 4) + print(a) + "\n";
    }
  }
  out += pad(indent + 1) + "function declarations\n";
  for (const auto& f : m.functions) out += pad(indent + 2) + print(f) + "\n";
  out += pad(indent + 1) + "axioms\n";
  for (const auto& a : m.axioms) out += pad(indent + 2) + a.str() + "\n";
  return out;
}

std::string print(const Structure& s, int indent) {
  std::string out = pad(indent) + "structure " + s.name + "\n";
  out += pad(indent + 1) + "instances\n";
  for (const auto& inst : s.instances) {
    std::vector<std::string> names;
    for (const auto& n : inst.names) names.push_back(n.str(true));
    out += pad(indent + 2) + join(names) + " in " + inst.sort + "\n";
    for (const auto& a : inst.assignments) out += pad(indent + 3) + print(a) + "\n";
  }
  out += pad(indent + 1) + "values of statics\n";
  for (const auto& a : s.statics) out += pad(indent + 2) + print(a) + "\n";
  return out;
}

std::string print(const SystemDescription& sd) {
  std::string out = "system description " + sd.name + "\n";
  out += pad(1) + "theory " + sd.theory_name + "\n";
  for (const auto& imp : sd.imports) {
    out += pad(2) + "import from " + imp.library + " module " + imp.module + "\n";
  }
  for (const auto& m : sd.modules) out += print(m, 2);
  out += print(sd.structure, 1);
  return out;
}

}  // namespace corealm::alm

#pragma once

#include <string>

#include "corealm/alm/ast.hpp"

namespace corealm::alm {

// Canonical printing: one statement per line, two spaces of indentation per
// nesting level, axioms terminated by a period, every section header emitted
// even when the section is empty.

std::string print(const ModuleDecl& module, int indent = 0);
std::string print(const SystemDescription& sd);
std::string print(const Structure& structure, int indent = 0);

std::string print_signature(const std::vector<std::string>& args, const std::string& range);
std::string print(const FunctionDecl& f);
std::string print(const AttributeDecl& a);
std::string print(const Assignment& a);

}  // namespace corealm::alm

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "corealm/alm/ast.hpp"

namespace corealm::alm {

/// Reads a `system description ... theory ... structure ...` text.
/// Throws Error("SyntaxError") with the offending span; the first error aborts.
SystemDescription parse_system_description(std::string_view text, const std::string& file = "");

/// Reads exactly one `module` block.
ModuleDecl parse_module(std::string_view text, const std::string& file = "");

/// Reads a sequence of module blocks (possibly empty).
std::vector<ModuleDecl> parse_modules(std::string_view text, const std::string& file = "");

/// Reads one axiom statement, e.g. `false if instance(X, c), -defined_a(X).`
Axiom parse_axiom(std::string_view text, const std::string& file = "");

/// Reads a single ground or non-ground term such as `go(john, a)`.
Term parse_term(std::string_view text);

/// True when the text starts with `system description`.
bool looks_like_system_description(std::string_view text);

/// Marks `<literal> if ...` axioms as definitions when their head names a
/// defined function in `functions`, and as state constraints otherwise.
void classify_axioms(std::vector<Axiom>& axioms, const std::vector<FunctionDecl>& functions);

}  // namespace corealm::alm

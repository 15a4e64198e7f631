#pragma once

// Text format for rules and facts:
//
//   parent(ann,bob).
//   grandparent(X,Z) :- parent(X,Y), parent(Y,Z).
//
// Predicates and constants match [a-z][A-Za-z0-9_]*, variables [A-Z][A-Za-z0-9_]*,
// and '%' starts a comment running to the end of the line.

#include <string>
#include <string_view>

#include "rulebench/core.hpp"

namespace rulebench {

/// Parses ground facts, interning new symbols into sig. Throws ParseError
/// (with line and column) on syntax errors, variables, or rule statements.
FactSet parse_facts(std::string_view text, Signature& sig);

/// Parses rules. Throws ParseError on syntax errors, bare facts, and rules
/// whose head variables do not occur in the body.
Program parse_rules(std::string_view text, Signature& sig);

/// Canonical text: one statement per line, sorted lexicographically.
std::string serialize_facts(const FactSet& facts, const Signature& sig);
std::string serialize_rules(const Program& program, const Signature& sig);

} // namespace rulebench

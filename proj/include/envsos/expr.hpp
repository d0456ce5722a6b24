#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "envsos/pbw.hpp"

namespace envsos {

/// Expression text plus named aliases ("H" -> "-i*x1"). Alias bodies may
/// refer to other aliases; cycles are rejected.
struct ExprSource {
  std::string text;
  std::map<std::string, std::string> aliases;
};

/// Grammar:
///   expr  := term (('+' | '-') term)*
///   term  := unary ('*' unary)*
///   unary := '-' unary | power
///   power := atom ('^' integer)?
///   atom  := integer ('/' integer)? | 'i' | identifier | '(' expr ')'
/// Multiplication is noncommutative and left-associative; juxtaposition is
/// an error. Throws PositionedSyntaxError, UnknownIdentifier, CyclicAlias,
/// NegativeExponent.
Element parse(const ExprSource& src, const AlgebraPtr& alg);
inline Element parse(const std::string& text, const AlgebraPtr& alg) { return parse(ExprSource{text, {}}, alg); }

/// Parses "NAME=EXPR" strings into an alias map (CLI --alias values).
std::map<std::string, std::string> parse_alias_list(const std::vector<std::string>& defs);

}  // namespace envsos

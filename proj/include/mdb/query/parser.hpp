#pragma once

#include <string>
#include <string_view>

#include "mdb/query/ast.hpp"

namespace mdb::query {

// Text to AST. Throws SyntaxError (with the absolute character offset) on
// malformed input and UnknownClauseError when trailing text starts with a
// word that is not a clause keyword.
QueryAst parse(std::string_view text);

// Canonical single-line rendering. Parsing the result yields an equal AST:
// parse(print_query(parse(text))) == parse(text).
std::string print_query(const QueryAst& ast);

// Renders one rpq subtree with minimal parentheses (used by print_query and
// by plan explanations).
std::string print_rpq(const RpqNode& node);

}  // namespace mdb::query

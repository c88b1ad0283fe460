#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <noether/expr.hpp>

namespace noether
{

// Declares what identifiers may appear in an expression.
struct ParseContext {
    int dimension = 1;
    std::vector<std::string> params;
};

// Grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' signed-integer)?
//   atom   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | log | sqrt
//   ident  := t | qI | qI_t | qI_tt | pI | pI_t | pI_tt | p | parameter
//
// The pI_t / pI_tt forms are the formal momentum jet coordinates; they are
// accepted so that printed Hamilton residuals parse back.
//
// Throws ParseError (with a character offset) on syntax errors, unknown
// identifiers and coordinate indices outside 1..dimension.
Expr parse(std::string_view text, const ParseContext &ctx);

// Resolves a single identifier, e.g. "q2_t"; throws ParseError on failure.
Symbol parse_symbol(std::string_view ident, const ParseContext &ctx);

// True if `name` is reserved by the expression alphabet and cannot be used as
// a parameter name.
bool is_reserved_identifier(std::string_view name);

} // namespace noether

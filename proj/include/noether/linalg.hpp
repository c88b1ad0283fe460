#pragma once

#include <optional>
#include <vector>

#include <noether/expr.hpp>
#include <noether/zero_test.hpp>

namespace noether
{

// Dense row-major matrix of symbolic entries.
using ExprMatrix = std::vector<std::vector<Expr>>;
using ExprVector = std::vector<Expr>;

// Determinant by cofactor expansion (exact, no pivoting decisions).
Expr determinant(const ExprMatrix &a);

// Solves A X = B by Gaussian elimination. Pivots must test ProvenNonzero;
// returns nullopt if some column has no such pivot (singular or undecidable).
std::optional<ExprMatrix> solve(ExprMatrix a, ExprMatrix b);

struct NullspaceResult {
    std::vector<ExprVector> basis;
    // Weakest verdict among entries that were treated as zero while choosing
    // pivots.
    ZeroVerdict confidence = ZeroVerdict::ProvenZero;
};

// Basis of { x : A x = 0 } from the reduced row echelon form; one vector per
// free column, with that column set to 1. Columns are eliminated left to right.
NullspaceResult nullspace(ExprMatrix a, std::size_t columns);

} // namespace noether

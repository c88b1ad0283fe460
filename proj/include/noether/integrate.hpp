#pragma once

#include <optional>

#include <noether/expr.hpp>

namespace noether
{

// Antiderivative in `x` of sums of x^m * exp(a*x + c) terms (m >= 0, a and c
// free of x), by the closed form
//   ∫ x^m e^{ax} dx = e^{ax} Σ_j (-1)^j m!/(m-j)! x^{m-j} / a^{j+1}.
// Returns nullopt for anything outside that class.
std::optional<Expr> antiderivative(const Expr &e, const Symbol &x);

// Definite integral over [lower, upper] via antiderivative().
std::optional<Expr> definite_integral(const Expr &e, const Symbol &x, const Expr &lower, const Expr &upper);

} // namespace noether

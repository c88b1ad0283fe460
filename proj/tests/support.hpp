#pragma once

// Shared helpers for the test suites: random expression generators and
// numeric oracles that only rely on eval().

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <noether/expr.hpp>
#include <noether/parser.hpp>

namespace noether::testing
{

inline Expr E(const char *text, int dim = 1, std::vector<std::string> params = {"k", "v", "m", "w", "c"})
{
    return parse(text, ParseContext{dim, std::move(params)});
}

inline Expr q(int i)
{
    return Expr(Symbol::coord(i));
}
inline Expr qt(int i)
{
    return Expr(Symbol::velocity(i));
}
inline Expr qtt(int i)
{
    return Expr(Symbol::acceleration(i));
}
inline Expr pm(int i)
{
    return Expr(Symbol::momentum(i));
}
inline Expr T()
{
    return Expr(Symbol::time());
}
inline Expr param(const char *n)
{
    return Expr(Symbol::parameter(n));
}

// Random assignment for every free symbol of the given expressions.
inline Assignment random_point(std::mt19937_64 &rng, const std::vector<Expr> &exprs, double lo = -2.0, double hi = 2.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    Assignment a;
    for (const auto &e : exprs) {
        for (const auto &s : e.free_symbols()) {
            if (!a.contains(s)) {
                a[s] = d(rng);
            }
        }
    }
    return a;
}

// Random polynomial with small rational coefficients in the given symbols, of
// total degree at most `degree`.
inline Expr random_polynomial(std::mt19937_64 &rng, const std::vector<Symbol> &vars, int degree, int max_terms = 6)
{
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> deg(0, degree);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::vector<Expr> terms;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        Expr term = rational(coeff(rng), den(rng));
        const int d = deg(rng);
        for (int j = 0; j < d; ++j) {
            term = term * Expr(vars[pick(rng)]);
        }
        terms.push_back(term);
    }
    return add(terms);
}

// Random expression tree mixing polynomial structure with the supported
// functions; arguments of log/sqrt are kept positive.
inline Expr random_expression(std::mt19937_64 &rng, const std::vector<Symbol> &vars, int depth)
{
    std::uniform_int_distribution<int> op(0, depth <= 0 ? 1 : 9);
    std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
    std::uniform_int_distribution<int> small(-3, 3);
    switch (op(rng)) {
        case 0:
            return Expr(vars[pick(rng)]);
        case 1:
            return rational(small(rng), 2) + Expr(vars[pick(rng)]);
        case 2:
        case 3:
            return random_expression(rng, vars, depth - 1) + random_expression(rng, vars, depth - 1);
        case 4:
        case 5:
            return random_expression(rng, vars, depth - 1) * random_expression(rng, vars, depth - 1);
        case 6:
            return pow(random_expression(rng, vars, depth - 1), 2);
        case 7:
            return sin(random_expression(rng, vars, depth - 1));
        case 8:
            return exp(rational(1, 4) * random_expression(rng, vars, depth - 1));
        default: {
            const Expr x = random_expression(rng, vars, depth - 1);
            return std::uniform_int_distribution<int>(0, 1)(rng) ? log(1 + pow(x, 2)) : sqrt(2 + cos(x));
        }
    }
}

// Centered finite difference of `e` in `s` at `a`.
inline double central_difference(const Expr &e, const Symbol &s, Assignment a, double h)
{
    const double x = a[s];
    a[s] = x + h;
    const double fp = eval(e, a);
    a[s] = x - h;
    const double fm = eval(e, a);
    return (fp - fm) / (2 * h);
}

} // namespace noether::testing

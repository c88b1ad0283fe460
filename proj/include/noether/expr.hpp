#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <noether/number.hpp>
#include <noether/symbol.hpp>

namespace noether
{

enum class NodeKind : unsigned char { Constant, Symbol, Add, Mul, Func };
enum class FuncKind : unsigned char { Sin, Cos, Exp, Log, Sqrt };

const char *func_name(FuncKind f);

class Expr;

namespace detail
{
struct Node;
} // namespace detail

// Immutable, always-normalized symbolic expression.
//
// Normal form:
//  - Add: constant + sum of coeff * term, with each term a non-constant,
//    non-Add expression whose own coefficient is 1; at least two summands.
//  - Mul: coefficient * prod base^exponent, bases being Symbols, Funcs, or
//    Adds raised to a negative power (positive powers of sums are expanded).
//    At most one exp() factor, with exponent 1. sqrt() factors carry
//    exponent +-1.
//  - Terms and factors are sorted by the structural total order and merged.
//
// Two expressions that normalize to the same tree compare equal with `==`.
class Expr
{
public:
    Expr();
    Expr(int v);
    Expr(Number v);
    Expr(Symbol s);

    NodeKind kind() const;
    bool is_constant() const
    {
        return kind() == NodeKind::Constant;
    }
    bool is_zero() const;
    bool is_one() const;

    // Constant value; the constant term of an Add; the coefficient of a Mul.
    const Number &value() const;
    const Symbol &symbol() const;
    FuncKind func() const;
    const Expr &arg() const;
    std::span<const std::pair<Expr, Number>> terms() const;
    std::span<const std::pair<Expr, int>> factors() const;

    // Sorted, duplicate-free.
    const std::vector<Symbol> &free_symbols() const;
    bool has(const Symbol &s) const;
    template <typename Pred>
    bool has_any(Pred pred) const
    {
        for (const auto &s : free_symbols()) {
            if (pred(s)) {
                return true;
            }
        }
        return false;
    }

    std::size_t hash() const;
    std::string to_string() const;

    friend bool operator==(const Expr &a, const Expr &b);
    // Structural total order (hash first, then deep comparison).
    friend std::strong_ordering compare(const Expr &a, const Expr &b);

    const detail::Node *node() const noexcept
    {
        return node_.get();
    }
    explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<const detail::Node> node_;
};

struct ExprLess {
    bool operator()(const Expr &a, const Expr &b) const
    {
        return compare(a, b) < 0;
    }
};

namespace detail
{
struct Node {
    NodeKind kind = NodeKind::Constant;
    std::size_t hash = 0;
    Number value;
    Symbol symbol;
    FuncKind func = FuncKind::Exp;
    std::vector<Expr> args;
    std::vector<std::pair<Expr, Number>> terms;
    std::vector<std::pair<Expr, int>> factors;
    std::vector<Symbol> free;
};
} // namespace detail

Expr operator+(const Expr &a, const Expr &b);
Expr operator-(const Expr &a, const Expr &b);
Expr operator-(const Expr &a);
Expr operator*(const Expr &a, const Expr &b);
// Throws DomainError when dividing by an exact zero.
Expr operator/(const Expr &a, const Expr &b);
inline Expr &operator+=(Expr &a, const Expr &b)
{
    return a = a + b;
}
inline Expr &operator-=(Expr &a, const Expr &b)
{
    return a = a - b;
}
inline Expr &operator*=(Expr &a, const Expr &b)
{
    return a = a * b;
}

Expr add(std::span<const Expr> summands);
Expr mul(std::span<const Expr> factors);
Expr pow(const Expr &base, int exponent);
Expr func(FuncKind f, const Expr &arg);
Expr sin(const Expr &x);
Expr cos(const Expr &x);
Expr exp(const Expr &x);
Expr log(const Expr &x);
Expr sqrt(const Expr &x);

inline Expr sym(Symbol s)
{
    return Expr(std::move(s));
}
inline Expr rational(long long num, long long den = 1)
{
    return Expr(Number::from_fraction(num, den));
}

// Exact partial derivative; every other symbol is independent.
Expr diff(const Expr &e, const Symbol &s);

using Substitution = std::map<Symbol, Expr>;
// Simultaneous substitution followed by normalization.
Expr substitute(const Expr &e, const Substitution &map);

using Assignment = std::unordered_map<Symbol, double, SymbolHash>;
// Throws EvalError on a missing symbol, DomainError outside the real domain.
double eval(const Expr &e, const Assignment &a);

// Rebuilds `e` from scratch through the smart constructors. Expressions are
// always normalized, so this is the identity up to structural equality; it is
// exposed for idempotence checks.
Expr normalize(const Expr &e);

// Polynomial degree of `e` in the given symbols if `e` is a polynomial in them
// (other symbols are treated as coefficients); -1 otherwise.
int polynomial_degree(const Expr &e, std::span<const Symbol> vars);

// Splits `e` (as a sum) into `sum_k coeff_k * key_k`, where key_k collects all
// factors depending on any symbol for which `is_variable` holds and coeff_k the
// remaining factors. Keys are unique; order follows the structural order.
template <typename Pred>
std::vector<std::pair<Expr, Expr>> collect_by(const Expr &e, Pred is_variable);

// Implementation detail of collect_by.
std::vector<std::pair<Expr, Expr>> collect_by_impl(const Expr &e, bool (*pred)(const Symbol &, const void *),
                                                   const void *ctx);

template <typename Pred>
std::vector<std::pair<Expr, Expr>> collect_by(const Expr &e, Pred is_variable)
{
    return collect_by_impl(
        e, [](const Symbol &s, const void *ctx) { return (*static_cast<const Pred *>(ctx))(s); }, &is_variable);
}

} // namespace noether

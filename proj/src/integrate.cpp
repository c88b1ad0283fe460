#include <noether/integrate.hpp>

#include <vector>

namespace noether
{

namespace
{

// Splits a key (product of x-dependent factors) into x^m and an optional
// exp(A) with A linear in x.
bool split_key(const Expr &key, const Symbol &x, int &m, std::optional<Expr> &exp_arg)
{
    m = 0;
    auto visit = [&](const Expr &b, int k) {
        if (b.kind() == NodeKind::Symbol && b.symbol() == x && k > 0) {
            m += k;
            return true;
        }
        if (b.kind() == NodeKind::Func && b.func() == FuncKind::Exp && k == 1 && !exp_arg) {
            const Symbol vars[] = {x};
            if (polynomial_degree(b.arg(), vars) == 1) {
                exp_arg = b.arg();
                return true;
            }
        }
        return false;
    };
    if (key.is_one()) {
        return true;
    }
    if (key.kind() == NodeKind::Mul) {
        if (!key.value().is_one()) {
            return false;
        }
        for (const auto &[b, k] : key.factors()) {
            if (!visit(b, k)) {
                return false;
            }
        }
        return true;
    }
    return visit(key, 1);
}

} // namespace

std::optional<Expr> antiderivative(const Expr &e, const Symbol &x)
{
    const auto parts = collect_by(e, [&](const Symbol &s) { return s == x; });
    const Expr X(x);
    std::vector<Expr> out;
    for (const auto &[key, coeff] : parts) {
        int m = 0;
        std::optional<Expr> arg;
        if (!split_key(key, x, m, arg)) {
            return std::nullopt;
        }
        if (!arg) {
            out.push_back(coeff * pow(X, m + 1) / Expr(m + 1));
            continue;
        }
        const Expr a = diff(*arg, x);
        std::vector<Expr> series;
        Number falling(1);
        for (int j = 0; j <= m; ++j) {
            const Number sign = (j % 2 == 0) ? Number(1) : Number(-1);
            series.push_back(Expr(sign * falling) * pow(X, m - j) * pow(a, -(j + 1)));
            falling = falling * Number(m - j);
        }
        out.push_back(coeff * exp(*arg) * add(series));
    }
    return add(out);
}

std::optional<Expr> definite_integral(const Expr &e, const Symbol &x, const Expr &lower, const Expr &upper)
{
    auto F = antiderivative(e, x);
    if (!F) {
        return std::nullopt;
    }
    return substitute(*F, {{x, upper}}) - substitute(*F, {{x, lower}});
}

} // namespace noether

#include <noether/expr.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <noether/error.hpp>

namespace noether
{

using detail::Node;

namespace
{

constexpr std::size_t max_expansion_terms = 200000;

std::size_t hash_mix(std::size_t h, std::size_t v)
{
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

void merge_free(std::vector<Symbol> &into, const std::vector<Symbol> &from)
{
    if (from.empty()) {
        return;
    }
    std::vector<Symbol> out;
    out.reserve(into.size() + from.size());
    std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
    into = std::move(out);
}

Expr make_constant(Number v)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->hash = hash_mix(1, v.hash());
    n->value = std::move(v);
    return Expr(std::move(n));
}

Expr make_symbol(Symbol s)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Symbol;
    n->hash = hash_mix(2, s.hash());
    n->free.push_back(s);
    n->symbol = std::move(s);
    return Expr(std::move(n));
}

Expr make_func(FuncKind f, Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Func;
    n->func = f;
    n->hash = hash_mix(hash_mix(3, static_cast<std::size_t>(f)), arg.hash());
    n->free = arg.free_symbols();
    n->args.push_back(std::move(arg));
    return Expr(std::move(n));
}

// `terms` must be sorted, merged and free of zero coefficients.
Expr make_add(Number constant, std::vector<std::pair<Expr, Number>> terms)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Add;
    std::size_t h = hash_mix(4, constant.hash());
    for (const auto &[t, c] : terms) {
        h = hash_mix(hash_mix(h, t.hash()), c.hash());
        merge_free(n->free, t.free_symbols());
    }
    n->hash = h;
    n->value = std::move(constant);
    n->terms = std::move(terms);
    return Expr(std::move(n));
}

// `factors` must be sorted, merged and free of zero exponents.
Expr make_mul(Number coefficient, std::vector<std::pair<Expr, int>> factors)
{
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Mul;
    std::size_t h = hash_mix(5, coefficient.hash());
    for (const auto &[b, k] : factors) {
        h = hash_mix(hash_mix(h, b.hash()), std::hash<int>{}(k));
        merge_free(n->free, b.free_symbols());
    }
    n->hash = h;
    n->value = std::move(coefficient);
    n->factors = std::move(factors);
    return Expr(std::move(n));
}

// Splits a non-constant, non-Add expression into (coefficient, unit term).
std::pair<Number, Expr> split_coefficient(const Expr &e)
{
    if (e.kind() != NodeKind::Mul || e.value().is_one()) {
        return {Number(1), e};
    }
    const auto f = e.factors();
    if (f.size() == 1 && f[0].second == 1) {
        return {e.value(), f[0].first};
    }
    return {e.value(), make_mul(Number(1), {f.begin(), f.end()})};
}

Expr scale(const Expr &unit, const Number &c)
{
    if (c.is_zero()) {
        return Expr(0);
    }
    if (c.is_one()) {
        return unit;
    }
    if (unit.kind() == NodeKind::Mul) {
        const auto f = unit.factors();
        return make_mul(c * unit.value(), {f.begin(), f.end()});
    }
    return make_mul(c, {{unit, 1}});
}

Expr mul_powers(std::vector<std::pair<Expr, int>> items);

Expr expand_product(const Expr &rest, const std::vector<std::pair<Expr, int>> &sums)
{
    std::vector<Expr> partial{rest};
    for (const auto &[s, k] : sums) {
        for (int rep = 0; rep < k; ++rep) {
            std::vector<Expr> next;
            next.reserve(partial.size() * (s.terms().size() + 1));
            for (const auto &x : partial) {
                if (!s.value().is_zero()) {
                    next.push_back(mul_powers({{x, 1}, {Expr(s.value()), 1}}));
                }
                for (const auto &[t, c] : s.terms()) {
                    next.push_back(mul_powers({{x, 1}, {t, 1}, {Expr(c), 1}}));
                }
            }
            if (next.size() > max_expansion_terms) {
                throw MathError("expression expansion exceeds the size guard");
            }
            partial.clear();
            const Expr sum = add(next);
            if (sum.kind() == NodeKind::Add) {
                if (!sum.value().is_zero()) {
                    partial.push_back(Expr(sum.value()));
                }
                for (const auto &[t, c] : sum.terms()) {
                    partial.push_back(scale(t, c));
                }
            } else {
                partial.push_back(sum);
            }
        }
    }
    return add(partial);
}

Expr mul_powers(std::vector<std::pair<Expr, int>> items)
{
    for (;;) {
        Number coef(1);
        std::map<Expr, int, ExprLess> bases;
        for (const auto &[e, k] : items) {
            if (k == 0) {
                continue;
            }
            switch (e.kind()) {
                case NodeKind::Constant:
                    coef = coef * e.value().pow(k);
                    break;
                case NodeKind::Mul:
                    coef = coef * e.value().pow(k);
                    for (const auto &[b, kb] : e.factors()) {
                        bases[b] += kb * k;
                    }
                    break;
                default:
                    bases[e] += k;
                    break;
            }
        }
        if (coef.is_zero()) {
            return Expr(0);
        }

        std::vector<std::pair<Expr, int>> extras;
        std::vector<std::pair<Expr, Number>> exp_args;
        for (auto it = bases.begin(); it != bases.end();) {
            const Expr &b = it->first;
            const int k = it->second;
            if (k == 0) {
                it = bases.erase(it);
                continue;
            }
            if (b.kind() == NodeKind::Func && b.func() == FuncKind::Exp) {
                exp_args.emplace_back(b.arg(), Number(k));
                it = bases.erase(it);
                continue;
            }
            if (b.kind() == NodeKind::Func && b.func() == FuncKind::Sqrt && (k >= 2 || k <= -2)) {
                const int q = k / 2;
                extras.emplace_back(b.arg(), q);
                it->second = k - 2 * q;
                if (it->second == 0) {
                    it = bases.erase(it);
                    continue;
                }
            }
            if (b.kind() == NodeKind::Add && k < 0) {
                const Number lead = b.terms().front().second;
                if (!lead.is_one()) {
                    coef = coef * lead.pow(k);
                    std::vector<std::pair<Expr, Number>> t;
                    t.reserve(b.terms().size());
                    for (const auto &[term, c] : b.terms()) {
                        t.emplace_back(term, c / lead);
                    }
                    extras.emplace_back(make_add(b.value() / lead, std::move(t)), k);
                    it = bases.erase(it);
                    continue;
                }
            }
            ++it;
        }
        if (!exp_args.empty()) {
            std::vector<Expr> scaled;
            scaled.reserve(exp_args.size());
            for (const auto &[a, k] : exp_args) {
                scaled.push_back(mul_powers({{a, 1}, {Expr(k), 1}}));
            }
            const Expr total = add(scaled);
            if (!total.is_zero()) {
                const Expr ex = exp(total);
                if (ex.kind() == NodeKind::Func && ex.func() == FuncKind::Exp) {
                    bases[ex] = 1;
                } else {
                    extras.emplace_back(ex, 1);
                }
            }
        }
        if (!extras.empty()) {
            items.clear();
            items.emplace_back(Expr(coef), 1);
            for (const auto &[b, k] : bases) {
                items.emplace_back(b, k);
            }
            for (auto &x : extras) {
                items.push_back(std::move(x));
            }
            continue;
        }

        std::vector<std::pair<Expr, int>> kept;
        std::vector<std::pair<Expr, int>> sums;
        for (const auto &[b, k] : bases) {
            if (b.kind() == NodeKind::Add && k > 0) {
                sums.emplace_back(b, k);
            } else {
                kept.emplace_back(b, k);
            }
        }
        Expr rest;
        if (kept.empty()) {
            rest = Expr(coef);
        } else if (coef.is_one() && kept.size() == 1 && kept[0].second == 1) {
            rest = kept[0].first;
        } else {
            rest = make_mul(coef, std::move(kept));
        }
        if (sums.empty()) {
            return rest;
        }
        return expand_product(rest, sums);
    }
}

std::strong_ordering deep_compare(const Expr &a, const Expr &b)
{
    if (a.kind() != b.kind()) {
        return a.kind() <=> b.kind();
    }
    switch (a.kind()) {
        case NodeKind::Constant:
            return compare(a.value(), b.value());
        case NodeKind::Symbol:
            return a.symbol() <=> b.symbol();
        case NodeKind::Func:
            if (a.func() != b.func()) {
                return a.func() <=> b.func();
            }
            return compare(a.arg(), b.arg());
        case NodeKind::Add: {
            if (auto c = compare(a.value(), b.value()); c != 0) {
                return c;
            }
            const auto ta = a.terms();
            const auto tb = b.terms();
            for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
                if (auto c = compare(ta[i].first, tb[i].first); c != 0) {
                    return c;
                }
                if (auto c = compare(ta[i].second, tb[i].second); c != 0) {
                    return c;
                }
            }
            return ta.size() <=> tb.size();
        }
        case NodeKind::Mul: {
            if (auto c = compare(a.value(), b.value()); c != 0) {
                return c;
            }
            const auto fa = a.factors();
            const auto fb = b.factors();
            for (std::size_t i = 0; i < std::min(fa.size(), fb.size()); ++i) {
                if (auto c = compare(fa[i].first, fb[i].first); c != 0) {
                    return c;
                }
                if (auto c = fa[i].second <=> fb[i].second; c != 0) {
                    return c;
                }
            }
            return fa.size() <=> fb.size();
        }
    }
    return std::strong_ordering::equal;
}

} // namespace

const char *func_name(FuncKind f)
{
    switch (f) {
        case FuncKind::Sin:
            return "sin";
        case FuncKind::Cos:
            return "cos";
        case FuncKind::Exp:
            return "exp";
        case FuncKind::Log:
            return "log";
        case FuncKind::Sqrt:
            return "sqrt";
    }
    return "?";
}

Expr::Expr() : Expr(make_constant(Number(0))) {}
Expr::Expr(int v) : Expr(make_constant(Number(v))) {}
Expr::Expr(Number v) : Expr(make_constant(std::move(v))) {}
Expr::Expr(Symbol s) : Expr(make_symbol(std::move(s))) {}

NodeKind Expr::kind() const
{
    return node_->kind;
}

bool Expr::is_zero() const
{
    return kind() == NodeKind::Constant && node_->value.is_zero();
}

bool Expr::is_one() const
{
    return kind() == NodeKind::Constant && node_->value.is_one();
}

const Number &Expr::value() const
{
    return node_->value;
}

const Symbol &Expr::symbol() const
{
    return node_->symbol;
}

FuncKind Expr::func() const
{
    return node_->func;
}

const Expr &Expr::arg() const
{
    return node_->args.front();
}

std::span<const std::pair<Expr, Number>> Expr::terms() const
{
    return node_->terms;
}

std::span<const std::pair<Expr, int>> Expr::factors() const
{
    return node_->factors;
}

const std::vector<Symbol> &Expr::free_symbols() const
{
    return node_->free;
}

bool Expr::has(const Symbol &s) const
{
    return std::binary_search(node_->free.begin(), node_->free.end(), s);
}

std::size_t Expr::hash() const
{
    return node_->hash;
}

bool operator==(const Expr &a, const Expr &b)
{
    return compare(a, b) == std::strong_ordering::equal;
}

std::strong_ordering compare(const Expr &a, const Expr &b)
{
    if (a.node() == b.node()) {
        return std::strong_ordering::equal;
    }
    if (a.hash() != b.hash()) {
        return a.hash() <=> b.hash();
    }
    return deep_compare(a, b);
}

Expr add(std::span<const Expr> summands)
{
    Number constant(0);
    std::map<Expr, Number, ExprLess> acc;
    auto push = [&](const Expr &term, const Number &c) {
        auto [coef, unit] = split_coefficient(term);
        auto [it, inserted] = acc.try_emplace(unit, c * coef);
        if (!inserted) {
            it->second = it->second + c * coef;
        }
    };
    for (const auto &s : summands) {
        switch (s.kind()) {
            case NodeKind::Constant:
                constant = constant + s.value();
                break;
            case NodeKind::Add:
                constant = constant + s.value();
                for (const auto &[t, c] : s.terms()) {
                    push(t, c);
                }
                break;
            default:
                push(s, Number(1));
                break;
        }
    }
    std::vector<std::pair<Expr, Number>> terms;
    terms.reserve(acc.size());
    for (auto &[t, c] : acc) {
        if (!c.is_zero()) {
            terms.emplace_back(t, c);
        }
    }
    if (terms.empty()) {
        return Expr(constant);
    }
    if (terms.size() == 1 && constant.is_zero()) {
        return scale(terms[0].first, terms[0].second);
    }
    return make_add(std::move(constant), std::move(terms));
}

Expr mul(std::span<const Expr> factors)
{
    std::vector<std::pair<Expr, int>> items;
    items.reserve(factors.size());
    for (const auto &f : factors) {
        items.emplace_back(f, 1);
    }
    return mul_powers(std::move(items));
}

Expr pow(const Expr &base, int exponent)
{
    if (exponent < 0 && base.is_zero()) {
        throw DomainError("division by zero");
    }
    return mul_powers({{base, exponent}});
}

Expr operator+(const Expr &a, const Expr &b)
{
    const Expr v[] = {a, b};
    return add(v);
}

Expr operator-(const Expr &a, const Expr &b)
{
    return a + (-b);
}

Expr operator-(const Expr &a)
{
    return mul_powers({{a, 1}, {Expr(-1), 1}});
}

Expr operator*(const Expr &a, const Expr &b)
{
    return mul_powers({{a, 1}, {b, 1}});
}

Expr operator/(const Expr &a, const Expr &b)
{
    if (b.is_zero()) {
        throw DomainError("division by zero");
    }
    return mul_powers({{a, 1}, {b, -1}});
}

Expr func(FuncKind f, const Expr &arg)
{
    if (arg.is_constant()) {
        const Number &v = arg.value();
        if (v.is_exact()) {
            switch (f) {
                case FuncKind::Sin:
                    if (v.is_zero()) {
                        return Expr(0);
                    }
                    break;
                case FuncKind::Cos:
                case FuncKind::Exp:
                    if (v.is_zero()) {
                        return Expr(1);
                    }
                    break;
                case FuncKind::Log:
                    if (v.is_one()) {
                        return Expr(0);
                    }
                    break;
                case FuncKind::Sqrt: {
                    Number root;
                    if (v.exact_sqrt(root)) {
                        return Expr(root);
                    }
                    break;
                }
            }
        } else {
            const double x = v.to_double();
            double r = std::nan("");
            switch (f) {
                case FuncKind::Sin:
                    r = std::sin(x);
                    break;
                case FuncKind::Cos:
                    r = std::cos(x);
                    break;
                case FuncKind::Exp:
                    r = std::exp(x);
                    break;
                case FuncKind::Log:
                    r = x > 0 ? std::log(x) : std::nan("");
                    break;
                case FuncKind::Sqrt:
                    r = x >= 0 ? std::sqrt(x) : std::nan("");
                    break;
            }
            if (std::isfinite(r)) {
                return Expr(Number(r));
            }
        }
    }
    if (f == FuncKind::Exp && arg.kind() == NodeKind::Func && arg.func() == FuncKind::Log) {
        return arg.arg();
    }
    if (f == FuncKind::Log && arg.kind() == NodeKind::Func && arg.func() == FuncKind::Exp) {
        return arg.arg();
    }
    return make_func(f, arg);
}

Expr sin(const Expr &x)
{
    return func(FuncKind::Sin, x);
}
Expr cos(const Expr &x)
{
    return func(FuncKind::Cos, x);
}
Expr exp(const Expr &x)
{
    return func(FuncKind::Exp, x);
}
Expr log(const Expr &x)
{
    return func(FuncKind::Log, x);
}
Expr sqrt(const Expr &x)
{
    return func(FuncKind::Sqrt, x);
}

Expr diff(const Expr &e, const Symbol &s)
{
    if (!e.has(s)) {
        return Expr(0);
    }
    switch (e.kind()) {
        case NodeKind::Constant:
            return Expr(0);
        case NodeKind::Symbol:
            return Expr(1);
        case NodeKind::Add: {
            std::vector<Expr> parts;
            for (const auto &[t, c] : e.terms()) {
                if (t.has(s)) {
                    parts.push_back(diff(t, s) * Expr(c));
                }
            }
            return add(parts);
        }
        case NodeKind::Mul: {
            std::vector<Expr> parts;
            for (const auto &[b, k] : e.factors()) {
                if (!b.has(s)) {
                    continue;
                }
                parts.push_back(mul_powers({{e, 1}, {b, -1}, {Expr(k), 1}, {diff(b, s), 1}}));
            }
            return add(parts);
        }
        case NodeKind::Func: {
            const Expr &a = e.arg();
            const Expr da = diff(a, s);
            switch (e.func()) {
                case FuncKind::Sin:
                    return cos(a) * da;
                case FuncKind::Cos:
                    return -(sin(a) * da);
                case FuncKind::Exp:
                    return e * da;
                case FuncKind::Log:
                    return mul_powers({{a, -1}, {da, 1}});
                case FuncKind::Sqrt:
                    return mul_powers({{e, -1}, {da, 1}, {rational(1, 2), 1}});
            }
        }
    }
    return Expr(0);
}

Expr substitute(const Expr &e, const Substitution &map)
{
    if (map.empty()) {
        return e;
    }
    bool touched = false;
    for (const auto &s : e.free_symbols()) {
        if (map.contains(s)) {
            touched = true;
            break;
        }
    }
    if (!touched) {
        return e;
    }
    switch (e.kind()) {
        case NodeKind::Constant:
            return e;
        case NodeKind::Symbol:
            return map.at(e.symbol());
        case NodeKind::Add: {
            std::vector<Expr> parts{Expr(e.value())};
            for (const auto &[t, c] : e.terms()) {
                parts.push_back(substitute(t, map) * Expr(c));
            }
            return add(parts);
        }
        case NodeKind::Mul: {
            std::vector<std::pair<Expr, int>> items{{Expr(e.value()), 1}};
            for (const auto &[b, k] : e.factors()) {
                items.emplace_back(substitute(b, map), k);
            }
            return mul_powers(std::move(items));
        }
        case NodeKind::Func:
            return func(e.func(), substitute(e.arg(), map));
    }
    return e;
}

Expr normalize(const Expr &e)
{
    switch (e.kind()) {
        case NodeKind::Constant:
            return Expr(e.value());
        case NodeKind::Symbol:
            return Expr(e.symbol());
        case NodeKind::Add: {
            std::vector<Expr> parts{Expr(e.value())};
            for (const auto &[t, c] : e.terms()) {
                parts.push_back(normalize(t) * Expr(c));
            }
            return add(parts);
        }
        case NodeKind::Mul: {
            std::vector<std::pair<Expr, int>> items{{Expr(e.value()), 1}};
            for (const auto &[b, k] : e.factors()) {
                items.emplace_back(normalize(b), k);
            }
            return mul_powers(std::move(items));
        }
        case NodeKind::Func:
            return func(e.func(), normalize(e.arg()));
    }
    return e;
}

double eval(const Expr &e, const Assignment &a)
{
    switch (e.kind()) {
        case NodeKind::Constant:
            return e.value().to_double();
        case NodeKind::Symbol: {
            auto it = a.find(e.symbol());
            if (it == a.end()) {
                throw EvalError("no value assigned to symbol '" + e.symbol().to_string() + "'");
            }
            return it->second;
        }
        case NodeKind::Add: {
            double r = e.value().to_double();
            for (const auto &[t, c] : e.terms()) {
                r += c.to_double() * eval(t, a);
            }
            return r;
        }
        case NodeKind::Mul: {
            double r = e.value().to_double();
            for (const auto &[b, k] : e.factors()) {
                const double x = eval(b, a);
                if (k < 0 && x == 0.0) {
                    throw DomainError("division by zero");
                }
                r *= (k == 1) ? x : std::pow(x, k);
            }
            if (!std::isfinite(r)) {
                throw DomainError("non-finite value");
            }
            return r;
        }
        case NodeKind::Func: {
            const double x = eval(e.arg(), a);
            double r = 0;
            switch (e.func()) {
                case FuncKind::Sin:
                    r = std::sin(x);
                    break;
                case FuncKind::Cos:
                    r = std::cos(x);
                    break;
                case FuncKind::Exp:
                    r = std::exp(x);
                    break;
                case FuncKind::Log:
                    if (!(x > 0)) {
                        throw DomainError("log of a non-positive value");
                    }
                    r = std::log(x);
                    break;
                case FuncKind::Sqrt:
                    if (x < 0) {
                        throw DomainError("sqrt of a negative value");
                    }
                    r = std::sqrt(x);
                    break;
            }
            if (!std::isfinite(r)) {
                throw DomainError("non-finite value");
            }
            return r;
        }
    }
    return 0;
}

int polynomial_degree(const Expr &e, std::span<const Symbol> vars)
{
    auto depends = [&](const Expr &x) {
        for (const auto &v : vars) {
            if (x.has(v)) {
                return true;
            }
        }
        return false;
    };
    if (!depends(e)) {
        return 0;
    }
    switch (e.kind()) {
        case NodeKind::Constant:
            return 0;
        case NodeKind::Symbol:
            return 1;
        case NodeKind::Add: {
            int d = 0;
            for (const auto &[t, c] : e.terms()) {
                const int dt = polynomial_degree(t, vars);
                if (dt < 0) {
                    return -1;
                }
                d = std::max(d, dt);
            }
            return d;
        }
        case NodeKind::Mul: {
            int d = 0;
            for (const auto &[b, k] : e.factors()) {
                if (!depends(b)) {
                    continue;
                }
                if (b.kind() != NodeKind::Symbol || k < 0) {
                    return -1;
                }
                d += k;
            }
            return d;
        }
        case NodeKind::Func:
            return -1;
    }
    return -1;
}

std::vector<std::pair<Expr, Expr>> collect_by_impl(const Expr &e, bool (*pred)(const Symbol &, const void *),
                                                   const void *ctx)
{
    auto is_var = [&](const Expr &x) {
        for (const auto &s : x.free_symbols()) {
            if (pred(s, ctx)) {
                return true;
            }
        }
        return false;
    };
    std::map<Expr, std::vector<Expr>, ExprLess> acc;
    auto push = [&](const Expr &term, const Number &c) {
        std::vector<std::pair<Expr, int>> key_items;
        std::vector<std::pair<Expr, int>> coeff_items{{Expr(c), 1}};
        if (term.kind() == NodeKind::Mul) {
            coeff_items.emplace_back(Expr(term.value()), 1);
            for (const auto &[b, k] : term.factors()) {
                (is_var(b) ? key_items : coeff_items).emplace_back(b, k);
            }
        } else if (is_var(term)) {
            key_items.emplace_back(term, 1);
        } else {
            coeff_items.emplace_back(term, 1);
        }
        acc[mul_powers(std::move(key_items))].push_back(mul_powers(std::move(coeff_items)));
    };
    if (e.kind() == NodeKind::Add) {
        if (!e.value().is_zero()) {
            push(Expr(1), e.value());
        }
        for (const auto &[t, c] : e.terms()) {
            push(t, c);
        }
    } else if (!e.is_zero()) {
        push(e, Number(1));
    }
    std::vector<std::pair<Expr, Expr>> out;
    for (auto &[k, parts] : acc) {
        Expr c = add(parts);
        if (!c.is_zero()) {
            out.emplace_back(k, std::move(c));
        }
    }
    return out;
}

} // namespace noether

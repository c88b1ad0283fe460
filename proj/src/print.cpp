#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include <noether/expr.hpp>

namespace noether
{

namespace
{

int factor_rank(const Expr &b)
{
    switch (b.kind()) {
        case NodeKind::Symbol:
            return b.symbol().kind == SymbolKind::Parameter ? 0 : 2 + static_cast<int>(b.symbol().kind);
        case NodeKind::Func:
            return 1;
        default:
            return 20;
    }
}

std::string print_term(const Expr &unit, const Number &c);

std::string print_base(const Expr &b)
{
    switch (b.kind()) {
        case NodeKind::Symbol:
            return b.symbol().to_string();
        case NodeKind::Func:
            return std::string(func_name(b.func())) + "(" + b.arg().to_string() + ")";
        default:
            return "(" + b.to_string() + ")";
    }
}

std::string print_unit(const Expr &unit)
{
    if (unit.kind() != NodeKind::Mul) {
        return print_base(unit);
    }
    struct Item {
        int rank;
        int index;
        std::string text;
    };
    std::vector<Item> items;
    for (const auto &[b, k] : unit.factors()) {
        std::string s = print_base(b);
        if (k != 1) {
            s += "^" + std::to_string(k);
        }
        const int idx = b.kind() == NodeKind::Symbol ? b.symbol().index : 0;
        items.push_back({factor_rank(b), idx, std::move(s)});
    }
    std::sort(items.begin(), items.end(), [](const Item &x, const Item &y) {
        return std::tie(x.rank, x.index, x.text) < std::tie(y.rank, y.index, y.text);
    });
    std::string out;
    for (const auto &it : items) {
        if (!out.empty()) {
            out += "*";
        }
        out += it.text;
    }
    return out;
}

std::string print_term(const Expr &unit, const Number &c)
{
    std::string u = print_unit(unit);
    if (c.is_one()) {
        return u;
    }
    if (c.is_minus_one()) {
        return "-" + u;
    }
    return c.to_string() + "*" + u;
}

int term_degree(const Expr &unit)
{
    if (unit.kind() != NodeKind::Mul) {
        return 1;
    }
    int d = 0;
    for (const auto &[b, k] : unit.factors()) {
        d += k < 0 ? -k : k;
    }
    return d;
}

} // namespace

std::string Expr::to_string() const
{
    switch (kind()) {
        case NodeKind::Constant:
            return value().to_string();
        case NodeKind::Symbol:
        case NodeKind::Func:
            return print_base(*this);
        case NodeKind::Mul:
            return print_term(*this, value());
        case NodeKind::Add: {
            struct Part {
                int degree;
                std::string unit;
                Number coeff;
                Expr term;
            };
            std::vector<Part> parts;
            for (const auto &[t, c] : terms()) {
                parts.push_back({term_degree(t), print_unit(t), c, t});
            }
            std::sort(parts.begin(), parts.end(), [](const Part &x, const Part &y) {
                return std::tie(x.degree, x.unit) < std::tie(y.degree, y.unit);
            });
            std::string out;
            bool first = true;
            auto emit = [&](const std::string &positive, int sign) {
                if (first) {
                    out += sign < 0 ? "-" + positive : positive;
                    first = false;
                } else {
                    out += sign < 0 ? " - " : " + ";
                    out += positive;
                }
            };
            for (const auto &p : parts) {
                emit(print_term(p.term, p.coeff.abs()), p.coeff.sign());
            }
            if (!value().is_zero()) {
                emit(value().abs().to_string(), value().sign());
            }
            return out;
        }
    }
    return {};
}

} // namespace noether

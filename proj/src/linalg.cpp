#include <noether/linalg.hpp>

#include <noether/error.hpp>

namespace noether
{

namespace
{

// Picks a pivot row in column `col` at or below `from`; constants first.
std::optional<std::size_t> find_pivot(const ExprMatrix &a, std::size_t from, std::size_t col, ZeroVerdict &confidence)
{
    std::optional<std::size_t> symbolic;
    for (std::size_t r = from; r < a.size(); ++r) {
        const Expr &x = a[r][col];
        if (x.is_zero()) {
            continue;
        }
        if (x.is_constant()) {
            return r;
        }
        if (symbolic) {
            continue;
        }
        const ZeroVerdict v = is_zero(x);
        if (v == ZeroVerdict::ProvenNonzero) {
            symbolic = r;
        } else {
            confidence = combine(confidence, v);
        }
    }
    return symbolic;
}

} // namespace

Expr determinant(const ExprMatrix &a)
{
    const std::size_t n = a.size();
    if (n == 0) {
        return Expr(1);
    }
    if (n == 1) {
        return a[0][0];
    }
    if (n == 2) {
        return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    }
    std::vector<Expr> parts;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) {
            continue;
        }
        ExprMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            ExprVector row;
            for (std::size_t c = 0; c < n; ++c) {
                if (c != j) {
                    row.push_back(a[r][c]);
                }
            }
            minor.push_back(std::move(row));
        }
        Expr term = a[0][j] * determinant(minor);
        parts.push_back(j % 2 == 0 ? term : -term);
    }
    return add(parts);
}

std::optional<ExprMatrix> solve(ExprMatrix a, ExprMatrix b)
{
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw MathError("solve: dimension mismatch");
    }
    const std::size_t m = n == 0 ? 0 : b[0].size();
    ZeroVerdict ignored = ZeroVerdict::ProvenZero;
    for (std::size_t c = 0; c < n; ++c) {
        auto p = find_pivot(a, c, c, ignored);
        if (!p) {
            return std::nullopt;
        }
        std::swap(a[c], a[*p]);
        std::swap(b[c], b[*p]);
        const Expr inv = pow(a[c][c], -1);
        for (std::size_t j = c; j < n; ++j) {
            a[c][j] = a[c][j] * inv;
        }
        for (std::size_t j = 0; j < m; ++j) {
            b[c][j] = b[c][j] * inv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) {
                continue;
            }
            const Expr f = a[r][c];
            for (std::size_t j = c; j < n; ++j) {
                a[r][j] = a[r][j] - f * a[c][j];
            }
            for (std::size_t j = 0; j < m; ++j) {
                b[r][j] = b[r][j] - f * b[c][j];
            }
        }
    }
    return b;
}

NullspaceResult nullspace(ExprMatrix a, std::size_t columns)
{
    NullspaceResult out;
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < columns && row < a.size(); ++c) {
        auto p = find_pivot(a, row, c, out.confidence);
        if (!p) {
            continue;
        }
        std::swap(a[row], a[*p]);
        const Expr inv = pow(a[row][c], -1);
        for (std::size_t j = c; j < columns; ++j) {
            a[row][j] = a[row][j] * inv;
        }
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c].is_zero()) {
                continue;
            }
            const Expr f = a[r][c];
            for (std::size_t j = c; j < columns; ++j) {
                a[r][j] = a[r][j] - f * a[row][j];
            }
        }
        pivot_cols.push_back(c);
        ++row;
    }
    std::vector<bool> is_pivot(columns, false);
    for (auto c : pivot_cols) {
        is_pivot[c] = true;
    }
    for (std::size_t f = 0; f < columns; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        ExprVector v(columns, Expr(0));
        v[f] = Expr(1);
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
            v[pivot_cols[r]] = -a[r][f];
        }
        out.basis.push_back(std::move(v));
    }
    return out;
}

} // namespace noether

#include <noether/legendre.hpp>

#include <cmath>
#include <random>

#include <fmt/format.h>

#include <noether/error.hpp>

namespace noether
{

namespace
{

std::size_t idx(int i)
{
    return static_cast<std::size_t>(i - 1);
}

bool has_velocity(const Expr &e)
{
    return e.has_any([](const Symbol &s) { return s.kind == SymbolKind::Velocity; });
}

// c * exp(...) with c a nonzero constant never vanishes.
bool manifestly_nonzero(const Expr &e)
{
    if (e.is_constant()) {
        return !e.is_zero();
    }
    if (e.kind() == NodeKind::Func) {
        return e.func() == FuncKind::Exp;
    }
    if (e.kind() == NodeKind::Mul) {
        for (const auto &[b, k] : e.factors()) {
            if (b.kind() != NodeKind::Func || b.func() != FuncKind::Exp) {
                return false;
            }
        }
        return true;
    }
    return false;
}

bool nonvanishing_at_probes(const Expr &e)
{
    const ZeroTestConfig &cfg = current_zero_test_config();
    std::mt19937_64 rng(cfg.seed ^ 0x1e9e7d5ULL);
    std::uniform_real_distribution<double> dist(cfg.lo, cfg.hi);
    int evaluated = 0;
    for (int attempt = 0; attempt < cfg.points * 5 && evaluated < cfg.points; ++attempt) {
        Assignment a;
        for (const auto &s : e.free_symbols()) {
            a[s] = dist(rng);
        }
        try {
            if (std::abs(eval(e, a)) <= cfg.nonzero_tol) {
                return false;
            }
            ++evaluated;
        } catch (const DomainError &) {
        }
    }
    return evaluated > 0;
}

// Dense Gaussian elimination with partial pivoting; false if singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> &x)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) {
                piv = r;
            }
        }
        if (std::abs(a[piv][c]) < 1e-300) {
            return false;
        }
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    return true;
}

Substitution velocities_from(const std::vector<Expr> &values)
{
    Substitution sub;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sub[Symbol::velocity(static_cast<int>(i + 1))] = values[i];
    }
    return sub;
}

Substitution momenta_from(const std::vector<Expr> &values)
{
    Substitution sub;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sub[Symbol::momentum(static_cast<int>(i + 1))] = values[i];
    }
    return sub;
}

void require_state(const Trajectory &traj, int n, SymbolKind second)
{
    bool ok = static_cast<int>(traj.state.size()) == 2 * n;
    for (int i = 1; ok && i <= n; ++i) {
        ok = traj.state[idx(i)] == Symbol::coord(i) && traj.state[idx(n + i)].kind == second
             && traj.state[idx(n + i)].index == i;
    }
    if (!ok) {
        throw MathError("trajectory state does not match the expected (q, " + std::string(second == SymbolKind::Velocity ? "q_t" : "p") + ") layout");
    }
}

} // namespace

std::string to_string(Regularity r)
{
    switch (r) {
        case Regularity::Hyperregular:
            return "Hyperregular";
        case Regularity::Degenerate:
            return "Degenerate";
        case Regularity::UnknownNumeric:
            return "UnknownNumeric";
    }
    return "?";
}

LegendreMap legendre_map(const Lagrangian &L)
{
    const int n = L.dimension;
    LegendreMap m;
    m.source = L;
    for (int i = 1; i <= n; ++i) {
        m.components.push_back(diff(L.density, Symbol::velocity(i)));
    }
    for (int i = 1; i <= n; ++i) {
        ExprVector row;
        for (int j = 1; j <= n; ++j) {
            row.push_back(diff(m.components[idx(i)], Symbol::velocity(j)));
        }
        m.hessian.push_back(std::move(row));
    }
    m.determinant = determinant(m.hessian);
    const ZeroVerdict v = is_zero(m.determinant);
    if (is_zero_class(v)) {
        m.regularity = Regularity::Degenerate;
    } else if (manifestly_nonzero(m.determinant)) {
        m.regularity = Regularity::Hyperregular;
    } else if (v == ZeroVerdict::ProvenNonzero && nonvanishing_at_probes(m.determinant)) {
        m.regularity = Regularity::Hyperregular;
        m.numeric_regularity = true;
    } else {
        m.regularity = Regularity::UnknownNumeric;
    }
    return m;
}

MomentumMap momentum_map(const Hamiltonian &H)
{
    MomentumMap m;
    for (int i = 1; i <= H.dimension; ++i) {
        m.components.push_back(diff(H.density, Symbol::momentum(i)));
    }
    return m;
}

LegendreInverse::LegendreInverse(LegendreMap map, std::optional<std::vector<Expr>> symbolic, NewtonOptions opts)
    : map_(std::move(map)), symbolic_(std::move(symbolic)), opts_(opts)
{
}

const std::vector<Expr> &LegendreInverse::symbolic() const
{
    if (!symbolic_) {
        throw MathError("Legendre inverse has no closed form");
    }
    return *symbolic_;
}

std::vector<double> LegendreInverse::velocities(const Assignment &point) const
{
    const std::size_t n = map_.components.size();
    if (symbolic_) {
        std::vector<double> out;
        for (const auto &e : *symbolic_) {
            out.push_back(eval(e, point));
        }
        return out;
    }
    Assignment a = point;
    std::vector<double> p(n);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = point.at(Symbol::momentum(static_cast<int>(i + 1)));
    }
    auto residual = [&](const std::vector<double> &vel, std::vector<double> &r) {
        for (std::size_t i = 0; i < n; ++i) {
            a[Symbol::velocity(static_cast<int>(i + 1))] = vel[i];
        }
        double norm = 0;
        r.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = eval(map_.components[i], a) - p[i];
            norm = std::max(norm, std::abs(r[i]));
        }
        return norm;
    };
    std::vector<double> r;
    double norm = residual(v, r);
    for (int iter = 0; iter < opts_.max_iterations && norm > opts_.tolerance; ++iter) {
        residual(v, r);
        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                J[i][j] = eval(map_.hessian[i][j], a);
            }
        }
        std::vector<double> neg(n);
        for (std::size_t i = 0; i < n; ++i) {
            neg[i] = -r[i];
        }
        std::vector<double> step;
        if (!solve_dense(J, neg, step)) {
            break;
        }
        double lambda = 1.0;
        std::vector<double> trial(n);
        std::vector<double> rt;
        double trial_norm = norm;
        for (int k = 0; k < 30; ++k, lambda /= 2) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = v[i] + lambda * step[i];
            }
            trial_norm = residual(trial, rt);
            if (trial_norm < norm) {
                break;
            }
        }
        v = trial;
        norm = residual(v, r);
    }
    if (!(norm <= opts_.tolerance)) {
        throw MathError(fmt::format("Legendre inversion by Newton iteration did not converge (residual norm {:.3g})", norm));
    }
    return v;
}

LegendreInverse invert_legendre(const LegendreMap &lm, NewtonOptions opts)
{
    if (lm.regularity != Regularity::Hyperregular) {
        throw MathError("degenerate Lagrangian: Legendre map is not invertible (regularity "
                        + to_string(lm.regularity) + ")");
    }
    const std::size_t n = lm.components.size();
    bool affine = true;
    for (const auto &row : lm.hessian) {
        for (const auto &x : row) {
            affine = affine && !has_velocity(x);
        }
    }
    if (affine) {
        std::vector<Expr> zero(n, Expr(0));
        const Substitution at_rest = velocities_from(zero);
        ExprMatrix rhs;
        for (std::size_t i = 0; i < n; ++i) {
            rhs.push_back({Expr(Symbol::momentum(static_cast<int>(i + 1))) - substitute(lm.components[i], at_rest)});
        }
        if (auto x = solve(lm.hessian, rhs)) {
            std::vector<Expr> v;
            for (const auto &row : *x) {
                v.push_back(row[0]);
            }
            return LegendreInverse(lm, std::move(v), opts);
        }
    }
    return LegendreInverse(lm, std::nullopt, opts);
}

Hamiltonian associated_hamiltonian(const Lagrangian &L)
{
    const auto inv = invert_legendre(legendre_map(L));
    if (!inv.is_symbolic()) {
        throw MathError("the associated Hamiltonian has no closed form for this Lagrangian (numeric evaluation only)");
    }
    const auto &v = inv.symbolic();
    std::vector<Expr> parts{-substitute(L.density, velocities_from(v))};
    for (int i = 1; i <= L.dimension; ++i) {
        parts.push_back(Expr(Symbol::momentum(i)) * v[idx(i)]);
    }
    return Hamiltonian(add(parts), L.dimension);
}

double associated_hamiltonian_value(const LegendreInverse &inv, const Assignment &point)
{
    const auto v = inv.velocities(point);
    Assignment a = point;
    double h = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        a[Symbol::velocity(static_cast<int>(i + 1))] = v[i];
        h += point.at(Symbol::momentum(static_cast<int>(i + 1))) * v[i];
    }
    return h - eval(inv.map().source.density, a);
}

AssociationReport verify_association(const Lagrangian &L, const Hamiltonian &H)
{
    if (L.dimension != H.dimension) {
        throw MathError("Lagrangian and Hamiltonian dimensions differ");
    }
    const int n = L.dimension;
    const auto lm = legendre_map(L);
    const auto mm = momentum_map(H);
    const Substitution p_of_v = momenta_from(lm.components);
    const Substitution v_of_p = velocities_from(mm.components);
    AssociationReport r;
    std::vector<Expr> round_trip;
    for (int i = 1; i <= n; ++i) {
        round_trip.push_back(substitute(substitute(lm.components[idx(i)], v_of_p), p_of_v));
    }
    for (int i = 1; i <= n; ++i) {
        r.round_trip_identity = combine(r.round_trip_identity, is_zero(round_trip[idx(i)] - lm.components[idx(i)]));
        r.momentum_consistency = combine(r.momentum_consistency, is_zero(Expr(Symbol::momentum(i)) - substitute(lm.components[idx(i)], v_of_p)));
        r.velocity_consistency = combine(r.velocity_consistency, is_zero(Expr(Symbol::velocity(i)) - substitute(mm.components[idx(i)], p_of_v)));
    }
    std::vector<Expr> energy{-L.density, -substitute(H.density, p_of_v)};
    for (int i = 1; i <= n; ++i) {
        energy.push_back(Expr(Symbol::velocity(i)) * lm.components[idx(i)]);
    }
    r.energy_relation = is_zero(add(energy));
    return r;
}

TransferReport transfer_symmetry(const Lagrangian &L, const Hamiltonian &H, const ProjectableVectorField &u)
{
    TransferReport r;
    r.lagrangian_side =
        substitute(-contract_poincare_cartan(L, u), velocities_from(momentum_map(H).components));
    r.hamiltonian_side = symmetry_function_hamiltonian(H, u);
    r.pullback_residual = is_zero(r.lagrangian_side - r.hamiltonian_side);
    return r;
}

Trajectory map_solution(const Lagrangian &L, const Trajectory &traj)
{
    const int n = L.dimension;
    require_state(traj, n, SymbolKind::Velocity);
    const auto lm = legendre_map(L);
    Trajectory out = traj;
    for (int i = 1; i <= n; ++i) {
        out.state[idx(n + i)] = Symbol::momentum(i);
    }
    for (std::size_t row = 0; row < traj.size(); ++row) {
        const Assignment a = traj.point(row);
        for (int i = 1; i <= n; ++i) {
            out.states[row][idx(n + i)] = eval(lm.components[idx(i)], a);
        }
    }
    return out;
}

Trajectory map_solution(const Hamiltonian &H, const Trajectory &traj)
{
    const int n = H.dimension;
    require_state(traj, n, SymbolKind::Momentum);
    const auto mm = momentum_map(H);
    Trajectory out = traj;
    for (int i = 1; i <= n; ++i) {
        out.state[idx(n + i)] = Symbol::velocity(i);
    }
    for (std::size_t row = 0; row < traj.size(); ++row) {
        const Assignment a = traj.point(row);
        for (int i = 1; i <= n; ++i) {
            out.states[row][idx(n + i)] = eval(mm.components[idx(i)], a);
        }
    }
    return out;
}

} // namespace noether

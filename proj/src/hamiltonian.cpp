#include <noether/hamiltonian.hpp>

#include <boost/math/quadrature/gauss.hpp>

#include <noether/error.hpp>
#include <noether/integrate.hpp>

namespace noether
{

namespace
{

std::size_t idx(int i)
{
    return static_cast<std::size_t>(i - 1);
}

Expr qt(int i)
{
    return Expr(Symbol::velocity(i));
}

Expr pm(int i)
{
    return Expr(Symbol::momentum(i));
}

Expr pt(int i)
{
    return Expr(Symbol::momentum_rate(i));
}

void require_dimension(const Hamiltonian &H, const ProjectableVectorField &u)
{
    if (static_cast<int>(u.dimension()) != H.dimension) {
        throw MathError("vector field dimension " + std::to_string(u.dimension())
                        + " does not match the Hamiltonian dimension " + std::to_string(H.dimension));
    }
}

int phase_dimension(const Expr &e)
{
    int n = 0;
    for (const auto &s : e.free_symbols()) {
        n = std::max(n, s.index);
    }
    return n;
}

} // namespace

Hamiltonian::Hamiltonian(Expr d, int n) : density(std::move(d)), dimension(n)
{
    if (n < 1) {
        throw MathError("dimension must be positive");
    }
    if (density.has_any([n](const Symbol &s) {
            switch (s.kind) {
                case SymbolKind::Coord:
                case SymbolKind::Momentum:
                    return s.index > n;
                case SymbolKind::Time:
                case SymbolKind::Parameter:
                    return false;
                default:
                    return true;
            }
        })) {
        throw MathError("a Hamiltonian density depends on (t, q, p, params) only: " + density.to_string());
    }
}

HomogeneousContext homogeneous_context(const Hamiltonian &H)
{
    return {Expr(Symbol::homogeneous_momentum()) + H.density};
}

HamiltonVectorField hamilton_vector_field(const Hamiltonian &H)
{
    HamiltonVectorField g;
    for (int i = 1; i <= H.dimension; ++i) {
        g.q_dot.push_back(diff(H.density, Symbol::momentum(i)));
        g.p_dot.push_back(-diff(H.density, Symbol::coord(i)));
    }
    return g;
}

std::vector<Expr> hamilton_equations(const Hamiltonian &H)
{
    const auto g = hamilton_vector_field(H);
    std::vector<Expr> out;
    for (int i = 1; i <= H.dimension; ++i) {
        out.push_back(qt(i) - g.q_dot[idx(i)]);
    }
    for (int i = 1; i <= H.dimension; ++i) {
        out.push_back(pt(i) - g.p_dot[idx(i)]);
    }
    return out;
}

std::vector<Expr> euler_lagrange(const PhaseLagrangian &LH)
{
    return euler_lagrange(LH.density, JetFrame::momentum_extended(LH.dimension));
}

ZeroVerdict verify_hamilton_lagrangian(const Expr &lh_density, const Hamiltonian &H)
{
    const int n = H.dimension;
    const auto el = euler_lagrange(lh_density, JetFrame::momentum_extended(n));
    const auto res = hamilton_equations(H);
    ZeroVerdict v = ZeroVerdict::ProvenZero;
    for (int i = 1; i <= n; ++i) {
        v = combine(v, is_zero(el[idx(i)] + res[idx(n + i)]));
        v = combine(v, is_zero(el[idx(n + i)] - res[idx(i)]));
    }
    return v;
}

PhaseLagrangian lagrangian_of_H(const Hamiltonian &H)
{
    std::vector<Expr> parts{-H.density};
    for (int i = 1; i <= H.dimension; ++i) {
        parts.push_back(pm(i) * qt(i));
    }
    PhaseLagrangian out{add(parts), H.dimension};
    if (!is_zero_class(verify_hamilton_lagrangian(out.density, H))) {
        throw MathError("Euler-Lagrange operator of L_H does not reproduce the Hamilton equations");
    }
    return out;
}

Expr lie_derivative_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u)
{
    require_dimension(H, u);
    const int n = H.dimension;
    std::vector<Expr> inner{-(Expr(u.u_t) * H.density)};
    for (int i = 1; i <= n; ++i) {
        inner.push_back(pm(i) * u.u[idx(i)]);
    }
    std::vector<Expr> parts{diff(add(inner), Symbol::time())};
    for (int i = 1; i <= n; ++i) {
        parts.push_back(-(u.u[idx(i)] * diff(H.density, Symbol::coord(i))));
        const Expr dpi = diff(H.density, Symbol::momentum(i));
        for (int j = 1; j <= n; ++j) {
            parts.push_back(diff(u.u[idx(j)], Symbol::coord(i)) * pm(j) * dpi);
        }
    }
    return add(parts);
}

Expr lie_derivative_phase_lagrangian(const Expr &lh_density, const ProjectableVectorField &u)
{
    const int n = static_cast<int>(u.dimension());
    const PhaseVectorField lift = canonical_lift(u);
    FrameVectorField f{lift.u_t, lift.u};
    f.components.insert(f.components.end(), lift.w.begin(), lift.w.end());
    return lie_derivative(lh_density, f, JetFrame::momentum_extended(n));
}

ZeroVerdict verify_pullback_relation(const Hamiltonian &H, const ProjectableVectorField &u)
{
    return verify_pullback_relation(lagrangian_of_H(H).density, H, u);
}

ZeroVerdict verify_pullback_relation(const Expr &lh_density, const Hamiltonian &H, const ProjectableVectorField &u)
{
    return is_zero(lie_derivative_hamiltonian(H, u) - lie_derivative_phase_lagrangian(lh_density, u));
}

ZeroVerdict verify_first_variation_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u)
{
    return verify_first_variation_hamiltonian(lagrangian_of_H(H).density, H, u);
}

ZeroVerdict verify_first_variation_hamiltonian(const Expr &lh_density, const Hamiltonian &H,
                                               const ProjectableVectorField &u)
{
    require_dimension(H, u);
    const int n = H.dimension;
    const Expr ut(u.u_t);
    std::vector<Expr> parts{lie_derivative_phase_lagrangian(lh_density, u),
                            total_derivative(symmetry_function_hamiltonian(H, u), n, DerivativeMode::Phase)};
    for (int i = 1; i <= n; ++i) {
        parts.push_back((u.u[idx(i)] - ut * qt(i)) * (pt(i) + diff(H.density, Symbol::coord(i))));
        std::vector<Expr> coeff{ut * pt(i)};
        for (int j = 1; j <= n; ++j) {
            coeff.push_back(pm(j) * diff(u.u[idx(j)], Symbol::coord(i)));
        }
        parts.push_back(add(coeff) * (qt(i) - diff(H.density, Symbol::momentum(i))));
    }
    return is_zero(add(parts));
}

Expr symmetry_function_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u)
{
    require_dimension(H, u);
    std::vector<Expr> parts{Expr(u.u_t) * H.density};
    for (int i = 1; i <= H.dimension; ++i) {
        parts.push_back(-(u.u[idx(i)] * pm(i)));
    }
    return add(parts);
}

SymmetryReport symmetry_classify_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u,
                                             const std::string &name)
{
    require_dimension(H, u);
    SymmetryReport report;
    report.lie_derivative = lie_derivative_hamiltonian(H, u);
    const Expr &lambda = report.lie_derivative;

    ConservedQuantity q;
    q.name = name;
    q.space = PhaseSpace::Momentum;
    q.symmetry_function = symmetry_function_hamiltonian(H, u);
    q.expression = -q.symmetry_function;

    const ZeroVerdict lv = is_zero(lambda);
    if (is_zero_class(lv)) {
        report.symmetry_class = SymmetryClass::Strict;
        report.verdict_confidence = lv;
        q.provenance = {u.to_string(), SymmetryClass::Strict, "stored as -(u^t H - u^i p_i)"};
        report.charge = std::move(q);
        return report;
    }
    ZeroVerdict time_only = ZeroVerdict::ProvenZero;
    for (int i = 1; i <= H.dimension; ++i) {
        time_only = combine(time_only, is_zero(diff(lambda, Symbol::coord(i))));
        time_only = combine(time_only, is_zero(diff(lambda, Symbol::momentum(i))));
    }
    if (!is_zero_class(time_only)) {
        report.symmetry_class = SymmetryClass::Broken;
        report.verdict_confidence =
            combine(lv == ZeroVerdict::Unknown ? ZeroVerdict::Unknown : ZeroVerdict::ProvenZero,
                    time_only == ZeroVerdict::Unknown ? ZeroVerdict::Unknown : ZeroVerdict::ProvenZero);
        if (report.verdict_confidence == ZeroVerdict::ProvenZero) {
            report.verdict_confidence = ZeroVerdict::ProvenNonzero;
        }
        return report;
    }
    report.symmetry_class = SymmetryClass::Quasi;
    report.verdict_confidence = combine(lv == ZeroVerdict::Unknown ? ZeroVerdict::Unknown : ZeroVerdict::ProvenZero,
                                        time_only);
    // Drop the (numerically) absent q, p dependence before integrating in t.
    Substitution origin;
    for (int i = 1; i <= H.dimension; ++i) {
        origin[Symbol::coord(i)] = Expr(0);
        origin[Symbol::momentum(i)] = Expr(0);
    }
    const Expr rate = substitute(lambda, origin);
    q.provenance = {u.to_string(), SymmetryClass::Quasi, "stored as -(u^t H - u^i p_i + f)"};
    if (auto f = antiderivative(rate, Symbol::time())) {
        report.time_function = *f;
        q.expression = -(q.symmetry_function + *f);
        q.provenance.note += "; f = " + f->to_string();
    } else {
        q.numeric_correction = [rate](const Assignment &a) {
            const double t = a.at(Symbol::time());
            Assignment local = a;
            auto g = [&](double s) {
                local[Symbol::time()] = s;
                return eval(rate, local);
            };
            return -boost::math::quadrature::gauss<double, 30>::integrate(g, 0.0, t);
        };
        q.provenance.note += "; f = integral of " + rate.to_string() + " from 0, numeric only";
    }
    report.charge = std::move(q);
    return report;
}

ConservedQuantity energy_function_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &gamma)
{
    if (!gamma.is_connection()) {
        throw MathError("energy function needs a connection (dt coefficient 1)");
    }
    ConservedQuantity q;
    q.name = "energy";
    q.space = PhaseSpace::Momentum;
    q.symmetry_function = symmetry_function_hamiltonian(H, gamma);
    q.expression = q.symmetry_function;
    q.provenance = {gamma.to_string(), SymmetryClass::Strict, "energy function; conservation not asserted"};
    return q;
}

Expr poisson_bracket_T(const Expr &f, const Expr &g, int n)
{
    const Symbol t = Symbol::time();
    const Symbol ph = Symbol::homogeneous_momentum();
    std::vector<Expr> parts{diff(f, ph) * diff(g, t), -(diff(f, t) * diff(g, ph))};
    for (int i = 1; i <= n; ++i) {
        parts.push_back(diff(f, Symbol::momentum(i)) * diff(g, Symbol::coord(i)));
        parts.push_back(-(diff(f, Symbol::coord(i)) * diff(g, Symbol::momentum(i))));
    }
    return add(parts);
}

Expr gamma_action(const Hamiltonian &H, const Expr &f)
{
    std::vector<Expr> parts{diff(f, Symbol::time())};
    for (int i = 1; i <= H.dimension; ++i) {
        parts.push_back(diff(H.density, Symbol::momentum(i)) * diff(f, Symbol::coord(i)));
        parts.push_back(-(diff(H.density, Symbol::coord(i)) * diff(f, Symbol::momentum(i))));
    }
    return add(parts);
}

ZeroVerdict verify_gamma_bracket(const Hamiltonian &H, const Expr &f)
{
    return verify_gamma_bracket(H, f, H);
}

ZeroVerdict verify_gamma_bracket(const Hamiltonian &H, const Expr &f, const Hamiltonian &bracket_source)
{
    const int n = std::max({H.dimension, bracket_source.dimension, phase_dimension(f)});
    return is_zero(gamma_action(H, f) - poisson_bracket_T(homogeneous_context(bracket_source).bold_H, f, n));
}

ZeroVerdict verify_first_integral(const Hamiltonian &H, const Expr &f)
{
    const int n = std::max(H.dimension, phase_dimension(f));
    return is_zero(poisson_bracket_T(homogeneous_context(H).bold_H, f, n));
}

} // namespace noether

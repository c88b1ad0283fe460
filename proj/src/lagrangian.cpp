#include <noether/lagrangian.hpp>

#include <map>

#include <noether/error.hpp>
#include <noether/linalg.hpp>

namespace noether
{

namespace
{

Expr qt(int i)
{
    return Expr(Symbol::velocity(i));
}

bool is_jet_variable(const Symbol &s)
{
    return s.kind == SymbolKind::Time || s.kind == SymbolKind::Coord || s.kind == SymbolKind::Velocity;
}

FrameVectorField to_frame(const ProjectableVectorField &u)
{
    return {u.u_t, u.u};
}

void require_dimension(const Lagrangian &L, const ProjectableVectorField &u)
{
    if (static_cast<int>(u.dimension()) != L.dimension) {
        throw MathError("vector field dimension " + std::to_string(u.dimension())
                        + " does not match the Lagrangian dimension " + std::to_string(L.dimension));
    }
}

} // namespace

std::string to_string(SymmetryClass c)
{
    switch (c) {
        case SymmetryClass::Strict:
            return "Strict";
        case SymmetryClass::Quasi:
            return "Quasi";
        case SymmetryClass::OnShellOnly:
            return "OnShellOnly";
        case SymmetryClass::Broken:
            return "Broken";
    }
    return "?";
}

double ConservedQuantity::evaluate(const Assignment &point) const
{
    double v = eval(expression, point);
    if (numeric_correction) {
        v += numeric_correction(point);
    }
    return v;
}

Lagrangian::Lagrangian(Expr d, int n) : density(std::move(d)), dimension(n)
{
    if (n < 1) {
        throw MathError("dimension must be positive");
    }
    if (density.has_any([n](const Symbol &s) {
            switch (s.kind) {
                case SymbolKind::Coord:
                case SymbolKind::Velocity:
                    return s.index > n;
                case SymbolKind::Time:
                case SymbolKind::Parameter:
                    return false;
                default:
                    return true;
            }
        })) {
        throw MathError("a Lagrangian density depends on (t, q, q_t, params) only: " + density.to_string());
    }
}

std::vector<Expr> euler_lagrange(const Expr &density, const JetFrame &frame)
{
    std::vector<Expr> out;
    for (std::size_t a = 0; a < frame.size(); ++a) {
        out.push_back(diff(density, frame.positions[a])
                      - total_derivative(diff(density, frame.velocities[a]), frame));
    }
    return out;
}

Expr lie_derivative(const Expr &density, const FrameVectorField &u, const JetFrame &frame)
{
    std::vector<Expr> parts;
    if (u.u_t != 0) {
        parts.push_back(Expr(u.u_t) * diff(density, Symbol::time()));
    }
    for (std::size_t a = 0; a < frame.size(); ++a) {
        const Expr &c = u.components[a];
        if (c.is_zero()) {
            continue;
        }
        parts.push_back(c * diff(density, frame.positions[a]));
        parts.push_back(total_derivative(c, frame) * diff(density, frame.velocities[a]));
    }
    return add(parts);
}

std::vector<Expr> euler_lagrange(const Lagrangian &L)
{
    return euler_lagrange(L.density, JetFrame::configuration(L.dimension));
}

PoincareCartanForm poincare_cartan(const Lagrangian &L)
{
    PoincareCartanForm out{L.density, {}};
    for (int i = 1; i <= L.dimension; ++i) {
        out.momenta_part.push_back(diff(L.density, Symbol::velocity(i)));
    }
    return out;
}

Expr lie_derivative_lagrangian(const Lagrangian &L, const ProjectableVectorField &u)
{
    require_dimension(L, u);
    return lie_derivative(L.density, to_frame(u), JetFrame::configuration(L.dimension));
}

Expr contract_poincare_cartan(const Lagrangian &L, const ProjectableVectorField &u)
{
    require_dimension(L, u);
    std::vector<Expr> parts{Expr(u.u_t) * L.density};
    for (int i = 1; i <= L.dimension; ++i) {
        const Expr rel = u.u[static_cast<std::size_t>(i - 1)] - Expr(u.u_t) * qt(i);
        parts.push_back(rel * diff(L.density, Symbol::velocity(i)));
    }
    return add(parts);
}

FirstVariation first_variational_check(const Lagrangian &L, const ProjectableVectorField &u)
{
    require_dimension(L, u);
    const auto el = euler_lagrange(L);
    std::vector<Expr> euler_parts;
    for (int i = 1; i <= L.dimension; ++i) {
        euler_parts.push_back((u.u[static_cast<std::size_t>(i - 1)] - Expr(u.u_t) * qt(i))
                              * el[static_cast<std::size_t>(i - 1)]);
    }
    FirstVariation out;
    out.euler_term = add(euler_parts);
    out.boundary_term = total_derivative(contract_poincare_cartan(L, u), JetFrame::configuration(L.dimension));
    out.residual_verdict = is_zero(lie_derivative_lagrangian(L, u) - out.euler_term - out.boundary_term);
    return out;
}

SymmetryReport symmetry_classify(const Lagrangian &L, const ProjectableVectorField &u, const ClassifyOptions &opts)
{
    require_dimension(L, u);
    const int n = L.dimension;
    SymmetryReport report;
    report.lie_derivative = lie_derivative_lagrangian(L, u);
    const ZeroVerdict lv = is_zero(report.lie_derivative);
    if (is_zero_class(lv)) {
        report.symmetry_class = SymmetryClass::Strict;
        report.verdict_confidence = lv;
        report.charge = noether_charge(L, u, report, opts.generator_name);
        return report;
    }
    ZeroVerdict confidence = lv == ZeroVerdict::Unknown ? ZeroVerdict::Unknown : ZeroVerdict::ProvenZero;

    // Quasi: Λ = a(t,q) + b_i(t,q) q_t^i with φ = a dt + b_i dq^i closed.
    const Expr &lambda = report.lie_derivative;
    bool affine = true;
    for (int i = 1; i <= n && affine; ++i) {
        const Expr di = diff(lambda, Symbol::velocity(i));
        for (int j = 1; j <= n && affine; ++j) {
            affine = diff(di, Symbol::velocity(j)).is_zero();
        }
    }
    if (affine) {
        Substitution rest;
        std::vector<Expr> b;
        for (int i = 1; i <= n; ++i) {
            rest[Symbol::velocity(i)] = Expr(0);
            b.push_back(diff(lambda, Symbol::velocity(i)));
        }
        OneFormOnQ phi(substitute(lambda, rest), std::move(b));
        const ZeroVerdict closed = is_closed(phi);
        if (is_zero_class(closed)) {
            report.symmetry_class = SymmetryClass::Quasi;
            report.verdict_confidence = combine(confidence, closed);
            report.potential = exact_potential(phi, opts.base_point.value_or(BasePoint::origin(n)));
            if (report.potential->has_symbolic()) {
                report.sigma = report.potential->symbolic();
            }
            report.phi = std::move(phi);
            report.charge = noether_charge(L, u, report, opts.generator_name);
            return report;
        }
        confidence = combine(confidence, closed == ZeroVerdict::Unknown ? ZeroVerdict::Unknown : ZeroVerdict::ProvenZero);
    }

    // On-shell: regular case by elimination, degenerate case by splitting off
    // an annihilator part.
    bool regular = true;
    try {
        const auto acc = solve_accelerations(L);
        Substitution sub;
        for (int i = 1; i <= n; ++i) {
            sub[Symbol::acceleration(i)] = acc[static_cast<std::size_t>(i - 1)];
        }
        const ZeroVerdict ov = is_zero(substitute(lambda, sub));
        if (is_zero_class(ov)) {
            report.symmetry_class = SymmetryClass::OnShellOnly;
            report.verdict_confidence = combine(confidence, ov);
            report.charge = noether_charge(L, u, report, opts.generator_name);
            return report;
        }
    } catch (const MathError &) {
        regular = false;
    }
    if (!regular) {
        for (unsigned mask = 1; mask < (1U << n); ++mask) {
            auto v = ProjectableVectorField::zero(n);
            bool any = false;
            for (int i = 0; i < n; ++i) {
                if ((mask >> i) & 1U) {
                    v.u[static_cast<std::size_t>(i)] = u.u[static_cast<std::size_t>(i)];
                    any = any || !u.u[static_cast<std::size_t>(i)].is_zero();
                }
            }
            if (!any) {
                continue;
            }
            const ZeroVerdict av = annihilator_check(L, v);
            if (!is_zero_class(av)) {
                continue;
            }
            const ZeroVerdict sv = is_zero(lie_derivative_lagrangian(L, u - v));
            if (is_zero_class(sv)) {
                report.symmetry_class = SymmetryClass::OnShellOnly;
                report.annihilator = v;
                report.verdict_confidence = combine(confidence, combine(av, sv));
                report.charge = noether_charge(L, u, report, opts.generator_name);
                return report;
            }
        }
    }
    report.symmetry_class = SymmetryClass::Broken;
    report.verdict_confidence = confidence == ZeroVerdict::ProvenZero ? ZeroVerdict::ProvenNonzero : confidence;
    return report;
}

ConservedQuantity noether_charge(const Lagrangian &L, const ProjectableVectorField &u, const SymmetryReport &report,
                                 const std::string &name)
{
    if (report.symmetry_class == SymmetryClass::Broken) {
        throw MathError("no conserved quantity for a broken symmetry");
    }
    const Expr contraction = contract_poincare_cartan(L, u);
    // Energy sign for connections, momentum sign for vertical fields.
    const Expr sign(u.is_connection() ? 1 : -1);
    ConservedQuantity q;
    q.name = name;
    q.space = PhaseSpace::Velocity;
    q.symmetry_function = -contraction;
    q.provenance = {u.to_string(), report.symmetry_class,
                    u.is_connection() ? "energy: stored as the symmetry function -u⌋H_L"
                                      : "momentum: stored as u⌋H_L, the negated symmetry function"};
    if (report.symmetry_class != SymmetryClass::Quasi) {
        q.expression = sign * q.symmetry_function;
        return q;
    }
    if (!report.potential) {
        throw MathError("quasi-symmetry report carries no potential");
    }
    if (report.sigma) {
        q.expression = sign * (q.symmetry_function + *report.sigma);
        q.provenance.note += "; corrected by the potential sigma = " + report.sigma->to_string();
    } else {
        q.expression = sign * q.symmetry_function;
        const Potential pot = *report.potential;
        const double s = u.is_connection() ? 1.0 : -1.0;
        q.numeric_correction = [pot, s](const Assignment &a) { return s * pot.evaluate(a); };
        q.provenance.note += "; corrected by a numeric-only potential";
    }
    return q;
}

ConservedQuantity energy_function(const Lagrangian &L, const ProjectableVectorField &gamma)
{
    if (!gamma.is_connection()) {
        throw MathError("energy function needs a connection (dt coefficient 1)");
    }
    ConservedQuantity q;
    q.name = "energy";
    q.symmetry_function = -contract_poincare_cartan(L, gamma);
    q.expression = q.symmetry_function;
    q.provenance = {gamma.to_string(), SymmetryClass::Strict, "energy function; conservation not asserted"};
    return q;
}

ConservedQuantity momentum_function(const Lagrangian &L, const ProjectableVectorField &v)
{
    if (v.is_connection()) {
        throw MathError("momentum function needs a vertical field (dt coefficient 0)");
    }
    ConservedQuantity q;
    q.name = "momentum";
    q.expression = contract_poincare_cartan(L, v);
    q.symmetry_function = -q.expression;
    q.provenance = {v.to_string(), SymmetryClass::Strict, "momentum; conservation not asserted"};
    return q;
}

TrivialityResult is_variationally_trivial(const Lagrangian &L)
{
    TrivialityResult out;
    for (const auto &e : euler_lagrange(L)) {
        out.verdict = combine(out.verdict, is_zero(e));
    }
    if (!is_zero_class(out.verdict)) {
        return out;
    }
    const int n = L.dimension;
    for (int i = 1; i <= n; ++i) {
        const Expr di = diff(L.density, Symbol::velocity(i));
        for (int j = 1; j <= n; ++j) {
            if (!diff(di, Symbol::velocity(j)).is_zero()) {
                return out;
            }
        }
    }
    Substitution rest;
    std::vector<Expr> b;
    for (int i = 1; i <= n; ++i) {
        rest[Symbol::velocity(i)] = Expr(0);
        b.push_back(diff(L.density, Symbol::velocity(i)));
    }
    out.phi = OneFormOnQ(substitute(L.density, rest), std::move(b));
    out.phi_closed = is_closed(*out.phi);
    return out;
}

ZeroVerdict annihilator_check(const Lagrangian &L, const ProjectableVectorField &v)
{
    if (v.is_connection()) {
        throw MathError("annihilator check needs a vertical field");
    }
    return is_zero(contract_poincare_cartan(L, v));
}

std::vector<Expr> solve_accelerations(const Lagrangian &L)
{
    const int n = L.dimension;
    ExprMatrix W(static_cast<std::size_t>(n), ExprVector(static_cast<std::size_t>(n)));
    ExprMatrix F(static_cast<std::size_t>(n), ExprVector(1));
    for (int i = 1; i <= n; ++i) {
        const Expr pi = diff(L.density, Symbol::velocity(i));
        std::vector<Expr> rhs{diff(L.density, Symbol::coord(i)), -diff(pi, Symbol::time())};
        for (int j = 1; j <= n; ++j) {
            W[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = diff(pi, Symbol::velocity(j));
            rhs.push_back(-(qt(j) * diff(pi, Symbol::coord(j))));
        }
        F[static_cast<std::size_t>(i - 1)][0] = add(rhs);
    }
    auto x = solve(std::move(W), std::move(F));
    if (!x) {
        throw MathError("degenerate Lagrangian: on-shell reduction unavailable (velocity Hessian is singular)");
    }
    std::vector<Expr> out;
    for (const auto &row : *x) {
        out.push_back(row[0]);
    }
    return out;
}

Expr on_shell_reduce(const Expr &e, const Lagrangian &L)
{
    if (!e.has_any([](const Symbol &s) { return s.kind == SymbolKind::Acceleration; })) {
        return e;
    }
    const auto acc = solve_accelerations(L);
    Substitution sub;
    for (int i = 1; i <= L.dimension; ++i) {
        sub[Symbol::acceleration(i)] = acc[static_cast<std::size_t>(i - 1)];
    }
    return substitute(e, sub);
}

namespace
{

bool is_polyexp(const Expr &e)
{
    auto jet = [](const Expr &x) { return x.has_any(is_jet_variable); };
    auto poly_arg = [](const Expr &a) {
        std::vector<Symbol> vars;
        for (const auto &s : a.free_symbols()) {
            if (is_jet_variable(s)) {
                vars.push_back(s);
            }
        }
        return polynomial_degree(a, vars) >= 0;
    };
    auto factor_ok = [&](const Expr &b, int k) {
        if (!jet(b)) {
            return true;
        }
        if (b.kind() == NodeKind::Symbol) {
            return k > 0;
        }
        return b.kind() == NodeKind::Func && b.func() == FuncKind::Exp && poly_arg(b.arg());
    };
    switch (e.kind()) {
        case NodeKind::Constant:
        case NodeKind::Symbol:
            return true;
        case NodeKind::Add:
            for (const auto &[t, c] : e.terms()) {
                if (!is_polyexp(t)) {
                    return false;
                }
            }
            return true;
        case NodeKind::Mul:
            for (const auto &[b, k] : e.factors()) {
                if (!factor_ok(b, k)) {
                    return false;
                }
            }
            return true;
        case NodeKind::Func:
            return factor_ok(e, 1);
    }
    return false;
}

void monomials(int nvars, int degree, std::vector<int> &current, std::vector<std::vector<int>> &out)
{
    if (static_cast<int>(current.size()) == nvars) {
        out.push_back(current);
        return;
    }
    int used = 0;
    for (int x : current) {
        used += x;
    }
    for (int k = 0; k + used <= degree; ++k) {
        current.push_back(k);
        monomials(nvars, degree, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<ProjectableVectorField> find_symmetries(const Lagrangian &L, const SymmetryAnsatz &ansatz)
{
    if (ansatz.u_t != 0 && ansatz.u_t != 1) {
        throw MathError("ansatz time component must be 0 or 1");
    }
    if (ansatz.degree < 0 || ansatz.degree > 3) {
        throw MathError("symmetry search degree must lie in 0..3");
    }
    if (!is_polyexp(L.density)) {
        throw MathError("unsupported expression class for the symmetry search (polynomial times exp() only): "
                        + L.density.to_string());
    }
    const int n = L.dimension;
    std::vector<std::vector<int>> exps;
    std::vector<int> cur;
    monomials(n + 1, ansatz.degree, cur, exps);
    std::vector<Expr> basis;
    for (const auto &ex : exps) {
        Expr m(1);
        m = m * pow(Expr(Symbol::time()), ex[0]);
        for (int i = 1; i <= n; ++i) {
            m = m * pow(Expr(Symbol::coord(i)), ex[static_cast<std::size_t>(i)]);
        }
        basis.push_back(m);
    }

    struct Column {
        int component; // 0-based; -1 for the ∂_t column
        Expr monomial;
    };
    std::vector<Column> columns;
    for (int i = 0; i < n; ++i) {
        for (const auto &m : basis) {
            columns.push_back({i, m});
        }
    }
    if (ansatz.u_t == 1) {
        columns.push_back({-1, Expr(1)});
    }

    std::map<Expr, ExprVector, ExprLess> rows;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        ProjectableVectorField f = ProjectableVectorField::zero(n);
        if (columns[c].component < 0) {
            f.u_t = 1;
        } else {
            f.u[static_cast<std::size_t>(columns[c].component)] = columns[c].monomial;
        }
        const Expr lambda = lie_derivative_lagrangian(L, f);
        for (auto &[key, coeff] : collect_by(lambda, is_jet_variable)) {
            auto [it, inserted] = rows.try_emplace(key, ExprVector(columns.size(), Expr(0)));
            it->second[c] = coeff;
        }
    }
    ExprMatrix A;
    for (auto &[key, row] : rows) {
        A.push_back(std::move(row));
    }
    const NullspaceResult ns = nullspace(std::move(A), columns.size());

    std::vector<ProjectableVectorField> connections;
    std::vector<ProjectableVectorField> vertical;
    for (const auto &vec : ns.basis) {
        std::vector<Expr> comp(static_cast<std::size_t>(n), Expr(0));
        Expr time_part(0);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].component < 0) {
                time_part = vec[c];
            } else {
                comp[static_cast<std::size_t>(columns[c].component)] += vec[c] * columns[c].monomial;
            }
        }
        if (time_part.is_zero()) {
            vertical.emplace_back(0, std::move(comp));
        } else {
            for (auto &x : comp) {
                x = x / time_part;
            }
            connections.emplace_back(1, std::move(comp));
        }
    }
    connections.insert(connections.end(), vertical.begin(), vertical.end());
    return connections;
}

} // namespace noether

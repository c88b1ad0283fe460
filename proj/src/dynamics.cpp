#include <noether/dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include <noether/compiled.hpp>
#include <noether/error.hpp>

namespace noether
{

namespace
{

std::vector<Symbol> parameters_of(const std::vector<Expr> &exprs)
{
    std::vector<Symbol> out;
    for (const auto &e : exprs) {
        for (const auto &s : e.free_symbols()) {
            if (s.kind == SymbolKind::Parameter && std::find(out.begin(), out.end(), s) == out.end()) {
                out.push_back(s);
            }
        }
    }
    return out;
}

struct CompiledSystem {
    std::vector<Symbol> slots; // t, state..., params...
    std::vector<CompiledExpr> rhs;
};

CompiledSystem compile(const std::vector<Symbol> &state, const std::vector<Expr> &rhs)
{
    CompiledSystem c;
    c.slots.push_back(Symbol::time());
    c.slots.insert(c.slots.end(), state.begin(), state.end());
    for (const auto &p : parameters_of(rhs)) {
        c.slots.push_back(p);
    }
    for (const auto &e : rhs) {
        c.rhs.emplace_back(e, c.slots);
    }
    return c;
}

// One RK4 step. The state update is accumulated with Kahan compensation
// (`carry` holds the lost low-order bits) so that long runs with tiny
// increments do not collect rounding drift.
void rk4_step(const CompiledSystem &c, std::vector<double> &slots, std::size_t dim, double h,
              std::vector<std::vector<double>> &k, std::vector<double> &carry)
{
    // slots[0] = t, slots[1..dim] = state.
    std::vector<double> y(slots.begin() + 1, slots.begin() + 1 + static_cast<std::ptrdiff_t>(dim));
    const double t = slots[0];
    auto stage = [&](std::size_t s, double dt, const std::vector<double> *prev, double w) {
        slots[0] = t + dt;
        for (std::size_t i = 0; i < dim; ++i) {
            slots[1 + i] = y[i] + (prev ? w * (*prev)[i] : 0.0);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            k[s][i] = c.rhs[i](slots);
        }
    };
    stage(0, 0, nullptr, 0);
    stage(1, h / 2, &k[0], h / 2);
    stage(2, h / 2, &k[1], h / 2);
    stage(3, h, &k[2], h);
    slots[0] = t + h;
    for (std::size_t i = 0; i < dim; ++i) {
        const double inc = h / 6 * (k[0][i] + 2 * k[1][i] + 2 * k[2][i] + k[3][i]) - carry[i];
        const double sum = y[i] + inc;
        carry[i] = (sum - y[i]) - inc;
        slots[1 + i] = sum;
    }
}

} // namespace

ODESystem to_first_order(const Lagrangian &L)
{
    const int n = L.dimension;
    ODESystem sys;
    sys.source = Formalism::Lagrange;
    sys.dimension = n;
    const auto acc = solve_accelerations(L);
    for (int i = 1; i <= n; ++i) {
        sys.state.push_back(Symbol::coord(i));
        sys.rhs.push_back(Expr(Symbol::velocity(i)));
    }
    for (int i = 1; i <= n; ++i) {
        sys.state.push_back(Symbol::velocity(i));
        sys.rhs.push_back(acc[static_cast<std::size_t>(i - 1)]);
    }
    return sys;
}

ODESystem to_first_order(const Hamiltonian &H)
{
    const int n = H.dimension;
    ODESystem sys;
    sys.source = Formalism::Hamilton;
    sys.dimension = n;
    const auto g = hamilton_vector_field(H);
    for (int i = 1; i <= n; ++i) {
        sys.state.push_back(Symbol::coord(i));
        sys.rhs.push_back(g.q_dot[static_cast<std::size_t>(i - 1)]);
    }
    for (int i = 1; i <= n; ++i) {
        sys.state.push_back(Symbol::momentum(i));
        sys.rhs.push_back(g.p_dot[static_cast<std::size_t>(i - 1)]);
    }
    return sys;
}

Trajectory integrate(const ODESystem &sys, const Assignment &ic, double t0, double t1, double h)
{
    if (!(h > 0) || !(t1 > t0)) {
        throw MathError("integration needs h > 0 and t1 > t0");
    }
    const CompiledSystem c = compile(sys.state, sys.rhs);
    const std::size_t dim = sys.state.size();
    std::vector<double> slots(c.slots.size());
    slots[0] = t0;
    for (std::size_t i = 1; i < c.slots.size(); ++i) {
        auto it = ic.find(c.slots[i]);
        if (it == ic.end()) {
            throw EvalError("initial conditions do not assign '" + c.slots[i].to_string() + "'");
        }
        slots[i] = it->second;
    }
    const auto steps = static_cast<std::size_t>(std::floor((t1 - t0) / h * (1 + 1e-12)));
    Trajectory traj;
    traj.state = sys.state;
    traj.h = h;
    for (const auto &[s, value] : ic) {
        if (s.kind == SymbolKind::Parameter) {
            traj.params[s] = value;
        }
    }
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(t0);
    traj.states.emplace_back(slots.begin() + 1, slots.begin() + 1 + static_cast<std::ptrdiff_t>(dim));
    std::vector<std::vector<double>> k(4, std::vector<double>(dim));
    std::vector<double> carry(dim, 0.0);
    for (std::size_t step = 1; step <= steps; ++step) {
        try {
            rk4_step(c, slots, dim, h, k, carry);
        } catch (const DomainError &) {
            throw BlowUpError(fmt::format("integration left the real domain near t = {:.17g}", traj.times.back()),
                              traj.times.back());
        }
        const double t = t0 + static_cast<double>(step) * h;
        std::vector<double> y(slots.begin() + 1, slots.begin() + 1 + static_cast<std::ptrdiff_t>(dim));
        for (double x : y) {
            if (!std::isfinite(x)) {
                throw BlowUpError(fmt::format("integration blew up at t = {:.17g}", t), t);
            }
        }
        slots[0] = t;
        traj.times.push_back(t);
        traj.states.push_back(std::move(y));
    }
    return traj;
}

std::vector<std::vector<double>> charge_samples(const Trajectory &traj, const std::vector<ConservedQuantity> &charges)
{
    std::vector<Symbol> slots{Symbol::time()};
    slots.insert(slots.end(), traj.state.begin(), traj.state.end());
    for (const auto &[s, v] : traj.params) {
        slots.push_back(s);
    }
    std::vector<CompiledExpr> compiled;
    for (const auto &q : charges) {
        try {
            compiled.emplace_back(q.expression, slots);
        } catch (const EvalError &e) {
            throw MathError("charge '" + q.name + "' does not fit the trajectory state: " + e.what());
        }
    }
    std::vector<double> values(slots.size());
    std::size_t j = 1 + traj.state.size();
    for (const auto &[s, v] : traj.params) {
        values[j++] = v;
    }
    std::vector<std::vector<double>> out(traj.size(), std::vector<double>(charges.size()));
    for (std::size_t row = 0; row < traj.size(); ++row) {
        values[0] = traj.times[row];
        std::copy(traj.states[row].begin(), traj.states[row].end(), values.begin() + 1);
        for (std::size_t c = 0; c < charges.size(); ++c) {
            double v = compiled[c](values);
            if (charges[c].numeric_correction) {
                v += charges[c].numeric_correction(traj.point(row));
            }
            out[row][c] = v;
        }
    }
    return out;
}

DriftStats drift_report(const Trajectory &traj, const std::vector<ConservedQuantity> &charges)
{
    const auto samples = charge_samples(traj, charges);
    DriftStats stats;
    for (std::size_t c = 0; c < charges.size(); ++c) {
        ChargeDrift d;
        d.name = charges[c].name;
        d.initial = samples.empty() ? 0.0 : samples[0][c];
        for (const auto &row : samples) {
            d.max_abs = std::max(d.max_abs, std::abs(row[c] - d.initial));
        }
        d.max_rel = d.max_abs / std::max(std::abs(d.initial), 1e-12);
        stats.charges.push_back(d);
    }
    return stats;
}

double flow_check(const Lagrangian &L, const ProjectableVectorField &u, const Assignment &params, double eps)
{
    const int n = L.dimension;
    const ProlongedField j1 = prolong1(u);
    // Flow state (t, q, q_t) in the jet coordinates.
    std::vector<Symbol> state{Symbol::time()};
    std::vector<Expr> rhs{Expr(u.u_t)};
    for (int i = 1; i <= n; ++i) {
        state.push_back(Symbol::coord(i));
        rhs.push_back(u.u[static_cast<std::size_t>(i - 1)]);
    }
    for (int i = 1; i <= n; ++i) {
        state.push_back(Symbol::velocity(i));
        rhs.push_back(j1.vel_components[static_cast<std::size_t>(i - 1)]);
    }
    // The flow is autonomous in its own parameter; t is part of the state.
    std::vector<Symbol> slots = state;
    for (const auto &p : parameters_of({L.density, lie_derivative_lagrangian(L, u)})) {
        slots.push_back(p);
    }
    for (const auto &p : parameters_of(rhs)) {
        if (std::find(slots.begin(), slots.end(), p) == slots.end()) {
            slots.push_back(p);
        }
    }
    std::vector<CompiledExpr> f;
    for (const auto &e : rhs) {
        f.emplace_back(e, slots);
    }
    const CompiledExpr lag(L.density, slots);
    const CompiledExpr lie(lie_derivative_lagrangian(L, u), slots);

    std::mt19937_64 rng(current_zero_test_config().seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t dim = state.size();
    const int substeps = 8;
    const double h = eps / substeps;
    double worst = 0;
    for (int sample = 0; sample < 20; ++sample) {
        std::vector<double> x(slots.size());
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = dist(rng);
        }
        for (std::size_t i = dim; i < slots.size(); ++i) {
            auto it = params.find(slots[i]);
            if (it == params.end()) {
                throw EvalError("flow check needs a value for parameter '" + slots[i].to_string() + "'");
            }
            x[i] = it->second;
        }
        const double l0 = lag(x);
        const double expected = lie(x);
        std::vector<double> y = x;
        std::vector<std::vector<double>> k(4, std::vector<double>(dim));
        for (int step = 0; step < substeps; ++step) {
            const std::vector<double> y0 = y;
            auto eval_stage = [&](int si, const std::vector<double> *prev, double w) {
                std::vector<double> z = y0;
                for (std::size_t i = 0; i < dim; ++i) {
                    z[i] += prev ? w * (*prev)[i] : 0.0;
                }
                for (std::size_t i = 0; i < dim; ++i) {
                    k[static_cast<std::size_t>(si)][i] = f[i](z);
                }
            };
            eval_stage(0, nullptr, 0);
            eval_stage(1, &k[0], h / 2);
            eval_stage(2, &k[1], h / 2);
            eval_stage(3, &k[2], h);
            for (std::size_t i = 0; i < dim; ++i) {
                y[i] = y0[i] + h / 6 * (k[0][i] + 2 * k[1][i] + 2 * k[2][i] + k[3][i]);
                if (!std::isfinite(y[i])) {
                    throw BlowUpError("flow blew up", y[0]);
                }
            }
        }
        worst = std::max(worst, std::abs((lag(y) - l0) / eps - expected));
    }
    return worst;
}

void write_csv(std::ostream &out, const Trajectory &traj, const std::vector<ConservedQuantity> &charges)
{
    const auto samples = charge_samples(traj, charges);
    std::string line = "t";
    for (const auto &s : traj.state) {
        line += "," + s.to_string();
    }
    for (const auto &c : charges) {
        line += "," + c.name;
    }
    out << line << '\n';
    for (std::size_t row = 0; row < traj.size(); ++row) {
        line = fmt::format("{:.17g}", traj.times[row]);
        for (double v : traj.states[row]) {
            line += fmt::format(",{:.17g}", v);
        }
        for (double v : samples[row]) {
            line += fmt::format(",{:.17g}", v);
        }
        out << line << '\n';
    }
}

} // namespace noether

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <noether/dynamics.hpp>
#include <noether/error.hpp>
#include <noether/legendre.hpp>

#include "support.hpp"

using namespace noether;
using namespace noether::testing;

namespace
{

ProjectableVectorField field(const char *text, int n = 1)
{
    return parse_vector_field(text, n, {"k", "v", "m", "w", "c"});
}

Lagrangian lag(const char *text, int n = 1)
{
    return Lagrangian(E(text, n), n);
}

Hamiltonian ham(const char *text, int n = 1)
{
    return Hamiltonian(E(text, n), n);
}

Assignment ic(std::initializer_list<std::pair<const Symbol, double>> values)
{
    return Assignment(values);
}

const Symbol k = Symbol::parameter("k");
const Symbol w = Symbol::parameter("w");
const Symbol v = Symbol::parameter("v");

} // namespace

TEST_CASE("first-order reductions")
{
    const auto fr = to_first_order(lag("1/2*exp(k*t)*q1_t^2"));
    REQUIRE(fr.state.size() == 2);
    CHECK(fr.rhs[0] == qt(1));
    CHECK(fr.rhs[1] == E("-k*q1_t"));
    const auto h = to_first_order(ham("1/2*exp(-k*t)*p1^2"));
    CHECK(h.state[1] == Symbol::momentum(1));
    CHECK(h.rhs[0] == E("exp(-k*t)*p1"));
    CHECK(h.rhs[1] == Expr(0));
    CHECK(to_first_order(lag("1/2*q1_t^2")).rhs[1] == Expr(0));
    CHECK_THROWS_AS(to_first_order(lag("1/2*q1_t^2", 2)), MathError);
}

TEST_CASE("RK4 is exact on linear motion")
{
    const auto sys = to_first_order(lag("1/2*q1_t^2"));
    const auto traj = integrate(sys, ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 1.0}}), 0, 1, 0.1);
    CHECK(traj.size() == 11);
    CHECK(std::abs(traj.states.back()[0] - 1.0) < 1e-14);
    CHECK(traj.times.back() == doctest::Approx(1.0));
}

TEST_CASE("row count follows floor((t1 - t0)/h) + 1")
{
    const auto sys = to_first_order(lag("1/2*q1_t^2"));
    const auto a = ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 1.0}});
    CHECK(integrate(sys, a, 0, 1, 0.3).size() == 4);
    CHECK(integrate(sys, a, 0, 10, 1e-3).size() == 10001);
    CHECK(integrate(sys, a, -1, 1, 0.25).size() == 9);
}

TEST_CASE("friction velocity decays exponentially")
{
    const auto sys = to_first_order(lag("1/2*exp(k*t)*q1_t^2"));
    const auto traj =
        integrate(sys, ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 1.0}, {k, 1.0}}), 0, 5, 1e-3);
    const double expected = std::exp(-5.0);
    CHECK(std::abs(traj.states.back()[1] - expected) / expected < 1e-10);
    CHECK(traj.states.back()[0] == doctest::Approx(1 - expected).epsilon(1e-10));
}

TEST_CASE("harmonic oscillator returns after one period")
{
    const auto sys = to_first_order(lag("1/2*q1_t^2 - 1/2*w^2*q1^2"));
    const double T = 2 * std::numbers::pi;
    // Choose h so that the period is an exact multiple of the step.
    const double h = T / 6284;
    const auto traj = integrate(sys, ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 0.0}, {w, 1.0}}), 0, T, h);
    CHECK(std::abs(traj.states.back()[0] - 1.0) < 1e-9);
}

TEST_CASE("integration errors")
{
    const auto sys = to_first_order(lag("1/2*exp(k*t)*q1_t^2"));
    CHECK_THROWS_AS(integrate(sys, ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 1.0}}), 0, 1, 0.1), EvalError);
    CHECK_THROWS_AS(integrate(sys, ic({{Symbol::coord(1), 0.0}}), 0, 1, -0.1), MathError);
    // q1*p1 is conserved and q1 grows like exp(200 t) until it overflows.
    const auto blow = to_first_order(ham("q1^2*p1^2"));
    try {
        integrate(blow, ic({{Symbol::coord(1), 10.0}, {Symbol::momentum(1), 10.0}}), 0, 10, 1e-3);
        FAIL("expected blow-up");
    } catch (const BlowUpError &e) {
        CHECK(e.time() > 0);
        CHECK(e.time() < 10);
    }
}

TEST_CASE("RK4 global error shrinks by about 16 under step halving")
{
    const auto sys = to_first_order(lag("1/2*q1_t^2 - 1/2*w^2*q1^2"));
    const auto a = ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 0.0}, {w, 1.0}});
    auto error = [&](double h) {
        const auto traj = integrate(sys, a, 0, 2, h);
        return std::abs(traj.states.back()[0] - std::cos(traj.times.back()));
    };
    const double ratio = error(0.02) / error(0.01);
    CHECK(ratio >= 12);
    CHECK(ratio <= 20);
}

TEST_CASE("drift of conserved charges")
{
    const auto L = lag("1/2*exp(k*t)*q1_t^2");
    const auto report = symmetry_classify(L, field("dt - k/2*q1 dq1"));
    const auto traj = integrate(to_first_order(L),
                                ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 1.0}, {k, 0.5}}), 0, 10, 1e-3);
    const auto stats = drift_report(traj, {*report.charge});
    CHECK(stats.charges[0].max_rel < 1e-8);
    CHECK(stats.charges[0].max_abs >= 0);

    const auto free1 = lag("1/2*q1_t^2");
    const auto boost = symmetry_classify(free1, field("v*t dq1"));
    const auto ftraj = integrate(to_first_order(free1),
                                 ic({{Symbol::coord(1), 0.3}, {Symbol::velocity(1), -1.2}, {v, 1.0}}), 0, 10, 1e-3);
    CHECK(drift_report(ftraj, {*boost.charge}).charges[0].max_abs < 1e-12);

    ConservedQuantity one;
    one.name = "one";
    one.expression = Expr(1);
    const auto s = drift_report(ftraj, {one});
    CHECK(s.charges[0].max_abs == 0.0);
    CHECK(s.charges[0].max_rel == 0.0);

    ConservedQuantity bad;
    bad.name = "bad";
    bad.expression = pm(1);
    CHECK_THROWS_AS(drift_report(ftraj, {bad}), MathError);
}

TEST_CASE("guarded relative drift for charges starting at zero")
{
    const auto free1 = lag("1/2*q1_t^2");
    const auto traj =
        integrate(to_first_order(free1), ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 0.0}}), 0, 1, 0.1);
    const auto m = momentum_function(free1, field("dq1"));
    const auto s = drift_report(traj, {m});
    CHECK(s.charges[0].initial == 0.0);
    CHECK(std::isfinite(s.charges[0].max_rel));
}

TEST_CASE("drift orders under step halving")
{
    // For a linear oscillator RK4 multiplies the energy by |R(iwh)|^2 =
    // 1 - (wh)^6/72 + ... per step, so the energy drift is fifth order. The
    // charge of cos(w t) dq1 measures the phase of the solution and inherits
    // the fourth-order phase error.
    const auto L = lag("1/2*q1_t^2 - 1/2*w^2*q1^2");
    const auto energy = symmetry_classify(L, field("dt")).charge;
    const auto quasi = symmetry_classify(L, field("cos(w*t) dq1")).charge;
    REQUIRE(energy.has_value());
    REQUIRE(quasi.has_value());
    const auto sys = to_first_order(L);
    auto drift = [&](double h, const ConservedQuantity &c) {
        const auto traj = integrate(sys, ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 0.0}, {w, 10.0}}), 0, 10, h);
        return drift_report(traj, {c}).charges[0].max_abs;
    };
    const double e = drift(2e-3, *energy) / drift(1e-3, *energy);
    CHECK(e == doctest::Approx(32).epsilon(0.05));
    const double q = drift(2e-3, *quasi) / drift(1e-3, *quasi);
    CHECK(q >= 12);
    CHECK(q <= 20);
}

TEST_CASE("Lagrange and Hamilton trajectories agree")
{
    const auto L = lag("1/2*exp(k*t)*q1_t^2");
    const auto H = associated_hamiltonian(L);
    const Assignment lic = ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 1.0}, {k, 0.5}});
    const auto lt = integrate(to_first_order(L), lic, 0, 10, 1e-3);
    // p(0) = exp(0)*q_t(0).
    const auto ht = integrate(to_first_order(H), ic({{Symbol::coord(1), 1.0}, {Symbol::momentum(1), 1.0}, {k, 0.5}}),
                              0, 10, 1e-3);
    double worst = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
        worst = std::max(worst, std::abs(lt.states[i][0] - ht.states[i][0]));
    }
    CHECK(worst < 1e-8);
    // Mapped Lagrange solution satisfies the Hamilton equation p_t = 0.
    const auto mapped = map_solution(L, lt);
    for (const auto &row : mapped.states) {
        CHECK(std::abs(row[1] - 1.0) < 1e-9);
    }
}

TEST_CASE("flow check")
{
    const auto friction = lag("1/2*exp(k*t)*q1_t^2");
    const Assignment params{{k, 0.5}, {v, 1.0}};
    const double a = flow_check(friction, field("dt - k/2*q1 dq1"), params, 1e-4);
    CHECK(a < 5e-4);
    const double b = flow_check(lag("1/2*q1_t^2"), field("v*t dq1"), params, 1e-4);
    CHECK(b < 5e-4);
    // First-order convergence in eps for a field with second-order effects.
    const auto L = lag("1/2*q1_t^2 - 1/2*q1^2*q1_t");
    const auto u = field("q1^2 dq1 + t dq1");
    const double e1 = flow_check(L, u, params, 1e-3);
    const double e2 = flow_check(L, u, params, 5e-4);
    CHECK(e1 / e2 >= 1.5);
    CHECK(e1 / e2 <= 2.5);
}

TEST_CASE("CSV output")
{
    const auto free1 = lag("1/2*q1_t^2");
    const auto traj =
        integrate(to_first_order(free1), ic({{Symbol::coord(1), 0.0}, {Symbol::velocity(1), 1.0}}), 0, 0.2, 0.1);
    auto m = momentum_function(free1, field("dq1"));
    m.name = "momentum";
    std::ostringstream out;
    write_csv(out, traj, {m});
    CHECK(out.str() == "t,q1,q1_t,momentum\n0,0,1,1\n0.10000000000000001,0.10000000000000001,1,1\n"
                       "0.20000000000000001,0.20000000000000001,1,1\n");
    std::ostringstream again;
    write_csv(again, traj, {m});
    CHECK(again.str() == out.str());
}

TEST_CASE("friction drift run finishes quickly")
{
    const auto start = std::chrono::steady_clock::now();
    const auto L = lag("1/2*exp(k*t)*q1_t^2");
    const auto report = symmetry_classify(L, field("dt - k/2*q1 dq1"));
    const auto traj = integrate(to_first_order(L),
                                ic({{Symbol::coord(1), 1.0}, {Symbol::velocity(1), 1.0}, {k, 0.5}}), 0, 10, 1e-3);
    drift_report(traj, {*report.charge});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(secs < 2.0);
}

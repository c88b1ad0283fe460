#include <doctest.h>

#include <random>

#include <noether/error.hpp>
#include <noether/hamiltonian.hpp>

#include "support.hpp"

using namespace noether;
using namespace noether::testing;

namespace
{

ProjectableVectorField field(const char *text, int n = 1)
{
    return parse_vector_field(text, n, {"k", "v", "m", "w", "c"});
}

Hamiltonian ham(const char *text, int n = 1)
{
    return Hamiltonian(E(text, n), n);
}

const Hamiltonian friction = ham("1/2*exp(-k*t)*p1^2");
const Hamiltonian free1 = ham("1/2*p1^2");

std::vector<Symbol> phase_vars(int n)
{
    std::vector<Symbol> v{Symbol::time()};
    for (int i = 1; i <= n; ++i) {
        v.push_back(Symbol::coord(i));
        v.push_back(Symbol::momentum(i));
    }
    return v;
}

std::vector<Symbol> base_vars(int n)
{
    std::vector<Symbol> v{Symbol::time()};
    for (int i = 1; i <= n; ++i) {
        v.push_back(Symbol::coord(i));
    }
    return v;
}

ProjectableVectorField random_field(std::mt19937_64 &rng, int n, int ut)
{
    std::vector<Expr> c;
    for (int i = 0; i < n; ++i) {
        c.push_back(random_polynomial(rng, base_vars(n), 2));
    }
    return {ut, c};
}

} // namespace

TEST_CASE("Hamiltonian rejects foreign symbols")
{
    CHECK_THROWS_AS(ham("q1_t*p1"), MathError);
    CHECK_THROWS_AS(ham("p + p1"), MathError);
    CHECK_THROWS_AS(Hamiltonian(E("p2", 2), 1), MathError);
}

TEST_CASE("Hamilton vector field examples")
{
    const auto a = hamilton_vector_field(free1);
    CHECK(a.q_dot[0] == pm(1));
    CHECK(a.p_dot[0] == Expr(0));
    const auto b = hamilton_vector_field(ham("1/2*p1^2 + 1/2*q1^2"));
    CHECK(b.q_dot[0] == pm(1));
    CHECK(b.p_dot[0] == -q(1));
    const auto c = hamilton_vector_field(friction);
    CHECK(c.q_dot[0] == E("exp(-k*t)*p1"));
    CHECK(c.p_dot[0] == Expr(0));
}

TEST_CASE("Hamilton vector field annihilates dH along the flow")
{
    // dt⌋γ = 1 by construction; γ⌋(dp∧dq - d𝓗∧dt) = 0 reduces to
    // q_dot·∂_q𝓗 + p_dot·∂_p𝓗 = 0 component-wise.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 2;
        const Hamiltonian H(random_polynomial(rng, phase_vars(n), 3), n);
        const auto g = hamilton_vector_field(H);
        std::vector<Expr> parts;
        for (int i = 1; i <= n; ++i) {
            parts.push_back(g.q_dot[static_cast<std::size_t>(i - 1)] * diff(H.density, Symbol::coord(i)));
            parts.push_back(g.p_dot[static_cast<std::size_t>(i - 1)] * diff(H.density, Symbol::momentum(i)));
        }
        CHECK(add(parts).is_zero());
    }
}

TEST_CASE("Hamilton equations")
{
    const auto a = hamilton_equations(free1);
    CHECK(a[0] == E("q1_t - p1"));
    CHECK(a[1] == E("p1_t"));
    const auto z = hamilton_equations(ham("0"));
    CHECK(z[0] == qt(1));
    CHECK(z[1] == E("p1_t"));
    // p1_t = 0 for the friction image: p1 = exp(k t) q1_t is a first integral.
    const auto f = hamilton_equations(friction);
    CHECK(f[1] == E("p1_t"));
    CHECK(verify_first_integral(friction, pm(1)) == ZeroVerdict::ProvenZero);
}

TEST_CASE("Lagrangian of H")
{
    CHECK(lagrangian_of_H(free1).density == E("p1*q1_t - 1/2*p1^2"));
    CHECK(lagrangian_of_H(ham("0")).density == E("p1*q1_t"));
    const auto el = euler_lagrange(lagrangian_of_H(free1));
    CHECK(el[1] == E("q1_t - p1"));
    CHECK(el[0] == E("-p1_t"));
}

TEST_CASE("EL of L_H equals the Hamilton equations on random Hamiltonians")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 2;
        const Hamiltonian H(random_polynomial(rng, phase_vars(n), 3), n);
        const auto LH = lagrangian_of_H(H);
        CHECK(verify_hamilton_lagrangian(LH.density, H) == ZeroVerdict::ProvenZero);
        const Hamiltonian perturbed(H.density + q(1) * pm(1), n);
        CHECK(verify_hamilton_lagrangian(LH.density, perturbed) == ZeroVerdict::ProvenNonzero);
    }
}

TEST_CASE("Lie derivative of the Hamiltonian form")
{
    CHECK(lie_derivative_hamiltonian(friction, field("dt - k/2*q1 dq1")).is_zero());
    CHECK(lie_derivative_hamiltonian(ham("1/2*p1^2 + t"), field("dq1")).is_zero());
    CHECK(lie_derivative_hamiltonian(free1, field("v*t dq1")) == E("v*p1"));
}

TEST_CASE("pull-back relation and Hamiltonian first variation on random data")
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 2;
        const Hamiltonian H(random_polynomial(rng, phase_vars(n), 3), n);
        const auto u = random_field(rng, n, trial % 3 == 0 ? 1 : 0);
        CHECK(is_zero_class(verify_pullback_relation(H, u)));
        CHECK(is_zero_class(verify_first_variation_hamiltonian(H, u)));
    }
    CHECK(verify_pullback_relation(free1, field("dq1")) == ZeroVerdict::ProvenZero);
    CHECK(is_zero_class(verify_pullback_relation(friction, field("dt - k/2*q1 dq1"))));
}

TEST_CASE("negative controls for the Hamiltonian identities")
{
    const auto LH = lagrangian_of_H(free1);
    const Hamiltonian wrong = ham("1/2*p1^2 + q1^2");
    CHECK(verify_pullback_relation(LH.density, wrong, field("dq1")) == ZeroVerdict::ProvenNonzero);
    CHECK(verify_first_variation_hamiltonian(LH.density, wrong, field("dq1")) == ZeroVerdict::ProvenNonzero);
    CHECK(verify_gamma_bracket(free1, q(1), wrong) == ZeroVerdict::ProvenZero);
    CHECK(verify_gamma_bracket(free1, pm(1), wrong) == ZeroVerdict::ProvenNonzero);
}

TEST_CASE("Hamiltonian symmetry classification")
{
    const auto gamma = field("dt - k/2*q1 dq1");
    const auto fr = symmetry_classify_hamiltonian(friction, gamma);
    CHECK(fr.symmetry_class == SymmetryClass::Strict);
    REQUIRE(fr.charge.has_value());
    CHECK(fr.charge->expression == -E("1/2*exp(-k*t)*p1^2 + k/2*p1*q1"));
    CHECK(fr.charge->space == PhaseSpace::Momentum);
    CHECK(verify_first_integral(friction, fr.charge->expression) == ZeroVerdict::ProvenZero);

    const auto mom = symmetry_classify_hamiltonian(ham("1/2*p1^2 + t"), field("dq1"));
    CHECK(mom.symmetry_class == SymmetryClass::Strict);
    CHECK(mom.charge->expression == pm(1));

    const auto boost = symmetry_classify_hamiltonian(free1, field("v*t dq1"));
    CHECK(boost.symmetry_class == SymmetryClass::Broken);
    CHECK_FALSE(boost.charge.has_value());
}

TEST_CASE("Hamiltonian quasi-symmetry with a time function")
{
    const auto H = ham("1/2*p1^2 + c*t");
    const auto r = symmetry_classify_hamiltonian(H, field("dt"));
    CHECK(r.lie_derivative == -param("c"));
    CHECK(r.symmetry_class == SymmetryClass::Quasi);
    REQUIRE(r.time_function.has_value());
    CHECK(*r.time_function == E("-c*t"));
    REQUIRE(r.charge.has_value());
    CHECK(r.charge->expression == E("-1/2*p1^2"));
    CHECK(verify_first_integral(H, r.charge->expression) == ZeroVerdict::ProvenZero);

    // Non-integrable time function: only numeric.
    const auto H2 = ham("1/2*p1^2 + sin(t^2)");
    const auto r2 = symmetry_classify_hamiltonian(H2, field("dt"));
    CHECK(r2.symmetry_class == SymmetryClass::Quasi);
    REQUIRE(r2.charge.has_value());
    CHECK_FALSE(r2.charge->is_symbolic());
    // Along any solution p1 is constant, so the charge is -p1^2/2.
    for (double t : {0.0, 0.5, 1.5}) {
        Assignment a{{Symbol::time(), t}, {Symbol::coord(1), 0.3 + 2 * t}, {Symbol::momentum(1), 2.0}};
        CHECK(r2.charge->evaluate(a) == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("Hamiltonian energy function")
{
    CHECK(energy_function_hamiltonian(free1, field("dt")).expression == E("1/2*p1^2"));
    CHECK(energy_function_hamiltonian(friction, field("dt - k/2*q1 dq1")).expression
          == E("1/2*exp(-k*t)*p1^2 + k/2*p1*q1"));
    const auto H = ham("q1^3*p1 + exp(t)*p1^2");
    CHECK(energy_function_hamiltonian(H, field("dt + c dq1")).expression == H.density - param("c") * pm(1));
    CHECK_THROWS_AS(energy_function_hamiltonian(free1, field("dq1")), MathError);
}

TEST_CASE("homogeneous Poisson bracket")
{
    CHECK(poisson_bracket_T(pm(1), q(1), 1) == Expr(1));
    const Expr f = E("p*q1 + t*p1^2");
    CHECK(poisson_bracket_T(f, f, 1).is_zero());
    CHECK(poisson_bracket_T(E("p + 1/2*p1^2"), q(1), 1) == pm(1));
    CHECK(homogeneous_context(free1).bold_H == E("p + 1/2*p1^2"));
}

TEST_CASE("bracket antisymmetry and Leibniz rule")
{
    std::mt19937_64 rng(47);
    auto vars = phase_vars(2);
    vars.push_back(Symbol::homogeneous_momentum());
    for (int trial = 0; trial < 30; ++trial) {
        const Expr f = random_polynomial(rng, vars, 3);
        const Expr g = random_polynomial(rng, vars, 3);
        const Expr h = random_polynomial(rng, vars, 2);
        CHECK(is_zero_class(is_zero(poisson_bracket_T(f, g, 2) + poisson_bracket_T(g, f, 2))));
        CHECK(is_zero_class(is_zero(poisson_bracket_T(f, g * h, 2)
                                    - (poisson_bracket_T(f, g, 2) * h + g * poisson_bracket_T(f, h, 2)))));
    }
}

TEST_CASE("gamma action equals the bracket with p + H")
{
    CHECK(verify_gamma_bracket(free1, q(1)) == ZeroVerdict::ProvenZero);
    CHECK(verify_gamma_bracket(friction, Expr(1)) == ZeroVerdict::ProvenZero);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 2;
        const Hamiltonian H(random_polynomial(rng, phase_vars(n), 3), n);
        CHECK(is_zero_class(verify_gamma_bracket(H, random_expression(rng, phase_vars(n), 3))));
    }
}

TEST_CASE("strict Hamiltonian charges are first integrals")
{
    const std::vector<std::pair<Hamiltonian, ProjectableVectorField>> cases{
        {friction, field("dt - k/2*q1 dq1")},
        {free1, field("dq1")},
        {free1, field("dt")},
        {ham("1/2*(p1^2 + p2^2) + 1/2*(q1^2 + q2^2)", 2), field("-q2 dq1 + q1 dq2", 2)},
        {ham("1/2*(p1^2 + p2^2) + 1/2*(q1^2 + q2^2)", 2), field("dt", 2)},
    };
    for (const auto &[H, u] : cases) {
        const auto r = symmetry_classify_hamiltonian(H, u);
        CHECK(r.symmetry_class == SymmetryClass::Strict);
        REQUIRE(r.charge.has_value());
        CHECK(is_zero_class(verify_first_integral(H, r.charge->expression)));
    }
}

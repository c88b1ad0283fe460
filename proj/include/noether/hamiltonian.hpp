#pragma once

#include <string>
#include <vector>

#include <noether/expr.hpp>
#include <noether/jet.hpp>
#include <noether/lagrangian.hpp>
#include <noether/zero_test.hpp>

namespace noether
{

// H = p_i dq^i - 𝓗 dt on V*Q, stored as 𝓗(t, q, p).
struct Hamiltonian {
    Expr density;
    int dimension = 1;

    Hamiltonian() = default;
    // Throws MathError on velocities, accelerations, the homogeneous momentum
    // or momentum jets in the density, or indices beyond `n`.
    Hamiltonian(Expr density, int n);
};

// γ_H = ∂_t + ∂^i𝓗 ∂_i - ∂_i𝓗 ∂^i.
struct HamiltonVectorField {
    std::vector<Expr> q_dot;
    std::vector<Expr> p_dot;
};

// 𝐇 = p + 𝓗 on T*Q, p being the homogeneous momentum.
struct HomogeneousContext {
    Expr bold_H;
};

HomogeneousContext homogeneous_context(const Hamiltonian &H);

HamiltonVectorField hamilton_vector_field(const Hamiltonian &H);

// {q_t^i - ∂^i𝓗} followed by {p_ti + ∂_i𝓗}.
std::vector<Expr> hamilton_equations(const Hamiltonian &H);

// L_H = (p_i q_t^i - 𝓗) dt over the momentum-extended jet frame.
struct PhaseLagrangian {
    Expr density;
    int dimension = 1;
};

// Builds L_H and checks that its Euler-Lagrange operator reproduces the
// Hamilton equations; throws MathError if not.
PhaseLagrangian lagrangian_of_H(const Hamiltonian &H);

// Euler-Lagrange components of a phase Lagrangian, q-variations first.
std::vector<Expr> euler_lagrange(const PhaseLagrangian &LH);

// Verdict of "the Euler-Lagrange operator of `lh_density` equals the Hamilton
// equations of H" (𝓔_{q_i} = -(p_ti + ∂_i𝓗), 𝓔_{p^i} = q_t^i - ∂^i𝓗).
ZeroVerdict verify_hamilton_lagrangian(const Expr &lh_density, const Hamiltonian &H);

// Density of 𝐋_ũH = ∂_t(p_i u^i - u^t𝓗) - u^i∂_i𝓗 + ∂_iu^j p_j ∂^i𝓗.
Expr lie_derivative_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u);

// Density of 𝐋_{J¹ũ}L_H with the canonical lift as the base field.
Expr lie_derivative_phase_lagrangian(const Expr &lh_density, const ProjectableVectorField &u);

// 𝐋_ũH = 𝐋_{J¹ũ}L_H. The two-argument form uses L_H of the same H.
ZeroVerdict verify_pullback_relation(const Hamiltonian &H, const ProjectableVectorField &u);
ZeroVerdict verify_pullback_relation(const Expr &lh_density, const Hamiltonian &H, const ProjectableVectorField &u);

// 𝐋_{J¹ũ}L_H + (u^i - u^t q_t^i)(p_ti + ∂_i𝓗) + (p_j ∂_iu^j + u^t p_ti)(q_t^i - ∂^i𝓗)
//   + d_t(u^t𝓗 - u^i p_i) ≡ 0.
ZeroVerdict verify_first_variation_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u);
ZeroVerdict verify_first_variation_hamiltonian(const Expr &lh_density, const Hamiltonian &H,
                                               const ProjectableVectorField &u);

// Strict if 𝐋_ũH vanishes, Quasi if it is a function of time only
// (f = ∫Λ dt), Broken otherwise. Charge: u^i p_i - u^t𝓗 - f.
SymmetryReport symmetry_classify_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u,
                                             const std::string &name = "u");

// 𝒯_u = u^t𝓗 - u^i p_i.
Expr symmetry_function_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &u);

// 𝓗_Γ = 𝓗 - p_i Γ^i. Throws MathError for vertical fields.
ConservedQuantity energy_function_hamiltonian(const Hamiltonian &H, const ProjectableVectorField &gamma);

// {f, g}_T = ∂^p f ∂_t g + ∂^i f ∂_i g - ∂_t f ∂^p g - ∂_i f ∂^i g.
Expr poisson_bracket_T(const Expr &f, const Expr &g, int n);

// γ_H(f) = ∂_t f + ∂^i𝓗 ∂_i f - ∂_i𝓗 ∂^i f.
Expr gamma_action(const Hamiltonian &H, const Expr &f);

// γ_H(f) = {p + 𝓗', f}_T with 𝓗' = 𝓗 unless given.
ZeroVerdict verify_gamma_bracket(const Hamiltonian &H, const Expr &f);
ZeroVerdict verify_gamma_bracket(const Hamiltonian &H, const Expr &f, const Hamiltonian &bracket_source);

// {p + 𝓗, f}_T = 0.
ZeroVerdict verify_first_integral(const Hamiltonian &H, const Expr &f);

} // namespace noether

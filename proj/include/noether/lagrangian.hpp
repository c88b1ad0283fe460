#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <noether/expr.hpp>
#include <noether/jet.hpp>
#include <noether/zero_test.hpp>

namespace noether
{

// L = 𝓛(t, q, q_t) dt, stored as its density.
struct Lagrangian {
    Expr density;
    int dimension = 1;

    Lagrangian() = default;
    // Throws MathError if the density involves accelerations, momenta, or
    // coordinates beyond `n`.
    Lagrangian(Expr density, int n);
};

// H_L = L + ∂^t_i𝓛 θ^i, by components.
struct PoincareCartanForm {
    Expr lagrangian_part;
    std::vector<Expr> momenta_part;
};

enum class SymmetryClass { Strict, Quasi, OnShellOnly, Broken };
std::string to_string(SymmetryClass c);

enum class PhaseSpace { Velocity, Momentum };

struct Provenance {
    std::string generator;
    SymmetryClass symmetry_class = SymmetryClass::Strict;
    std::string note;
};

// A conserved quantity together with the symmetry function it came from.
//
// Sign convention: `expression` is chosen so that d_t(expression) ≈ 0 reads
// as conservation of an energy (for connections, u^t = 1) or of a momentum
// (for vertical fields). `symmetry_function` keeps the textbook symmetry
// function (-u⌋H_L on velocity space, u^t𝓗 - u^i p_i on momentum space)
// without the quasi-symmetry correction.
struct ConservedQuantity {
    std::string name;
    Expr expression;
    Expr symmetry_function;
    PhaseSpace space = PhaseSpace::Velocity;
    Provenance provenance;
    // Non-empty when part of the charge (σ or f) has no closed form; the
    // charge value is eval(expression) + numeric_correction(point).
    std::function<double(const Assignment &)> numeric_correction;

    bool is_symbolic() const
    {
        return !numeric_correction;
    }
    double evaluate(const Assignment &point) const;
};

struct SymmetryReport {
    SymmetryClass symmetry_class = SymmetryClass::Broken;
    Expr lie_derivative;
    // Quasi (Lagrangian side): 𝐋_{J¹u}L = h0(φ), φ = dσ.
    std::optional<OneFormOnQ> phi;
    std::optional<Expr> sigma;
    std::optional<Potential> potential;
    // Quasi (Hamiltonian side): 𝐋_ũH = ∂_t f(t) dt.
    std::optional<Expr> time_function;
    // OnShellOnly (degenerate case): the annihilator part v of u = u0 + v.
    std::optional<ProjectableVectorField> annihilator;
    std::optional<ConservedQuantity> charge;
    ZeroVerdict verdict_confidence = ZeroVerdict::ProvenZero;
};

// Generic machinery over a jet frame; the Lagrangian operations below use the
// configuration frame, the Hamiltonian module uses the momentum-extended one.
struct FrameVectorField {
    int u_t = 0;
    std::vector<Expr> components;
};

std::vector<Expr> euler_lagrange(const Expr &density, const JetFrame &frame);
Expr lie_derivative(const Expr &density, const FrameVectorField &u, const JetFrame &frame);

// 𝓔_i = ∂_i𝓛 - d_t ∂^t_i𝓛.
std::vector<Expr> euler_lagrange(const Lagrangian &L);

PoincareCartanForm poincare_cartan(const Lagrangian &L);

// Density of 𝐋_{J¹u}L = (u^t∂_t + u^i∂_i + d_t u^i ∂^t_i)𝓛.
Expr lie_derivative_lagrangian(const Lagrangian &L, const ProjectableVectorField &u);

// u⌋H_L = u^t𝓛 + (u^i - u^t q_t^i)∂^t_i𝓛.
Expr contract_poincare_cartan(const Lagrangian &L, const ProjectableVectorField &u);

struct FirstVariation {
    Expr euler_term;
    Expr boundary_term;
    ZeroVerdict residual_verdict = ZeroVerdict::ProvenZero;
};

// 𝐋_{J¹u}L = (u^i - u^t q_t^i)𝓔_i + d_t(u⌋H_L), checked as a residual.
FirstVariation first_variational_check(const Lagrangian &L, const ProjectableVectorField &u);

struct ClassifyOptions {
    std::string generator_name = "u";
    std::optional<BasePoint> base_point;
};

SymmetryReport symmetry_classify(const Lagrangian &L, const ProjectableVectorField &u,
                                 const ClassifyOptions &opts = {});

// Throws MathError if the report class is Broken, or Quasi without φ.
ConservedQuantity noether_charge(const Lagrangian &L, const ProjectableVectorField &u, const SymmetryReport &report,
                                 const std::string &name = "u");

// 𝔗_Γ = (q_t^i - Γ^i)∂^t_i𝓛 - 𝓛. Throws MathError for vertical fields.
ConservedQuantity energy_function(const Lagrangian &L, const ProjectableVectorField &gamma);

// v^i ∂^t_i𝓛 (= -𝔗_v). Throws MathError for connections.
ConservedQuantity momentum_function(const Lagrangian &L, const ProjectableVectorField &v);

struct TrivialityResult {
    ZeroVerdict verdict = ZeroVerdict::ProvenZero;
    std::optional<OneFormOnQ> phi;
    std::optional<ZeroVerdict> phi_closed;
};

TrivialityResult is_variationally_trivial(const Lagrangian &L);

// Verdict of v^i ∂^t_i𝓛 = 0. Throws MathError for connections.
ZeroVerdict annihilator_check(const Lagrangian &L, const ProjectableVectorField &v);

// Accelerations q_tt = W^{-1} F solving 𝓔 = 0, W the velocity Hessian.
// Throws MathError("degenerate Lagrangian ...") when W has no symbolic
// inverse.
std::vector<Expr> solve_accelerations(const Lagrangian &L);

// Eliminates accelerations from `e` using the Lagrange equations.
Expr on_shell_reduce(const Expr &e, const Lagrangian &L);

struct SymmetryAnsatz {
    int u_t = 0;
    int degree = 1;
};

// Strict symmetries with polynomial components of degree <= ansatz.degree in
// (t, q). For u_t = 1 the first returned field (if any) is a connection and
// the rest are vertical; each vertical field can be added to it.
// Throws MathError for densities outside polynomial x exp(...) in the jet
// variables, or degree > 3.
std::vector<ProjectableVectorField> find_symmetries(const Lagrangian &L, const SymmetryAnsatz &ansatz);

} // namespace noether

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <noether/hamiltonian.hpp>
#include <noether/lagrangian.hpp>
#include <noether/linalg.hpp>
#include <noether/trajectory.hpp>

namespace noether
{

enum class Regularity { Hyperregular, Degenerate, UnknownNumeric };
std::string to_string(Regularity r);

// p_i = ∂^t_i𝓛 with the velocity Hessian.
struct LegendreMap {
    Lagrangian source;
    std::vector<Expr> components;
    ExprMatrix hessian;
    Expr determinant;
    Regularity regularity = Regularity::UnknownNumeric;
    // Set when Hyperregular rests on probing a non-constant determinant.
    bool numeric_regularity = false;
};

LegendreMap legendre_map(const Lagrangian &L);

// q_t^i = ∂^i𝓗.
struct MomentumMap {
    std::vector<Expr> components;
};

MomentumMap momentum_map(const Hamiltonian &H);

struct NewtonOptions {
    double tolerance = 1e-12;
    int max_iterations = 50;
};

// Inverse of a Legendre map. Symbolic (q_t as functions of t, q, p) when the
// Hessian is free of velocities and has a symbolic inverse; otherwise each
// evaluation runs a damped Newton iteration from q_t = 0.
class LegendreInverse
{
public:
    LegendreInverse(LegendreMap map, std::optional<std::vector<Expr>> symbolic, NewtonOptions opts);

    bool is_symbolic() const
    {
        return symbolic_.has_value();
    }
    const std::vector<Expr> &symbolic() const;
    const LegendreMap &map() const
    {
        return map_;
    }
    // `point` assigns t, q, p and the parameters; returns q_t. Throws
    // MathError when Newton does not converge.
    std::vector<double> velocities(const Assignment &point) const;

private:
    LegendreMap map_;
    std::optional<std::vector<Expr>> symbolic_;
    NewtonOptions opts_;
};

// Throws MathError for degenerate maps.
LegendreInverse invert_legendre(const LegendreMap &lm, NewtonOptions opts = {});

// 𝓗 = p_i q_t^i(t,q,p) - 𝓛(t, q, q_t(t,q,p)). Requires a symbolic inverse;
// throws MathError otherwise (use associated_hamiltonian_value).
Hamiltonian associated_hamiltonian(const Lagrangian &L);
double associated_hamiltonian_value(const LegendreInverse &inv, const Assignment &point);

struct AssociationReport {
    ZeroVerdict round_trip_identity = ZeroVerdict::ProvenZero; // p∘L̂∘Ĥ∘L̂ = p∘L̂
    ZeroVerdict momentum_consistency = ZeroVerdict::ProvenZero; // p_i = ∂^t_i𝓛(t, q, ∂𝓗)
    ZeroVerdict velocity_consistency = ZeroVerdict::ProvenZero; // q_t^i = ∂^i𝓗(t, q, ∂^t𝓛)
    ZeroVerdict energy_relation = ZeroVerdict::ProvenZero;  // q_t^i ∂^t_i𝓛 - 𝓛 = 𝓗(t, q, ∂^t𝓛)

    ZeroVerdict combined() const
    {
        return combine(combine(round_trip_identity, momentum_consistency), combine(velocity_consistency, energy_relation));
    }
};

AssociationReport verify_association(const Lagrangian &L, const Hamiltonian &H);

struct TransferReport {
    ZeroVerdict pullback_residual = ZeroVerdict::ProvenZero;
    Expr lagrangian_side; // Ĥ*𝔗_u
    Expr hamiltonian_side; // 𝒯_u
};

// Ĥ*𝔗_u = u^t𝓗 - u^i p_i.
TransferReport transfer_symmetry(const Lagrangian &L, const Hamiltonian &H, const ProjectableVectorField &u);

// (q, q_t) samples to (q, p) samples through p_i = ∂^t_i𝓛.
Trajectory map_solution(const Lagrangian &L, const Trajectory &traj);
// (q, p) samples to (q, q_t) samples through q_t^i = ∂^i𝓗.
Trajectory map_solution(const Hamiltonian &H, const Trajectory &traj);

} // namespace noether

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <noether/expr.hpp>
#include <noether/zero_test.hpp>

namespace noether
{

// Fibre coordinates of a configuration bundle over the time axis, with their
// first and second jet coordinates. The standard frame is (qI, qI_t, qI_tt);
// the momentum-extended frame used for L_H appends (pI, pI_t, pI_tt).
struct JetFrame {
    std::vector<Symbol> positions;
    std::vector<Symbol> velocities;
    std::vector<Symbol> accelerations;

    static JetFrame configuration(int n);
    static JetFrame momentum_extended(int n);

    std::size_t size() const
    {
        return positions.size();
    }
};

enum class DerivativeMode {
    // d_t = ∂_t + qI_t ∂_I + qI_tt ∂^t_I on functions of (t, q, q_t).
    Velocity,
    // d_t = ∂_t + qI_t ∂_I + pI_t ∂^I on functions of (t, q, p).
    Phase,
};

// Total derivative along `frame`. Throws MathError if `e` contains
// accelerations of the frame (result would exceed second order).
Expr total_derivative(const Expr &e, const JetFrame &frame);

// Throws MathError on a mode mismatch (momenta in velocity mode, velocities
// or accelerations in phase mode, accelerations in velocity mode).
Expr total_derivative(const Expr &e, int n, DerivativeMode mode);

// u = u^t ∂_t + u^i ∂_i with u^t in {0, 1}; u^t = 1 is a connection.
struct ProjectableVectorField {
    int u_t = 0;
    std::vector<Expr> u;

    // Validates the invariants: u_t in {0,1}, components depend on (t, q,
    // params) only. Throws MathError.
    ProjectableVectorField(int time_component, std::vector<Expr> components);
    ProjectableVectorField() = default;

    static ProjectableVectorField zero(int n);
    // ∂_i (1-based).
    static ProjectableVectorField translation(int n, int i);

    std::size_t dimension() const
    {
        return u.size();
    }
    bool is_connection() const
    {
        return u_t == 1;
    }
    ProjectableVectorField operator+(const ProjectableVectorField &o) const;
    ProjectableVectorField operator-(const ProjectableVectorField &o) const;
    ProjectableVectorField scaled(const Expr &c) const;
    // "dt + e1 dq1 + ..." syntax.
    std::string to_string() const;
};

// J^1u / J^2u stored by components.
struct ProlongedField {
    ProjectableVectorField base;
    std::vector<Expr> vel_components;
    std::vector<Expr> acc_components;
};

ProlongedField prolong1(const ProjectableVectorField &u);
ProlongedField prolong2(const ProjectableVectorField &u);

// ũ = u^t ∂_t + u^i ∂_i + w_i ∂^i on V*Q, w_i = -p_j ∂_i u^j.
struct PhaseVectorField {
    int u_t = 0;
    std::vector<Expr> u;
    std::vector<Expr> w;
};

PhaseVectorField canonical_lift(const ProjectableVectorField &u);

// φ = φ_t dt + φ_i dq^i with coefficients on Q.
struct OneFormOnQ {
    Expr phi_t;
    std::vector<Expr> phi;

    OneFormOnQ() = default;
    // Throws MathError if a coefficient depends on jet or momentum symbols.
    OneFormOnQ(Expr time_part, std::vector<Expr> space_part);

    std::string to_string() const;
};

// Density coefficient of h_0(φ): φ_t + q_t^i φ_i.
Expr h0(const OneFormOnQ &phi);

// Exterior derivative of a function on Q.
OneFormOnQ exterior_derivative(const Expr &f, int n);

// Closedness: ∂_i φ_t = ∂_t φ_i and ∂_i φ_j = ∂_j φ_i. Returns the combined
// verdict of the component differences.
ZeroVerdict is_closed(const OneFormOnQ &phi);

// Point of Q used as the origin of the Poincaré-lemma homotopy.
struct BasePoint {
    Expr t;
    std::vector<Expr> q;

    static BasePoint origin(int n);
};

// σ with dσ = φ. `symbolic` is set when the line integral has a closed form
// (polynomial times exponentials of arguments linear in the homotopy
// parameter); otherwise only numeric evaluation through quadrature is
// available.
class Potential
{
public:
    Potential(OneFormOnQ form, BasePoint base, std::optional<Expr> symbolic);

    bool has_symbolic() const
    {
        return symbolic_.has_value();
    }
    const Expr &symbolic() const;
    // Evaluates σ at a point (t, q, params) by Gauss-Legendre quadrature of the
    // homotopy integral, or via the symbolic form when available.
    double evaluate(const Assignment &point) const;
    double evaluate_by_quadrature(const Assignment &point) const;
    const OneFormOnQ &form() const
    {
        return form_;
    }

private:
    OneFormOnQ form_;
    BasePoint base_;
    std::optional<Expr> symbolic_;
};

// Precondition: is_closed(phi) is zero-class; throws MathError otherwise, or
// when a coefficient is singular at the base point.
Potential exact_potential(const OneFormOnQ &phi, const BasePoint &base);
Potential exact_potential(const OneFormOnQ &phi);

// Parses "c0 dt + e1 dq1 + ..." into coefficients (dt coefficient first).
// Shared by vector fields and one-forms.
struct BasisExpansion {
    Expr dt;
    std::vector<Expr> dq;
};
BasisExpansion parse_basis_expansion(const std::string &text, int n, const std::vector<std::string> &params);

ProjectableVectorField parse_vector_field(const std::string &text, int n, const std::vector<std::string> &params);
OneFormOnQ parse_one_form(const std::string &text, int n, const std::vector<std::string> &params);

} // namespace noether

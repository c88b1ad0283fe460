#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <noether/error.hpp>
#include <noether/hamiltonian.hpp>
#include <noether/lagrangian.hpp>
#include <noether/trajectory.hpp>

namespace noether
{

enum class Formalism { Lagrange, Hamilton };

// d/dt state = rhs(t, state, params). State order: q1..qn, then q1_t..qn_t
// (Lagrange) or p1..pn (Hamilton).
struct ODESystem {
    std::vector<Symbol> state;
    std::vector<Expr> rhs;
    Formalism source = Formalism::Lagrange;
    int dimension = 1;
};

// Throws MathError for degenerate Lagrangians.
ODESystem to_first_order(const Lagrangian &L);
ODESystem to_first_order(const Hamiltonian &H);

// Integration blow-up: a non-finite state value appeared at `time`.
class BlowUpError : public MathError
{
public:
    BlowUpError(const std::string &msg, double time) : MathError(msg), time_(time) {}
    double time() const noexcept
    {
        return time_;
    }

private:
    double time_;
};

// Classic fixed-step RK4 on the grid t0 + k h, k = 0..floor((t1 - t0)/h).
// `ic` assigns every state symbol and every parameter of the system.
// Throws EvalError on missing values, BlowUpError on non-finite states.
Trajectory integrate(const ODESystem &sys, const Assignment &ic, double t0, double t1, double h);

struct ChargeDrift {
    std::string name;
    double initial = 0;
    double max_abs = 0;
    double max_rel = 0; // max_abs / max(|initial|, 1e-12)
};

struct DriftStats {
    std::vector<ChargeDrift> charges;
};

// Throws MathError when a charge uses symbols the trajectory does not carry.
DriftStats drift_report(const Trajectory &traj, const std::vector<ConservedQuantity> &charges);

// Values of each charge at every sample (row-major: sample, charge).
std::vector<std::vector<double>> charge_samples(const Trajectory &traj, const std::vector<ConservedQuantity> &charges);

// Flows 20 sample points of J¹Q along J¹u for parameter `eps` and returns the
// largest |(𝓛∘flow - 𝓛)/eps - 𝐋_{J¹u}𝓛| over them. `params` supplies the
// parameter values.
double flow_check(const Lagrangian &L, const ProjectableVectorField &u, const Assignment &params, double eps = 1e-4);

// Header "t,q1..qn,<q1_t|p1>..,<charge names>", 17 significant digits, LF.
void write_csv(std::ostream &out, const Trajectory &traj, const std::vector<ConservedQuantity> &charges);

} // namespace noether

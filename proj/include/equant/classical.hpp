#pragma once

// Classical phase-space layer: Hamilton's equations, contact transforms and
// the restricted (enhanced) action evaluated along coherent-state paths.

#include "equant/affine.hpp"
#include "equant/canonical.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace equant {

using PhaseFunction = std::function<double(double p, double q)>;

struct ClassicalHamiltonian {
    PhaseFunction value;
    PhaseFunction dh_dp;  // central differences when empty
    PhaseFunction dh_dq;
    bool separable = false;  // H = T(p) + V(q)

    double operator()(double p, double q) const { return value(p, q); }
    double grad_p(double p, double q) const;
    double grad_q(double p, double q) const;
};

ClassicalHamiltonian oscillator_hamiltonian();  // (p^2 + q^2)/2
ClassicalHamiltonian translation_hamiltonian();  // p
ClassicalHamiltonian from_function(PhaseFunction h, bool separable = false);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    double energy_drift = 0.0;  // max |H(t) - H(t0)| when produced by integrate()

    Trajectory() = default;
    Trajectory(std::vector<double> t, std::vector<PhasePoint> pts);

    std::size_t size() const { return times.size(); }
    double duration() const { return times.back() - times.front(); }
    bool uniform(double rel_tol = 1e-9) const;
    // First and last point coincide within tol.
    bool closed(double tol = 1e-12) const;
};

// Samples t -> (p(t), q(t)) at n+1 uniform times on [t0, t1].
Trajectory sample_trajectory(const std::function<PhasePoint(double)>& path, double t0, double t1, std::size_t n);

// Stormer-Verlet (kick-drift-kick) for separable H, implicit midpoint otherwise.
// The last step is shortened so the span is hit exactly.
Trajectory integrate(const ClassicalHamiltonian& h, PhasePoint start, double t_span, double dt);

// ---- contact transforms ---------------------------------------------------

struct ContactTransform {
    std::string name;
    std::function<PhasePoint(PhasePoint)> forward;  // (p,q) -> (p*,q*)
    std::function<PhasePoint(PhasePoint)> inverse;  // (p*,q*) -> (p,q)
    // G*(p*,q*) with p dq = p* dq* + dG*.
    std::optional<PhaseFunction> generator;
};

ContactTransform identity_transform();
ContactTransform rotation_transform();  // p* = -q, q* = p
ContactTransform sqrt2_transform();     // p* = sqrt2 p + q, q* = sqrt2 q + p
ContactTransform scaling_transform(double lambda);  // p* = p/lambda, q* = lambda q
std::vector<ContactTransform> transform_catalog();

struct BracketReport {
    double max_deviation = 0.0;
    std::vector<double> brackets;
};

// {q*, p*} from a central-difference Jacobian of the forward map.
BracketReport check_bracket(const ContactTransform& t, std::span<const PhasePoint> pts, double h = 1e-4);

// max |forward(inverse(x)) - x| over pts.
double roundtrip_error(const ContactTransform& t, std::span<const PhasePoint> pts);

// H*(p*,q*) = H(inverse(p*,q*)).
ClassicalHamiltonian pullback_H(const ClassicalHamiltonian& h, const ContactTransform& t);

Trajectory map_trajectory(const Trajectory& traj, const std::function<PhasePoint(PhasePoint)>& map);

// ---- restricted action ----------------------------------------------------

struct ActionReport {
    double quantum = 0.0;          // Re of int [i hbar <psi|psi'> - <psi|H|psi>] dt
    double quantum_imag = 0.0;     // imaginary residue of the same integral
    double classical = 0.0;        // int [p q' - H] dt (canonical) or int [-q p' - H] dt (affine)
    double classical_other = 0.0;  // the other form of the kinetic term
    double boundary_term = 0.0;    // p q |_{t0}^{t1} = classical(p q') - classical(-q p')
    double difference = 0.0;       // quantum - classical
    double richardson_gap = 0.0;   // change between 2nd and 4th order time derivatives
};

// `symbol` supplies H(p,q) for the classical side; defaults to the weak
// symbol computed from H_op. Requires uniform time steps.
ActionReport enhanced_action(const CoherentFamily& family, const OperatorMatrix& h, const Trajectory& traj,
                             const PhaseFunction& symbol = {});
ActionReport enhanced_action(const AffineFamily& family, const OperatorMatrix& h, const Trajectory& traj,
                             const PhaseFunction& symbol = {});

// int p q' dt with the same differencing as the action (periodic when closed).
double kinetic_integral(const Trajectory& traj);

// || |p(p*,q*), q(p*,q*)> - |forward-inverse round trip> ||.
double relabel_invariance(const CoherentFamily& family, const ContactTransform& t, PhasePoint pt_star);

struct TransformedActionReport {
    double quantum = 0.0;
    double classical_star = 0.0;  // int [p* q*' + G*' - H*] dt
    double generator_term = 0.0;  // int G*' dt
    double difference = 0.0;
};

TransformedActionReport transformed_action_identity(const CoherentFamily& family, const OperatorMatrix& h,
                                                    const ContactTransform& t, const Trajectory& traj_star,
                                                    const PhaseFunction& symbol = {});

struct StationarityReport {
    std::vector<double> eps;
    std::vector<double> delta_action;
    double exponent = 0.0;  // fitted from the first and last eps
};

// Perturbs both coordinates by eps * sin^2(pi (t - t0)/T) and measures the
// change of the quantum-side action.
StationarityReport action_stationarity(const CoherentFamily& family, const OperatorMatrix& h,
                                       const Trajectory& solution, std::span<const double> eps);

// Columns t,p,q (and p_star,q_star when `star` is given) with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Trajectory* star = nullptr);

}  // namespace equant

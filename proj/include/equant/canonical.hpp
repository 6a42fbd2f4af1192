#pragma once

// Canonical coherent states |p,q> = exp(-iqP/hbar) exp(ipQ/hbar) |fiducial>
// in the truncated Fock basis, and the weak-correspondence symbol
// H(p,q) = <p,q| H(P,Q) |p,q>.

#include "equant/hilbert.hpp"
#include "equant/polynomial.hpp"

#include <functional>
#include <optional>

namespace equant {

struct PhasePoint {
    double p = 0.0;
    double q = 0.0;
};

struct FiducialSpec {
    enum class Kind { Vacuum, Custom };

    Kind kind = Kind::Vacuum;
    std::optional<StateVector> state;  // set for Custom
    std::string label = "vacuum";

    static FiducialSpec vacuum() { return {}; }
    static FiducialSpec custom(StateVector s, std::string label = "custom") {
        return {Kind::Custom, std::move(s), std::move(label)};
    }
};

class CoherentFamily {
public:
    // trusted_fraction sets the trusted region |p|,|q| <= fraction * sqrt(hbar N).
    explicit CoherentFamily(const Representation& rep, FiducialSpec fiducial = FiducialSpec::vacuum(),
                            double trusted_fraction = 0.25);

    const Representation& rep() const { return rep_; }
    double hbar() const { return rep_.hbar(); }
    const OperatorMatrix& Q() const { return q_; }
    const OperatorMatrix& P() const { return p_; }
    const StateVector& fiducial() const { return fiducial_; }
    const FiducialSpec& fiducial_spec() const { return spec_; }
    const SpectralData& q_spectrum() const { return q_spectrum_; }
    const SpectralData& p_spectrum() const { return p_spectrum_; }
    double trusted_fraction() const { return trusted_fraction_; }

    double trusted_radius() const;
    bool in_trusted_region(PhasePoint pt) const;

private:
    Representation rep_;
    OperatorMatrix q_;
    OperatorMatrix p_;
    FiducialSpec spec_;
    StateVector fiducial_;
    SpectralData q_spectrum_;
    SpectralData p_spectrum_;
    double trusted_fraction_;
};

StateVector make_vacuum(const Representation& rep);

// Appends to `warnings` when pt leaves the trusted region or the state
// reaches the top of the truncated basis.
StateVector coherent_state(const CoherentFamily& family, PhasePoint pt, Warnings* warnings = nullptr);

struct TruncationCheck {
    double error = 0.0;  // distance to the same state built in dimension 2N
    bool ok = true;      // error <= 1e-6
};

// Rebuilds the state in a doubled basis and compares.
TruncationCheck check_truncation(const CoherentFamily& family, PhasePoint pt);

// <p,q|H|p,q>; throws HermiticityError when the imaginary residue exceeds
// imag_tol relative to max(1, |symbol|).
double weak_symbol(const CoherentFamily& family, const OperatorMatrix& h, PhasePoint pt, double imag_tol = 1e-10);

double hbar_correction(const CoherentFamily& family, const OperatorMatrix& h,
                       const std::function<double(double, double)>& classical, PhasePoint pt);

// <fiducial| H(P + p, Q + q) |fiducial>, evaluated by shifting the operators
// instead of displacing the state.
double shifted_symbol(const CoherentFamily& family, const OperatorPolynomial& h, PhasePoint pt);

// Binds P and Q of the family to the polynomial.
OperatorMatrix quantize(const CoherentFamily& family, const OperatorPolynomial& h, std::string label = "H");

}  // namespace equant

#pragma once

// Half-line (affine) quantization: Q = multiplication by x > 0, the dilation
// operator D = (PQ + QP)/2 = -i hbar (x d/dx + 1/2), the fiducial |beta>
// solving [(Q - 1) + i D / (beta hbar)] |beta> = 0 and the affine coherent
// states |p,q;beta> = exp(ipQ/hbar) exp(-i ln(q) D/hbar) |beta>.

#include "equant/hilbert.hpp"
#include "equant/polynomial.hpp"

namespace equant {

struct AffinePhasePoint {
    double p = 0.0;
    double q = 1.0;
};

// Half-width of the centred difference stencil used for D (8th order).
inline constexpr Index kAffineStencilHalfWidth = 4;

// Default grid: 2000 log-spaced points on [1e-4, 40].
HalfLineGrid default_affine_grid();

// D is built as -i hbar X^{1/2} (dx/ds)^{-1} d/ds X^{1/2} so that W D is
// hermitian away from the kAffineStencilHalfWidth boundary rows, where
// one-sided stencils take over. Throws ResolutionError when [Q,D] = i hbar Q
// misses 1e-6 relative accuracy on a probe state.
std::pair<OperatorMatrix, OperatorMatrix> build_affine_ops(const Representation& rep);

// Normalized samples of x^(beta - 1/2) exp(-beta x). Throws ResolutionError
// when more than 1e-6 of the probability lies outside the grid window or
// the quadrature cannot resolve the normalization.
StateVector solve_fiducial(const Representation& rep, double beta);

// Probability mass of Gamma(2 beta, rate 2 beta) below x_min / q plus above
// x_max / q: what the dilated fiducial loses outside the grid window.
double affine_tail_mass(const Representation& rep, double beta, double q);

class AffineFamily {
public:
    AffineFamily(const Representation& rep, double beta);

    const Representation& rep() const { return rep_; }
    double hbar() const { return rep_.hbar(); }
    double beta() const { return beta_; }
    const OperatorMatrix& Q() const { return q_; }
    const OperatorMatrix& D() const { return d_; }
    const StateVector& fiducial() const { return fiducial_; }
    // Quadrature normalization of the sampled closed form.
    double fiducial_scale() const { return scale_; }

    // Fiducial evaluated at arbitrary x > 0 (closed form).
    Complex fiducial_at(double x) const;

    double tail_mass(AffinePhasePoint pt) const { return affine_tail_mass(rep_, beta_, pt.q); }
    // Tail mass <= 1e-8.
    bool in_trusted_region(AffinePhasePoint pt) const;

private:
    AffineFamily(const Representation& rep, double beta, std::pair<OperatorMatrix, OperatorMatrix> ops);

    Representation rep_;
    double beta_;
    OperatorMatrix q_;
    OperatorMatrix d_;
    StateVector fiducial_;
    double log_norm_;
    double scale_;
};

// (U_q psi)(x) = q^{-1/2} psi(x/q) by cubic interpolation in the native grid
// coordinate; zero outside the window.
StateVector dilate(const StateVector& psi, double q);

// Exact group action on the closed-form fiducial followed by the phase
// exp(ipx/hbar). Appends a warning when the tail mass exceeds 1e-8.
StateVector affine_coherent_state(const AffineFamily& family, AffinePhasePoint pt, Warnings* warnings = nullptr);

double affine_weak_symbol(const AffineFamily& family, const OperatorMatrix& h, AffinePhasePoint pt,
                          double imag_tol = 1e-8);

// <beta| H'(D + p q Q, q Q) |beta> for a polynomial in the symbols 'D', 'Q'.
double affine_shifted_symbol(const AffineFamily& family, const OperatorPolynomial& h, AffinePhasePoint pt);

OperatorMatrix affine_quantize(const AffineFamily& family, const OperatorPolynomial& h, std::string label = "H'");

// || [(Q - 1) + i D / (beta hbar)] psi || for the family fiducial.
double fiducial_residual(const AffineFamily& family);

}  // namespace equant

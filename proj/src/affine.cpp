#include "equant/affine.hpp"

#include "equant/errors.hpp"
#include "equant/stencil.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <sstream>

namespace equant {

namespace {

constexpr double kCommutatorTolerance = 1e-6;
constexpr double kFiducialTailTolerance = 1e-6;
constexpr double kTrustedTailMass = 1e-8;

// Gaussian bump centred in the native coordinate, used to probe [Q,D].
StateVector commutator_probe(const Representation& rep) {
    const Index n = rep.size();
    const double h = rep.native_step();
    const double centre = 0.5 * static_cast<double>(n - 1) * h;
    const double sigma = static_cast<double>(n - 1) * h / 10.0;
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * h - centre;
        v(i) = std::exp(-0.5 * s * s / (sigma * sigma));
    }
    return normalized(StateVector(rep, v));
}

// Cubic (4-point Lagrange) interpolation on a uniform grid; zero outside it.
Complex lagrange_interpolate(const Vector& values, double h, double s) {
    constexpr Index kNodes = 4;
    const Index n = values.size();
    const double pos = s / h;
    if (pos < 0.0 || pos > static_cast<double>(n - 1)) return 0.0;
    const Index i = std::clamp<Index>(static_cast<Index>(std::floor(pos)) - kNodes / 2 + 1, 0, n - kNodes);
    const double t = pos - static_cast<double>(i);
    Complex acc = 0.0;
    for (Index k = 0; k < kNodes; ++k) {
        double l = 1.0;
        for (Index j = 0; j < kNodes; ++j)
            if (j != k) l *= (t - double(j)) / double(k - j);
        acc += l * values(i + k);
    }
    return acc;
}

double fiducial_log_norm(double beta) { return 0.5 * (2.0 * beta * std::log(2.0 * beta) - std::lgamma(2.0 * beta)); }

StateVector sample_fiducial(const Representation& rep, double beta) {
    const double log_norm = fiducial_log_norm(beta);
    const RealVector& x = rep.nodes();
    Vector v(rep.size());
    for (Index i = 0; i < v.size(); ++i) v(i) = std::exp(log_norm + (beta - 0.5) * std::log(x(i)) - beta * x(i));
    return {rep, std::move(v)};
}

}  // namespace

HalfLineGrid default_affine_grid() { return HalfLineGrid{2000, 1e-4, 40.0, Spacing::Logarithmic}; }

std::pair<OperatorMatrix, OperatorMatrix> build_affine_ops(const Representation& rep) {
    const HalfLineGrid& g = rep.grid();
    const Index n = g.points;
    if (n < 2 * kAffineStencilHalfWidth + 2)
        throw ResolutionError("grid too small for the dilation stencil", 4 * kAffineStencilHalfWidth);
    const RealVector& x = rep.nodes();
    const RealVector sqrt_x = x.cwiseSqrt();
    const RealMatrix dif = uniform_derivative_matrix<double>(n, rep.native_step(), kAffineStencilHalfWidth);
    const RealMatrix core = sqrt_x.cwiseQuotient(rep.jacobian()).asDiagonal() * dif * sqrt_x.asDiagonal();
    Matrix d = Complex(0.0, -rep.hbar()) * core.cast<Complex>();
    Matrix q = x.cast<Complex>().asDiagonal();

    OperatorMatrix q_op(rep, std::move(q), "Q");
    OperatorMatrix d_op(rep, std::move(d), "D");

    const StateVector probe = commutator_probe(rep);
    const StateVector lhs{rep, q_op.entries * (d_op.entries * probe.coeffs) - d_op.entries * (q_op.entries * probe.coeffs)};
    const StateVector rhs{rep, Complex(0.0, rep.hbar()) * apply(q_op, probe).coeffs};
    const double rel = distance(lhs, rhs) / norm(rhs);
    if (!(rel <= kCommutatorTolerance)) {
        const double factor = std::pow(rel / kCommutatorTolerance, 1.0 / 8.0);
        const long suggested = static_cast<long>(std::ceil(1.25 * factor * static_cast<double>(n)));
        std::ostringstream msg;
        msg << "grid too coarse: [Q,D] = i hbar Q holds only to " << rel << " relative; try " << suggested
            << " points";
        throw ResolutionError(msg.str(), suggested);
    }
    return {std::move(q_op), std::move(d_op)};
}

double affine_tail_mass(const Representation& rep, double beta, double q) {
    const HalfLineGrid& g = rep.grid();
    const double shape = 2.0 * beta;
    const double lower = boost::math::gamma_p(shape, shape * g.x_min / q);
    const double upper = boost::math::gamma_q(shape, shape * g.x_max / q);
    return lower + upper;
}

StateVector solve_fiducial(const Representation& rep, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
    const Index n = rep.size();
    const double tail = affine_tail_mass(rep, beta, 1.0);
    if (tail > kFiducialTailTolerance) {
        std::ostringstream msg;
        msg << "fiducial for beta=" << beta << " puts mass " << tail
            << " outside the grid window; lower x_min or raise x_max";
        throw ResolutionError(msg.str(), static_cast<long>(n));
    }
    const StateVector psi = sample_fiducial(rep, beta);
    const double quad = norm(psi) * norm(psi);
    if (std::abs(quad - 1.0) > kFiducialTailTolerance + tail) {
        std::ostringstream msg;
        msg << "quadrature misses the fiducial normalization by " << std::abs(quad - 1.0) << "; refine the grid";
        throw ResolutionError(msg.str(), static_cast<long>(2 * n));
    }
    return normalized(psi);
}

AffineFamily::AffineFamily(const Representation& rep, double beta)
    : AffineFamily(rep, beta, build_affine_ops(rep)) {}

AffineFamily::AffineFamily(const Representation& rep, double beta, std::pair<OperatorMatrix, OperatorMatrix> ops)
    : rep_(rep),
      beta_(beta),
      q_(std::move(ops.first)),
      d_(std::move(ops.second)),
      fiducial_(solve_fiducial(rep, beta)),
      log_norm_(fiducial_log_norm(beta)),
      scale_(1.0 / norm(sample_fiducial(rep, beta))) {
    if (hermiticity_defect(d_, kAffineStencilHalfWidth) > 1e-8) throw NumericError("D is not hermitian on the grid");
    if (std::abs(expectation(q_, fiducial_).real() - 1.0) > 1e-6) throw NumericError("<beta|Q|beta> != 1");
    if (std::abs(expectation(d_, fiducial_)) > 1e-6) throw NumericError("<beta|D|beta> != 0");
}

Complex AffineFamily::fiducial_at(double x) const {
    if (!(x > 0.0)) return 0.0;
    return scale_ * std::exp(log_norm_ + (beta_ - 0.5) * std::log(x) - beta_ * x);
}

bool AffineFamily::in_trusted_region(AffinePhasePoint pt) const {
    return pt.q > 0.0 && tail_mass(pt) <= kTrustedTailMass;
}

StateVector dilate(const StateVector& psi, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("dilation factor must be positive");
    const Representation& rep = psi.rep;
    const HalfLineGrid& g = rep.grid();
    const Index n = rep.size();
    const double h = rep.native_step();
    const RealVector& x = rep.nodes();
    Vector out(n);
    if (g.spacing == Spacing::Logarithmic) {
        // phi(u) = x^{1/2} psi(x) shifts rigidly: phi_q(u) = phi(u - ln q).
        const Vector phi = x.cwiseSqrt().cast<Complex>().cwiseProduct(psi.coeffs);
        const double shift = std::log(q);
        for (Index i = 0; i < n; ++i) {
            out(i) = lagrange_interpolate(phi, h, static_cast<double>(i) * h - shift) / std::sqrt(x(i));
        }
    } else {
        const double scale = 1.0 / std::sqrt(q);
        for (Index i = 0; i < n; ++i) {
            out(i) = scale * lagrange_interpolate(psi.coeffs, h, x(i) / q - g.x_min);
        }
    }
    return {rep, std::move(out)};
}

StateVector affine_coherent_state(const AffineFamily& family, AffinePhasePoint pt, Warnings* warnings) {
    if (!(pt.q > 0.0) || !std::isfinite(pt.q) || !std::isfinite(pt.p))
        throw std::invalid_argument("affine phase point needs finite p and q > 0");
    const Representation& rep = family.rep();
    const RealVector& x = rep.nodes();
    const double hbar = family.hbar();
    const double dilation = 1.0 / std::sqrt(pt.q);
    Vector v(rep.size());
    for (Index i = 0; i < v.size(); ++i)
        v(i) = std::polar(1.0, pt.p * x(i) / hbar) * dilation * family.fiducial_at(x(i) / pt.q);
    if (warnings && !family.in_trusted_region(pt)) {
        std::ostringstream msg;
        msg << "affine state at (" << pt.p << ", " << pt.q << ") loses mass " << family.tail_mass(pt)
            << " outside the grid window";
        warnings->push_back(msg.str());
    }
    return {rep, std::move(v)};
}

double affine_weak_symbol(const AffineFamily& family, const OperatorMatrix& h, AffinePhasePoint pt,
                          double imag_tol) {
    const Complex value = expectation(h, affine_coherent_state(family, pt));
    if (std::abs(value.imag()) > imag_tol * std::max(1.0, std::abs(value.real()))) {
        std::ostringstream msg;
        msg << "affine_weak_symbol: imaginary residue " << value.imag() << " for operator '" << h.label << "'";
        throw HermiticityError(msg.str());
    }
    return value.real();
}

double affine_shifted_symbol(const AffineFamily& family, const OperatorPolynomial& h, AffinePhasePoint pt) {
    const std::map<char, OperatorMatrix> shifted{{'D', family.D() + Complex(pt.p * pt.q) * family.Q()},
                                                 {'Q', Complex(pt.q) * family.Q()}};
    return expectation(h.evaluate(shifted), family.fiducial()).real();
}

OperatorMatrix affine_quantize(const AffineFamily& family, const OperatorPolynomial& h, std::string label) {
    return h.evaluate({{'D', family.D()}, {'Q', family.Q()}}, std::move(label));
}

double fiducial_residual(const AffineFamily& family) {
    const StateVector& psi = family.fiducial();
    const Vector r = (family.Q().entries * psi.coeffs - psi.coeffs) +
                     Complex(0.0, 1.0 / (family.beta() * family.hbar())) * (family.D().entries * psi.coeffs);
    return norm(StateVector(psi.rep, r));
}

}  // namespace equant

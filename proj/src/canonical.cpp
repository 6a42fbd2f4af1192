#include "equant/canonical.hpp"

#include "equant/errors.hpp"

#include <cmath>
#include <sstream>

namespace equant {

namespace {

StateVector resolve_fiducial(const Representation& rep, const FiducialSpec& spec, const OperatorMatrix& q,
                             const OperatorMatrix& p) {
    if (spec.kind == FiducialSpec::Kind::Vacuum) {
        StateVector vac = make_vacuum(rep);
        const Vector annihilated = (q.entries + Complex(0.0, 1.0) * p.entries) * vac.coeffs;
        if (annihilated.norm() > 1e-8) throw NumericError("vacuum is not annihilated by Q + iP");
        return vac;
    }
    if (!spec.state) throw std::invalid_argument("custom fiducial without a state");
    if (!(spec.state->rep == rep)) throw RepresentationMismatch("custom fiducial lives in another representation");
    if (std::abs(norm(*spec.state) - 1.0) > 1e-10) throw NumericError("custom fiducial is not normalized");
    return *spec.state;
}

}  // namespace

CoherentFamily::CoherentFamily(const Representation& rep, FiducialSpec fiducial, double trusted_fraction)
    : rep_(rep),
      q_(build_fock_ops(rep).first),
      p_(build_fock_ops(rep).second),
      spec_(std::move(fiducial)),
      fiducial_(resolve_fiducial(rep_, spec_, q_, p_)),
      q_spectrum_(spectral_decompose(q_)),
      p_spectrum_(spectral_decompose(p_)),
      trusted_fraction_(trusted_fraction) {}

double CoherentFamily::trusted_radius() const {
    return trusted_fraction_ * std::sqrt(hbar() * static_cast<double>(rep_.size()));
}

bool CoherentFamily::in_trusted_region(PhasePoint pt) const {
    const double r = trusted_radius();
    return std::abs(pt.p) <= r && std::abs(pt.q) <= r;
}

StateVector make_vacuum(const Representation& rep) {
    rep.fock_line();
    return basis_vector(rep, 0);
}

StateVector coherent_state(const CoherentFamily& family, PhasePoint pt, Warnings* warnings) {
    if (!std::isfinite(pt.p) || !std::isfinite(pt.q)) throw NumericError("coherent_state: non-finite phase point");
    const double hbar = family.hbar();
    StateVector v = expm_apply(family.q_spectrum(), Complex(0.0, pt.p / hbar), family.fiducial());
    v = expm_apply(family.p_spectrum(), Complex(0.0, -pt.q / hbar), v);
    if (warnings) {
        if (!family.in_trusted_region(pt)) {
            std::ostringstream msg;
            msg << "phase point (" << pt.p << ", " << pt.q << ") outside trusted region |p|,|q| <= "
                << family.trusted_radius();
            warnings->push_back(msg.str());
        }
        const Index n = v.coeffs.size();
        const Index top = n - std::max<Index>(1, n / 10);
        const double tail = v.coeffs.tail(n - top).squaredNorm();
        if (tail > 1e-14) {
            std::ostringstream msg;
            msg << "coherent state at (" << pt.p << ", " << pt.q << ") has weight " << tail
                << " in the top 10% of the Fock basis";
            warnings->push_back(msg.str());
        }
    }
    return v;
}

TruncationCheck check_truncation(const CoherentFamily& family, PhasePoint pt) {
    const Index n = family.rep().size();
    const Representation big_rep = Representation::fock(2 * n, family.hbar());
    FiducialSpec spec = FiducialSpec::vacuum();
    if (family.fiducial_spec().kind == FiducialSpec::Kind::Custom) {
        Vector padded = Vector::Zero(2 * n);
        padded.head(n) = family.fiducial().coeffs;
        spec = FiducialSpec::custom(StateVector(big_rep, padded), family.fiducial_spec().label);
    }
    const CoherentFamily big(big_rep, spec, family.trusted_fraction());
    const StateVector small_state = coherent_state(family, pt);
    const StateVector big_state = coherent_state(big, pt);
    const double head = (big_state.coeffs.head(n) - small_state.coeffs).squaredNorm();
    const double tail = big_state.coeffs.tail(n).squaredNorm();
    const double err = std::sqrt(head + tail);
    return {err, err <= 1e-6};
}

double weak_symbol(const CoherentFamily& family, const OperatorMatrix& h, PhasePoint pt, double imag_tol) {
    const Complex value = expectation(h, coherent_state(family, pt));
    if (std::abs(value.imag()) > imag_tol * std::max(1.0, std::abs(value.real()))) {
        std::ostringstream msg;
        msg << "weak_symbol: imaginary residue " << value.imag() << " for operator '" << h.label << "'";
        throw HermiticityError(msg.str());
    }
    return value.real();
}

double hbar_correction(const CoherentFamily& family, const OperatorMatrix& h,
                       const std::function<double(double, double)>& classical, PhasePoint pt) {
    return weak_symbol(family, h, pt) - classical(pt.p, pt.q);
}

double shifted_symbol(const CoherentFamily& family, const OperatorPolynomial& h, PhasePoint pt) {
    const OperatorMatrix one = identity(family.rep());
    const std::map<char, OperatorMatrix> shifted{{'P', family.P() + Complex(pt.p) * one},
                                                 {'Q', family.Q() + Complex(pt.q) * one}};
    return expectation(h.evaluate(shifted), family.fiducial()).real();
}

OperatorMatrix quantize(const CoherentFamily& family, const OperatorPolynomial& h, std::string label) {
    return h.evaluate({{'P', family.P()}, {'Q', family.Q()}}, std::move(label));
}

}  // namespace equant

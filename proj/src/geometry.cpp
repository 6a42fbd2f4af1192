#include "equant/geometry.hpp"

#include "equant/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace equant {

namespace {

const char* const kCanonicalConvention = "2*hbar*FubiniStudy; canonical flat form dp^2+dq^2 for the vacuum";
const char* const kAffineConvention = "2*hbar*FubiniStudy; affine form q^2/(beta*hbar) dp^2 + beta*hbar/q^2 dq^2";

struct Components {
    double pp, pq, qq;
};

Components projected_components(const StateVector& psi, const StateVector& dp, const StateVector& dq, double scale) {
    const double nn = inner(psi, psi).real();
    const Complex pp = inner(dp, psi);
    const Complex qp = inner(dq, psi);
    auto g = [&](const StateVector& a, Complex a_psi, const StateVector& b, Complex b_psi) {
        return (inner(a, b) / nn - a_psi * std::conj(b_psi) / (nn * nn)).real();
    };
    return {scale * g(dp, pp, dp, pp), scale * g(dp, pp, dq, qp), scale * g(dq, qp, dq, qp)};
}

std::pair<StateVector, StateVector> central_derivatives(const StateMap& state, double p, double q, double h) {
    const StateVector pp = state(p + h, q);
    const StateVector pm = state(p - h, q);
    const StateVector qp = state(p, q + h);
    const StateVector qm = state(p, q - h);
    const double inv = 1.0 / (2.0 * h);
    return {StateVector(pp.rep, (pp.coeffs - pm.coeffs) * inv), StateVector(qp.rep, (qp.coeffs - qm.coeffs) * inv)};
}

double first_derivative(const std::array<double, 5>& f, double h) {
    return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

double second_derivative(const std::array<double, 5>& f, double h) {
    return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

}  // namespace

MetricSample fs_metric(const StateMap& state, double scale, double p, double q, double step, double rel_tol) {
    if (!(step > 0.0)) throw StepSizeError("metric step must be positive");
    const StateVector psi = state(p, q);
    const auto [dp_h, dq_h] = central_derivatives(state, p, q, step);
    const auto [dp_half, dq_half] = central_derivatives(state, p, q, 0.5 * step);
    const StateVector dp_rich(psi.rep, (4.0 * dp_half.coeffs - dp_h.coeffs) / 3.0);
    const StateVector dq_rich(psi.rep, (4.0 * dq_half.coeffs - dq_h.coeffs) / 3.0);

    const Components rich = projected_components(psi, dp_rich, dq_rich, scale);
    const Components half = projected_components(psi, dp_half, dq_half, scale);
    const double magnitude = std::max({std::abs(rich.pp), std::abs(rich.qq), std::abs(rich.pq)});
    const double err =
        std::max({std::abs(rich.pp - half.pp), std::abs(rich.pq - half.pq), std::abs(rich.qq - half.qq)}) /
        magnitude;
    if (!std::isfinite(err) || err > rel_tol) {
        std::ostringstream msg;
        msg << "fs_metric at (" << p << ", " << q << "): step halving changes the metric by " << err
            << " relative; reduce the step";
        throw StepSizeError(msg.str());
    }
    MetricSample out;
    out.p = p;
    out.q = q;
    out.g_pp = rich.pp;
    out.g_pq = rich.pq;
    out.g_qq = rich.qq;
    out.error_estimate = err;
    return out;
}

MetricSample fs_metric(const CoherentFamily& family, PhasePoint pt, double step) {
    if (!family.in_trusted_region({pt.p - step, pt.q - step}) || !family.in_trusted_region({pt.p + step, pt.q + step}))
        throw RegionError("fs_metric: point outside the trusted region");
    const StateMap map = [&family](double p, double q) { return coherent_state(family, {p, q}); };
    MetricSample g = fs_metric(map, 2.0 * family.hbar(), pt.p, pt.q, step);
    g.convention = kCanonicalConvention;
    return g;
}

MetricSample fs_metric(const AffineFamily& family, AffinePhasePoint pt, double step) {
    if (!(pt.q - step > 0.0)) throw RegionError("fs_metric: affine stencil crosses q = 0");
    const StateMap map = [&family](double p, double q) { return affine_coherent_state(family, {p, q}); };
    MetricSample g = fs_metric(map, 2.0 * family.hbar(), pt.p, pt.q, step);
    g.convention = kAffineConvention;
    return g;
}

MetricSample fs_metric_from_variances(const CoherentFamily& family, PhasePoint pt) {
    const StateVector& eta = family.fiducial();
    const OperatorMatrix& q_op = family.Q();
    const OperatorMatrix& p_op = family.P();
    const OperatorMatrix one = identity(family.rep());
    const OperatorMatrix dq = q_op - expectation(q_op, eta) * one;
    const OperatorMatrix dp = p_op - expectation(p_op, eta) * one;
    const double var_q = expectation(dq * dq, eta).real();
    const double var_p = expectation(dp * dp, eta).real();
    const double anti = expectation(dq * dp + dp * dq, eta).real();
    const double hbar = family.hbar();
    MetricSample out;
    out.p = pt.p;
    out.q = pt.q;
    out.g_pp = 2.0 * var_q / hbar;
    out.g_pq = -anti / hbar;
    out.g_qq = 2.0 * var_p / hbar;
    out.convention = kCanonicalConvention;
    return out;
}

CartesianShift cartesian_shift(const MetricSample& g) {
    if (!g.positive_definite()) throw NumericError("cartesian_shift: metric is not positive definite");
    CartesianShift s;
    s.b = std::sqrt(g.g_qq);
    s.c = g.g_pq / s.b;
    s.a = std::sqrt(g.g_pp - s.c * s.c);
    return s;
}

MetricSample transform_metric(const MetricSample& g, const CartesianShift& s) {
    // d(p,q) = J^{-1} d(p',q') with J = [[a, 0], [c, b]].
    const Eigen::Matrix2d metric{{g.g_pp, g.g_pq}, {g.g_pq, g.g_qq}};
    const Eigen::Matrix2d jac{{s.a, 0.0}, {s.c, s.b}};
    const Eigen::Matrix2d inv = jac.inverse();
    const Eigen::Matrix2d out = inv.transpose() * metric * inv;
    MetricSample t = g;
    t.g_pp = out(0, 0);
    t.g_pq = out(0, 1);
    t.g_qq = out(1, 1);
    return t;
}

CurvatureSample gaussian_curvature(const MetricField& metric, double p, double q, double step) {
    std::array<std::array<MetricSample, 5>, 5> s;  // s[i][j] at (p + (i-2)h, q + (j-2)h)
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) s[i][j] = metric(p + (i - 2) * step, q + (j - 2) * step);

    auto along_p = [&](auto field, int j) {
        std::array<double, 5> f{};
        for (int i = 0; i < 5; ++i) f[i] = field(s[i][j]);
        return f;
    };
    auto along_q = [&](auto field, int i) {
        std::array<double, 5> f{};
        for (int j = 0; j < 5; ++j) f[j] = field(s[i][j]);
        return f;
    };
    const auto e = [](const MetricSample& m) { return m.g_pp; };
    const auto f = [](const MetricSample& m) { return m.g_pq; };
    const auto g = [](const MetricSample& m) { return m.g_qq; };

    const double h = step;
    const double E = s[2][2].g_pp, F = s[2][2].g_pq, G = s[2][2].g_qq;
    const double E_u = first_derivative(along_p(e, 2), h);
    const double E_v = first_derivative(along_q(e, 2), h);
    const double E_vv = second_derivative(along_q(e, 2), h);
    const double F_u = first_derivative(along_p(f, 2), h);
    const double F_v = first_derivative(along_q(f, 2), h);
    const double G_u = first_derivative(along_p(g, 2), h);
    const double G_v = first_derivative(along_q(g, 2), h);
    const double G_uu = second_derivative(along_p(g, 2), h);
    std::array<double, 5> f_v_rows{};
    for (int i = 0; i < 5; ++i) f_v_rows[i] = first_derivative(along_q(f, i), h);
    const double F_uv = first_derivative(f_v_rows, h);

    const Eigen::Matrix3d m1{{-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v},
                             {F_v - 0.5 * G_u, E, F},
                             {0.5 * G_v, F, G}};
    const Eigen::Matrix3d m2{{0.0, 0.5 * E_v, 0.5 * G_u}, {0.5 * E_v, E, F}, {0.5 * G_u, F, G}};
    const double det = E * G - F * F;
    const double k = (m1.determinant() - m2.determinant()) / (det * det);
    if (!std::isfinite(k)) throw NumericError("gaussian_curvature: non-finite result");
    return {p, q, k, 2.0 * k};
}

CurvatureSample gaussian_curvature(const CoherentFamily& family, PhasePoint pt, double step) {
    const double reach = 2.0 * step + kDefaultMetricStep;
    if (!family.in_trusted_region({std::abs(pt.p) + reach, std::abs(pt.q) + reach}))
        throw RegionError("gaussian_curvature: stencil leaves the trusted region");
    return gaussian_curvature([&family](double p, double q) { return fs_metric(family, PhasePoint{p, q}); }, pt.p,
                              pt.q, step);
}

CurvatureSample gaussian_curvature(const AffineFamily& family, AffinePhasePoint pt, double step) {
    const double reach = 2.0 * step + kDefaultMetricStep;
    if (!(pt.q - reach > 0.0)) throw RegionError("gaussian_curvature: stencil crosses q = 0");
    // Stencil points may sit slightly outside the 1e-8 trusted region; the
    // window must still hold all but 1e-6 of each state.
    if (family.tail_mass({pt.p, pt.q - reach}) > 1e-6 || family.tail_mass({pt.p, pt.q + reach}) > 1e-6)
        throw RegionError("gaussian_curvature: stencil leaves the grid window");
    return gaussian_curvature(
        [&family](double p, double q) { return fs_metric(family, AffinePhasePoint{p, q}); }, pt.p, pt.q, step);
}

MetricSample poincare_metric(double beta, double hbar, AffinePhasePoint pt) {
    MetricSample m;
    m.p = pt.p;
    m.q = pt.q;
    m.g_pp = pt.q * pt.q / (beta * hbar);
    m.g_qq = beta * hbar / (pt.q * pt.q);
    m.convention = kAffineConvention;
    return m;
}

}  // namespace equant

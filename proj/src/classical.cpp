#include "equant/classical.hpp"

#include "equant/errors.hpp"
#include "equant/report.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace equant {

namespace {

constexpr double kGradientStep = 1e-6;

double central(const PhaseFunction& f, double p, double q, bool along_p) {
    const double h = kGradientStep * (1.0 + std::abs(along_p ? p : q));
    return along_p ? (f(p + h, q) - f(p - h, q)) / (2.0 * h) : (f(p, q + h) - f(p, q - h)) / (2.0 * h);
}

// Index/weight pairs for d/dt at every sample of a uniform series.
struct Stencil {
    std::array<std::size_t, 5> idx{};
    std::array<double, 5> w{};
    int count = 0;
};

std::vector<Stencil> derivative_stencils(std::size_t n, double h, bool periodic, bool fourth_order) {
    if (n < 5) throw std::invalid_argument("time derivative needs at least 5 samples");
    std::vector<Stencil> out(n);
    const std::size_t m = periodic ? n - 1 : n;  // distinct samples
    auto wrap = [m](long i) { return static_cast<std::size_t>(((i % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m)); };
    for (std::size_t i = 0; i < n; ++i) {
        Stencil s;
        const long li = static_cast<long>(i);
        const bool interior4 = periodic || (i >= 2 && i + 2 < n);
        const bool interior2 = periodic || (i >= 1 && i + 1 < n);
        if (fourth_order && interior4) {
            s.count = 4;
            s.idx = {wrap(li - 2), wrap(li - 1), wrap(li + 1), wrap(li + 2), 0};
            s.w = {1.0 / (12.0 * h), -8.0 / (12.0 * h), 8.0 / (12.0 * h), -1.0 / (12.0 * h), 0.0};
        } else if (!fourth_order && interior2) {
            s.count = 2;
            s.idx = {wrap(li - 1), wrap(li + 1), 0, 0, 0};
            s.w = {-0.5 / h, 0.5 / h, 0.0, 0.0, 0.0};
        } else if (fourth_order) {
            s.count = 5;
            const bool left = i < 2;
            const double sign = left ? 1.0 : -1.0;
            std::array<double, 5> w = (i == 0 || i == n - 1) ? std::array<double, 5>{-25, 48, -36, 16, -3}
                                                              : std::array<double, 5>{-3, -10, 18, -6, 1};
            for (int k = 0; k < 5; ++k) {
                if (i == 0 || i == n - 1)
                    s.idx[k] = left ? static_cast<std::size_t>(k) : n - 1 - static_cast<std::size_t>(k);
                else
                    s.idx[k] = left ? static_cast<std::size_t>(k) : n - 1 - static_cast<std::size_t>(k);
                s.w[k] = sign * w[k] / (12.0 * h);
            }
        } else {
            s.count = 3;
            const bool left = i == 0;
            const double sign = left ? 1.0 : -1.0;
            const std::array<double, 3> w{-3, 4, -1};
            for (int k = 0; k < 3; ++k) {
                s.idx[k] = left ? static_cast<std::size_t>(k) : n - 1 - static_cast<std::size_t>(k);
                s.w[k] = sign * w[k] / (2.0 * h);
            }
        }
        out[i] = s;
    }
    return out;
}

template <typename T>
T apply_stencil(const Stencil& s, const std::vector<T>& f) {
    T acc = s.w[0] * f[s.idx[0]];
    for (int k = 1; k < s.count; ++k) acc = acc + s.w[k] * f[s.idx[k]];
    return acc;
}

template <typename T>
T trapezoid(const std::vector<T>& f, double h) {
    T acc = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
    return h * acc;
}

double uniform_step(const Trajectory& traj) {
    if (traj.size() < 5) throw std::invalid_argument("trajectory needs at least 5 samples");
    if (!traj.uniform()) throw std::invalid_argument("trajectory must have a uniform time step");
    return traj.duration() / static_cast<double>(traj.size() - 1);
}

using PathStates = std::function<StateVector(double, double)>;

ActionReport action_core(const PathStates& state, const OperatorMatrix& h_op, const Trajectory& traj,
                         const PhaseFunction& symbol, double hbar, bool affine) {
    const double dt = uniform_step(traj);
    const std::size_t n = traj.size();
    const bool periodic = traj.closed();

    const Eigen::SparseMatrix<Complex> h_sparse = h_op.entries.sparseView(Complex(0.0), 0.0);
    const bool use_sparse = h_sparse.nonZeros() < h_op.entries.size() / 4;
    const RealVector& w = h_op.rep.weights();

    std::vector<Vector> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = state(traj.points[i].p, traj.points[i].q).coeffs;

    const auto d4 = derivative_stencils(n, dt, periodic, true);
    const auto d2 = derivative_stencils(n, dt, periodic, false);

    std::vector<Complex> lagrangian(n);
    std::vector<double> kinetic_gap(n);
    std::vector<double> energy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector weighted = w.cast<Complex>().cwiseProduct(psi[i]);
        const Vector dpsi4 = apply_stencil(d4[i], psi);
        const Vector dpsi2 = apply_stencil(d2[i], psi);
        const Complex kin4 = Complex(0.0, hbar) * weighted.dot(dpsi4);
        const Complex kin2 = Complex(0.0, hbar) * weighted.dot(dpsi2);
        const Vector hpsi = use_sparse ? Vector(h_sparse * psi[i]) : Vector(h_op.entries * psi[i]);
        const Complex hexp = weighted.dot(hpsi);
        lagrangian[i] = kin4 - hexp;
        kinetic_gap[i] = (kin4 - kin2).real();
        energy[i] = symbol ? symbol(traj.points[i].p, traj.points[i].q) : hexp.real();
    }

    std::vector<double> ps(n), qs(n);
    for (std::size_t i = 0; i < n; ++i) {
        ps[i] = traj.points[i].p;
        qs[i] = traj.points[i].q;
    }
    std::vector<double> pq_form(n), qp_form(n);
    for (std::size_t i = 0; i < n; ++i) {
        pq_form[i] = ps[i] * apply_stencil(d4[i], qs) - energy[i];
        qp_form[i] = -qs[i] * apply_stencil(d4[i], ps) - energy[i];
    }

    ActionReport r;
    const Complex quantum = trapezoid(lagrangian, dt);
    r.quantum = quantum.real();
    r.quantum_imag = quantum.imag();
    const double pq = trapezoid(pq_form, dt);
    const double qp = trapezoid(qp_form, dt);
    r.classical = affine ? qp : pq;
    r.classical_other = affine ? pq : qp;
    r.boundary_term = ps.back() * qs.back() - ps.front() * qs.front();
    r.difference = r.quantum - r.classical;
    r.richardson_gap = std::abs(trapezoid(kinetic_gap, dt));
    return r;
}

}  // namespace

double ClassicalHamiltonian::grad_p(double p, double q) const {
    return dh_dp ? dh_dp(p, q) : central(value, p, q, true);
}

double ClassicalHamiltonian::grad_q(double p, double q) const {
    return dh_dq ? dh_dq(p, q) : central(value, p, q, false);
}

ClassicalHamiltonian oscillator_hamiltonian() {
    return {[](double p, double q) { return 0.5 * (p * p + q * q); }, [](double p, double) { return p; },
            [](double, double q) { return q; }, true};
}

ClassicalHamiltonian translation_hamiltonian() {
    return {[](double p, double) { return p; }, [](double, double) { return 1.0; },
            [](double, double) { return 0.0; }, true};
}

ClassicalHamiltonian from_function(PhaseFunction h, bool separable) { return {std::move(h), {}, {}, separable}; }

Trajectory::Trajectory(std::vector<double> t, std::vector<PhasePoint> pts) : times(std::move(t)), points(std::move(pts)) {
    if (times.size() != points.size()) throw std::invalid_argument("trajectory times and points differ in length");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("trajectory times must be strictly ascending");
    for (const auto& pt : points)
        if (!std::isfinite(pt.p) || !std::isfinite(pt.q)) throw NumericError("trajectory contains non-finite points");
}

bool Trajectory::uniform(double rel_tol) const {
    if (times.size() < 2) return true;
    const double h = duration() / static_cast<double>(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs((times[i] - times[i - 1]) - h) > rel_tol * h) return false;
    return true;
}

bool Trajectory::closed(double tol) const {
    if (points.size() < 2) return false;
    return std::abs(points.front().p - points.back().p) <= tol && std::abs(points.front().q - points.back().q) <= tol;
}

Trajectory sample_trajectory(const std::function<PhasePoint(double)>& path, double t0, double t1, std::size_t n) {
    std::vector<double> t(n + 1);
    std::vector<PhasePoint> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
        pts[i] = path(t[i]);
    }
    return {std::move(t), std::move(pts)};
}

Trajectory integrate(const ClassicalHamiltonian& h, PhasePoint start, double t_span, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(t_span > 0.0)) throw std::invalid_argument("integrate: span must be positive");
    const auto steps = static_cast<std::size_t>(std::ceil(t_span / dt - 1e-9));
    const double step = t_span / static_cast<double>(steps);

    std::vector<double> times(steps + 1);
    std::vector<PhasePoint> pts(steps + 1);
    times[0] = 0.0;
    pts[0] = start;
    const double e0 = h(start.p, start.q);
    double drift = 0.0;
    PhasePoint z = start;
    for (std::size_t k = 1; k <= steps; ++k) {
        if (h.separable) {
            const double p_half = z.p - 0.5 * step * h.grad_q(z.p, z.q);
            const double q_new = z.q + step * h.grad_p(p_half, z.q);
            const double p_new = p_half - 0.5 * step * h.grad_q(p_half, q_new);
            z = {p_new, q_new};
        } else {
            PhasePoint next{z.p - step * h.grad_q(z.p, z.q), z.q + step * h.grad_p(z.p, z.q)};
            for (int it = 0; it < 100; ++it) {
                const PhasePoint mid{0.5 * (z.p + next.p), 0.5 * (z.q + next.q)};
                const PhasePoint upd{z.p - step * h.grad_q(mid.p, mid.q), z.q + step * h.grad_p(mid.p, mid.q)};
                const double change = std::abs(upd.p - next.p) + std::abs(upd.q - next.q);
                next = upd;
                if (change <= 1e-15 * (1.0 + std::abs(next.p) + std::abs(next.q))) break;
            }
            z = next;
        }
        if (!std::isfinite(z.p) || !std::isfinite(z.q)) {
            std::ostringstream msg;
            msg << "integration blew up after t = " << times[k - 1];
            throw BlowUpError(msg.str(), times[k - 1]);
        }
        times[k] = static_cast<double>(k) * step;
        pts[k] = z;
        drift = std::max(drift, std::abs(h(z.p, z.q) - e0));
    }
    Trajectory traj(std::move(times), std::move(pts));
    traj.energy_drift = drift;
    return traj;
}

ContactTransform identity_transform() {
    return {"identity", [](PhasePoint x) { return x; }, [](PhasePoint x) { return x; },
            PhaseFunction([](double, double) { return 0.0; })};
}

ContactTransform rotation_transform() {
    // p dq = q* d(-p*) = p* dq* - d(p* q*)
    return {"rotation", [](PhasePoint x) { return PhasePoint{-x.q, x.p}; },
            [](PhasePoint s) { return PhasePoint{s.q, -s.p}; },
            PhaseFunction([](double ps, double qs) { return -ps * qs; })};
}

ContactTransform sqrt2_transform() {
    constexpr double r = std::numbers::sqrt2;
    return {"sqrt2", [](PhasePoint x) { return PhasePoint{r * x.p + x.q, r * x.q + x.p}; },
            [](PhasePoint s) { return PhasePoint{r * s.p - s.q, r * s.q - s.p}; },
            PhaseFunction([](double ps, double qs) { return ps * qs - (ps * ps + qs * qs) / r; })};
}

ContactTransform scaling_transform(double lambda) {
    if (!(lambda > 0.0) && !(lambda < 0.0)) throw DegenerateTransform("scaling transform needs lambda != 0");
    std::ostringstream name;
    name << "scaling(" << lambda << ")";
    return {name.str(), [lambda](PhasePoint x) { return PhasePoint{x.p / lambda, lambda * x.q}; },
            [lambda](PhasePoint s) { return PhasePoint{lambda * s.p, s.q / lambda}; },
            PhaseFunction([](double, double) { return 0.0; })};
}

std::vector<ContactTransform> transform_catalog() {
    return {identity_transform(), rotation_transform(), sqrt2_transform(), scaling_transform(2.0)};
}

BracketReport check_bracket(const ContactTransform& t, std::span<const PhasePoint> pts, double h) {
    BracketReport r;
    for (const auto& x : pts) {
        if (!std::isfinite(x.p) || !std::isfinite(x.q)) throw NumericError("check_bracket: non-finite point");
        const PhasePoint fp = t.forward({x.p + h, x.q});
        const PhasePoint fm = t.forward({x.p - h, x.q});
        const PhasePoint gp = t.forward({x.p, x.q + h});
        const PhasePoint gm = t.forward({x.p, x.q - h});
        const double dps_dp = (fp.p - fm.p) / (2.0 * h);
        const double dqs_dp = (fp.q - fm.q) / (2.0 * h);
        const double dps_dq = (gp.p - gm.p) / (2.0 * h);
        const double dqs_dq = (gp.q - gm.q) / (2.0 * h);
        const double bracket = dqs_dq * dps_dp - dqs_dp * dps_dq;
        if (!std::isfinite(bracket) || std::abs(bracket) < 1e-12)
            throw DegenerateTransform("check_bracket: singular Jacobian for '" + t.name + "'");
        r.brackets.push_back(bracket);
        r.max_deviation = std::max(r.max_deviation, std::abs(bracket - 1.0));
    }
    return r;
}

double roundtrip_error(const ContactTransform& t, std::span<const PhasePoint> pts) {
    double err = 0.0;
    for (const auto& x : pts) {
        const PhasePoint back = t.forward(t.inverse(x));
        err = std::max({err, std::abs(back.p - x.p), std::abs(back.q - x.q)});
    }
    return err;
}

ClassicalHamiltonian pullback_H(const ClassicalHamiltonian& h, const ContactTransform& t) {
    auto inverse = t.inverse;
    auto forward = t.forward;
    auto checked_inverse = [inverse, forward](double ps, double qs) {
        const PhasePoint x = inverse({ps, qs});
        const PhasePoint back = forward(x);
        if (!std::isfinite(x.p) || !std::isfinite(x.q) ||
            std::abs(back.p - ps) + std::abs(back.q - qs) > 1e-9 * (1.0 + std::abs(ps) + std::abs(qs)))
            throw DegenerateTransform("pullback_H: inverse map failed");
        return x;
    };
    ClassicalHamiltonian out;
    out.value = [h, checked_inverse](double ps, double qs) {
        const PhasePoint x = checked_inverse(ps, qs);
        return h(x.p, x.q);
    };
    // Chain rule with a central-difference Jacobian of the inverse map.
    auto gradient = [h, inverse, checked_inverse](double ps, double qs, bool along_p) {
        const PhasePoint x = checked_inverse(ps, qs);
        const double step = kGradientStep * (1.0 + std::abs(along_p ? ps : qs));
        const PhasePoint plus = along_p ? inverse({ps + step, qs}) : inverse({ps, qs + step});
        const PhasePoint minus = along_p ? inverse({ps - step, qs}) : inverse({ps, qs - step});
        const double dp = (plus.p - minus.p) / (2.0 * step);
        const double dq = (plus.q - minus.q) / (2.0 * step);
        return h.grad_p(x.p, x.q) * dp + h.grad_q(x.p, x.q) * dq;
    };
    out.dh_dp = [gradient](double ps, double qs) { return gradient(ps, qs, true); };
    out.dh_dq = [gradient](double ps, double qs) { return gradient(ps, qs, false); };
    out.separable = false;
    return out;
}

Trajectory map_trajectory(const Trajectory& traj, const std::function<PhasePoint(PhasePoint)>& map) {
    std::vector<PhasePoint> pts;
    pts.reserve(traj.size());
    for (const auto& x : traj.points) pts.push_back(map(x));
    return {traj.times, std::move(pts)};
}

ActionReport enhanced_action(const CoherentFamily& family, const OperatorMatrix& h, const Trajectory& traj,
                             const PhaseFunction& symbol) {
    const PathStates state = [&family](double p, double q) { return coherent_state(family, {p, q}); };
    return action_core(state, h, traj, symbol, family.hbar(), false);
}

ActionReport enhanced_action(const AffineFamily& family, const OperatorMatrix& h, const Trajectory& traj,
                             const PhaseFunction& symbol) {
    for (const auto& x : traj.points)
        if (!(x.q > 0.0)) throw std::invalid_argument("affine trajectory must keep q > 0");
    const PathStates state = [&family](double p, double q) { return affine_coherent_state(family, {p, q}); };
    return action_core(state, h, traj, symbol, family.hbar(), true);
}

double kinetic_integral(const Trajectory& traj) {
    const double dt = uniform_step(traj);
    const std::size_t n = traj.size();
    const auto d4 = derivative_stencils(n, dt, traj.closed(), true);
    std::vector<double> qs(n), integrand(n);
    for (std::size_t i = 0; i < n; ++i) qs[i] = traj.points[i].q;
    for (std::size_t i = 0; i < n; ++i) integrand[i] = traj.points[i].p * apply_stencil(d4[i], qs);
    return trapezoid(integrand, dt);
}

double relabel_invariance(const CoherentFamily& family, const ContactTransform& t, PhasePoint pt_star) {
    const PhasePoint labels = t.inverse(pt_star);
    const StateVector pulled = coherent_state(family, labels);
    const PhasePoint round = t.inverse(t.forward(labels));
    const StateVector original = coherent_state(family, round);
    return distance(pulled, original);
}

TransformedActionReport transformed_action_identity(const CoherentFamily& family, const OperatorMatrix& h,
                                                    const ContactTransform& t, const Trajectory& traj_star,
                                                    const PhaseFunction& symbol) {
    if (!t.generator) throw GeneratorRequired("transform '" + t.name + "' has no generator G*");
    const Trajectory pulled = map_trajectory(traj_star, t.inverse);
    const ActionReport quantum = enhanced_action(family, h, pulled, symbol);

    const double dt = uniform_step(traj_star);
    const std::size_t n = traj_star.size();
    const auto d4 = derivative_stencils(n, dt, traj_star.closed(), true);
    std::vector<double> qs(n), gs(n), kinetic(n), gdot(n), energy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint& s = traj_star.points[i];
        qs[i] = s.q;
        gs[i] = (*t.generator)(s.p, s.q);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const PhasePoint& s = traj_star.points[i];
        const PhasePoint x = pulled.points[i];
        kinetic[i] = s.p * apply_stencil(d4[i], qs);
        gdot[i] = apply_stencil(d4[i], gs);
        energy[i] = symbol ? symbol(x.p, x.q) : weak_symbol(family, h, x);
    }
    TransformedActionReport r;
    r.quantum = quantum.quantum;
    r.generator_term = trapezoid(gdot, dt);
    r.classical_star = trapezoid(kinetic, dt) + r.generator_term - trapezoid(energy, dt);
    r.difference = r.quantum - r.classical_star;
    return r;
}

StationarityReport action_stationarity(const CoherentFamily& family, const OperatorMatrix& h,
                                       const Trajectory& solution, std::span<const double> eps) {
    if (eps.size() < 2) throw std::invalid_argument("action_stationarity needs at least two eps values");
    const double base = enhanced_action(family, h, solution).quantum;
    const double t0 = solution.times.front();
    const double span = solution.duration();
    StationarityReport r;
    for (double e : eps) {
        std::vector<PhasePoint> pts = solution.points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double s = std::sin(std::numbers::pi * (solution.times[i] - t0) / span);
            const double bump = e * s * s;
            pts[i].p += bump;
            pts[i].q += bump;
        }
        const Trajectory perturbed(solution.times, std::move(pts));
        r.eps.push_back(e);
        r.delta_action.push_back(enhanced_action(family, h, perturbed).quantum - base);
    }
    const double ratio = std::abs(r.delta_action.front() / r.delta_action.back());
    r.exponent = std::log(ratio) / std::log(r.eps.front() / r.eps.back());
    return r;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const Trajectory* star) {
    if (star && star->size() != traj.size()) throw std::invalid_argument("star trajectory length differs");
    out << (star ? "t,p,q,p_star,q_star\n" : "t,p,q\n");
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_number(traj.times[i]) << ',' << format_number(traj.points[i].p) << ','
            << format_number(traj.points[i].q);
        if (star) out << ',' << format_number(star->points[i].p) << ',' << format_number(star->points[i].q);
        out << '\n';
    }
}

}  // namespace equant

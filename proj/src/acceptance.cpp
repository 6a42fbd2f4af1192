#include "equant/acceptance.hpp"

#include "equant/catalog.hpp"
#include "equant/classical.hpp"
#include "equant/geometry.hpp"
#include "equant/report.hpp"
#include "equant/selfadjoint.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace equant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kSeed = 20240611u;

CriterionResult guarded(int id, std::string name, const std::function<void(std::vector<Measurement>&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    try {
        body(r.measurements);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

StateVector random_fiducial(const Representation& rep, Index active) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector c = Vector::Zero(rep.size());
    for (Index k = 0; k < active; ++k) c(k) = Complex(u(rng), u(rng)) / double(k + 1);
    return normalized(StateVector(rep, c));
}

}  // namespace

bool CriterionResult::passed() const {
    if (!error.empty() || measurements.empty()) return false;
    return std::all_of(measurements.begin(), measurements.end(), [](const Measurement& m) { return m.passed(); });
}

CriterionResult check_cartesian_metric() {
    return guarded(1, "cartesian metric", [](std::vector<Measurement>& out) {
        const CoherentFamily family(Representation::fock(128, 1.0));
        const auto axis = linspace(-1.0, 1.0, 11);
        const auto samples = parallel_map(axis.size() * axis.size(), [&](std::size_t k) {
            return fs_metric(family, PhasePoint{axis[k / axis.size()], axis[k % axis.size()]});
        });
        double dpp = 0.0, dqq = 0.0, dpq = 0.0;
        for (const auto& g : samples) {
            dpp = std::max(dpp, std::abs(g.g_pp - 1.0));
            dqq = std::max(dqq, std::abs(g.g_qq - 1.0));
            dpq = std::max(dpq, std::abs(g.g_pq));
        }
        out.push_back({"max|g_pp-1|", dpp, 1e-5});
        out.push_back({"max|g_qq-1|", dqq, 1e-5});
        out.push_back({"max|g_pq|", dpq, 1e-5});
    });
}

CriterionResult check_variance_formula() {
    return guarded(2, "variance formula", [](std::vector<Measurement>& out) {
        const Representation rep = Representation::fock(128, 1.0);
        const std::vector<std::pair<std::string, FiducialSpec>> fiducials{
            {"vacuum", FiducialSpec::vacuum()},
            {"fock1", FiducialSpec::custom(basis_vector(rep, 1), "fock1")},
            {"random", FiducialSpec::custom(random_fiducial(rep, 6), "random")}};
        const std::vector<PhasePoint> points{{0.0, 0.0}, {0.4, -0.3}, {-0.7, 0.6}};
        for (const auto& [label, spec] : fiducials) {
            const CoherentFamily family(rep, spec);
            double gap = 0.0;
            for (const auto& pt : points) {
                const MetricSample fd = fs_metric(family, pt);
                const MetricSample var = fs_metric_from_variances(family, pt);
                gap = std::max({gap, std::abs(fd.g_pp - var.g_pp), std::abs(fd.g_pq - var.g_pq),
                                std::abs(fd.g_qq - var.g_qq)});
            }
            out.push_back({"max|fd-variance| " + label, gap, 1e-5});
        }
    });
}

CriterionResult check_affine_metric() {
    return guarded(3, "affine metric", [](std::vector<Measurement>& out) {
        const Representation rep = Representation::half_line(default_affine_grid(), 1.0);
        for (double beta : {1.0, 2.0}) {
            const AffineFamily family(rep, beta);
            const double bh = beta * family.hbar();
            double dpp = 0.0, dqq = 0.0;
            for (double q : {0.5, 1.0, 2.0}) {
                const MetricSample g = fs_metric(family, AffinePhasePoint{0.0, q});
                dpp = std::max(dpp, std::abs(g.g_pp * bh / (q * q) - 1.0));
                dqq = std::max(dqq, std::abs(g.g_qq * q * q / bh - 1.0));
            }
            const std::string tag = " beta=" + std::to_string(static_cast<int>(beta));
            out.push_back({"max|g_pp*beta*hbar/q^2-1|" + tag, dpp, 1e-3});
            out.push_back({"max|g_qq*q^2/(beta*hbar)-1|" + tag, dqq, 1e-3});
        }
    });
}

CriterionResult check_affine_curvature() {
    return guarded(4, "affine curvature", [](std::vector<Measurement>& out) {
        const Representation rep = Representation::half_line(default_affine_grid(), 1.0);
        for (double beta : {1.0, 2.0}) {
            const AffineFamily family(rep, beta);
            const double target = -2.0 / (beta * family.hbar());
            std::vector<AffinePhasePoint> pts;
            for (double p : {-0.5, 0.0, 0.5})
                for (double q : {0.8, 1.0, 1.25}) pts.push_back({p, q});
            const auto samples = parallel_map(pts.size(), [&](std::size_t k) { return gaussian_curvature(family, pts[k]); });
            double worst = 0.0, lo = samples.front().scalar, hi = lo, mean = 0.0;
            for (const auto& s : samples) {
                worst = std::max(worst, std::abs(s.scalar / target - 1.0));
                lo = std::min(lo, s.scalar);
                hi = std::max(hi, s.scalar);
                mean += s.scalar / static_cast<double>(samples.size());
            }
            const std::string tag = " beta=" + std::to_string(static_cast<int>(beta));
            out.push_back({"max|R/(-2/(beta*hbar))-1|" + tag, worst, 1e-2});
            out.push_back({"spread (max-min)/|mean|" + tag, (hi - lo) / std::abs(mean), 1e-2});
        }
    });
}

CriterionResult check_weak_correspondence() {
    return guarded(5, "weak correspondence", [](std::vector<Measurement>& out) {
        const CatalogHamiltonian& osc = find_hamiltonian("oscillator");
        {
            const CoherentFamily family(Representation::fock(128, 1.0));
            const OperatorMatrix h = quantize(family, osc.polynomial);
            double err = 0.0;
            for (double p : linspace(-2.0, 2.0, 5))
                for (double q : linspace(-2.0, 2.0, 5))
                    err = std::max(err, std::abs(weak_symbol(family, h, {p, q}) - (0.5 * (p * p + q * q) + 0.5)));
            out.push_back({"max|symbol-(p^2+q^2)/2-hbar/2|", err, 1e-8});
        }
        // Least-squares slope of correction against hbar through the origin.
        double num = 0.0, den = 0.0, worst = 0.0;
        for (double hbar : {0.5, 1.0, 2.0}) {
            const CoherentFamily family(Representation::fock(128, hbar));
            const OperatorMatrix h = quantize(family, osc.polynomial);
            double mean = 0.0;
            const std::vector<PhasePoint> pts{{0.0, 0.0}, {0.5, -0.5}, {1.0, 0.3}};
            for (const auto& pt : pts) mean += hbar_correction(family, h, osc.classical.value, pt) / 3.0;
            num += mean * hbar;
            den += hbar * hbar;
            worst = std::max(worst, std::abs(mean / (0.5 * hbar) - 1.0));
        }
        const double slope = num / den;
        out.push_back({"|fitted slope/0.5-1|", std::abs(slope / 0.5 - 1.0), 1e-6});
        out.push_back({"max|correction/(hbar/2)-1|", worst, 1e-6});
    });
}

CriterionResult check_enhanced_action() {
    return guarded(6, "enhanced action", [](std::vector<Measurement>& out) {
        const CoherentFamily family(Representation::fock(128, 1.0));
        const OperatorMatrix h = quantize(family, find_hamiltonian("oscillator").polynomial);
        const auto circle = [](double t) { return PhasePoint{std::cos(t), std::sin(t)}; };
        const ActionReport a = enhanced_action(family, h, sample_trajectory(circle, 0.0, 2.0 * kPi, 2000));
        out.push_back({"|quantum-classical| circle", std::abs(a.difference), 1e-5});
        const Trajectory solution = sample_trajectory(circle, 0.0, 2.0, 1000);
        const std::vector<double> eps{1e-2, 1e-3};
        const StationarityReport s = action_stationarity(family, h, solution, eps);
        out.push_back({"stationarity exponent", s.exponent, 1.95, true});
    });
}

CriterionResult check_contact_transforms() {
    return guarded(7, "contact transforms", [](std::vector<Measurement>& out) {
        std::mt19937_64 rng(kSeed);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        std::vector<PhasePoint> pts;
        for (int i = 0; i < 16; ++i) pts.push_back({u(rng), u(rng)});

        double bracket = 0.0;
        for (const auto& t : transform_catalog()) bracket = std::max(bracket, check_bracket(t, pts).max_deviation);
        out.push_back({"max bracket deviation", bracket, 1e-10});

        const CoherentFamily family(Representation::fock(128, 1.0));
        double relabel = relabel_invariance(family, rotation_transform(), {-1.0, 0.5});
        for (const auto& t : transform_catalog())
            for (std::size_t i = 0; i < 4; ++i) {
                const PhasePoint star = t.forward({0.5 * pts[i].p, 0.5 * pts[i].q});
                relabel = std::max(relabel, relabel_invariance(family, t, star));
            }
        out.push_back({"max relabel distance", relabel, 1e-10});

        const OperatorMatrix h = quantize(family, find_hamiltonian("oscillator").polynomial);
        const Trajectory arc =
            sample_trajectory([](double t) { return PhasePoint{std::cos(t), std::sin(t)}; }, 0.0, 2.0, 1000);
        for (const auto& t : {rotation_transform(), sqrt2_transform()}) {
            const TransformedActionReport r = transformed_action_identity(family, h, t, map_trajectory(arc, t.forward));
            out.push_back({"|transformed action gap| " + t.name, std::abs(r.difference), 1e-5});
            // The generator contributes on this open arc, so the identity is not vacuous.
            out.push_back({"|int G*' dt| " + t.name, std::abs(r.generator_term), 1e-3, true});
        }
    });
}

CriterionResult check_self_adjointness() {
    return guarded(8, "self-adjointness", [](std::vector<Measurement>& out) {
        const Domain half{DomainKind::HalfLine, 0.0};
        const Domain line{DomainKind::FullLine, 0.0};
        auto flag = [](bool ok) { return ok ? 0.0 : 1.0; };

        const DeficiencyReport p_half = deficiency_indices(OperatorKind::MomentumP, half, 1.0);
        out.push_back({"P halfline is (1,0) NotExtendable",
                       flag(p_half.n_plus == 1 && p_half.n_minus == 0 && p_half.verdict == Verdict::NotExtendable), 0.0});
        out.push_back({"|norm(exp(-x))^2-0.5|", std::abs(p_half.plus.norm_squared - 0.5), 1e-8});

        const DeficiencyReport p_line = deficiency_indices(OperatorKind::MomentumP, line, 1.0);
        out.push_back({"P fullline is (0,0)", flag(p_line.n_plus == 0 && p_line.n_minus == 0), 0.0});
        const DeficiencyReport d_half = deficiency_indices(OperatorKind::DilationD, half, 1.0);
        out.push_back({"D halfline is (0,0)", flag(d_half.n_plus == 0 && d_half.n_minus == 0), 0.0});

        bool q_star = false;
        for (const auto& d : quantum_transform_diagnosis(1.0))
            if (d.name == "Q*=P") q_star = d.report.verdict == Verdict::NotExtendable;
        out.push_back({"Q*=P halfline NotExtendable", flag(q_star), 0.0});

        bool invariant = true;
        for (double hbar : {0.5, 1.0, 2.0}) {
            for (double gamma : {0.0, 1.0, 1e3}) {
                const auto r = deficiency_indices(OperatorKind::MomentumP, Domain{DomainKind::HalfLine, gamma}, hbar);
                invariant = invariant && r.n_plus == 1 && r.n_minus == 0;
            }
            const auto l = deficiency_indices(OperatorKind::MomentumP, line, hbar);
            const auto d = deficiency_indices(OperatorKind::DilationD, half, hbar);
            invariant = invariant && l.n_plus == 0 && l.n_minus == 0 && d.n_plus == 0 && d.n_minus == 0;
        }
        out.push_back({"verdicts invariant over hbar and gamma", flag(invariant), 0.0});
    });
}

CriterionResult check_spectral_realization() {
    return guarded(9, "spectral realization", [](std::vector<Measurement>& out) {
        const CoherentFamily family(Representation::fock(128, 1.0));
        const OperatorMatrix h = quantize(family, find_hamiltonian("oscillator").polynomial);
        const SpectralData s = spectral_decompose(h);
        double err = 0.0;
        for (Index n = 0; n <= 4; ++n) err = std::max(err, std::abs(s.eigenvalues(n) - (double(n) + 0.5)));
        out.push_back({"max|E_n-(n+1/2)| n<=4", err, 1e-8});
        const double rec = (reconstruct(s) - h.entries).norm() / h.entries.norm();
        out.push_back({"relative reconstruction error", rec, 1e-10});
    });
}

std::vector<CriterionResult> run_acceptance() {
    return {check_cartesian_metric(),    check_variance_formula(),    check_affine_metric(),
            check_affine_curvature(),    check_weak_correspondence(), check_enhanced_action(),
            check_contact_transforms(),  check_self_adjointness(),    check_spectral_realization()};
}

}  // namespace equant

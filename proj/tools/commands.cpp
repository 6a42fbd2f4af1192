#include "commands.hpp"

#include "equant/acceptance.hpp"
#include "equant/catalog.hpp"
#include "equant/classical.hpp"
#include "equant/errors.hpp"
#include "equant/geometry.hpp"
#include "equant/report.hpp"
#include "equant/selfadjoint.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

namespace equant::cli {

namespace {

using json = nlohmann::ordered_json;

std::pair<int, int> parse_grid(const std::string& spec) {
    const auto x = spec.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(spec);
        std::size_t used_a = 0, used_b = 0;
        const int a = std::stoi(spec.substr(0, x), &used_a);
        const int b = std::stoi(spec.substr(x + 1), &used_b);
        if (used_a != x || used_b != spec.size() - x - 1 || a < 2 || b < 2 || a > 1001 || b > 1001)
            throw std::invalid_argument(spec);
        return {a, b};
    } catch (const std::exception&) {
        throw UsageError("--grid expects NxM with 2 <= N, M <= 1001, got '" + spec + "'");
    }
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> v = linspace(std::log(a), std::log(b), n);
    for (auto& x : v) x = std::exp(x);
    return v;
}

Representation fock_rep(const RunConfig& cfg) { return Representation::fock(cfg.dim, cfg.hbar); }

Representation affine_rep(const RunConfig& cfg) {
    return Representation::half_line({cfg.points, cfg.x_min, cfg.x_max, Spacing::Logarithmic}, cfg.hbar);
}

const CatalogHamiltonian& hamiltonian(const RunConfig& cfg) {
    try {
        return find_hamiltonian(cfg.ham);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void require_trusted(const CoherentFamily& family, PhasePoint pt) {
    if (!family.in_trusted_region(pt)) {
        std::ostringstream msg;
        msg << "point (" << pt.p << ", " << pt.q << ") lies outside the trusted region |p|,|q| <= "
            << family.trusted_radius() << "; raise --dim or shrink the sweep";
        throw UsageError(msg.str());
    }
}

void write_outputs(const RunConfig& cfg, const std::string& name, const std::string& csv, const json& summary) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + cfg.out + "': " + ec.message());
    std::ofstream c(dir / (name + ".csv"), std::ios::binary);
    std::ofstream j(dir / (name + ".json"), std::ios::binary);
    if (!c || !j) throw UsageError("cannot write into '" + cfg.out + "'");
    c << csv;
    j << summary.dump(2) << '\n';
}

int finish(const std::string& name, const std::vector<std::size_t>& failing, json& summary) {
    summary["failing_rows"] = failing;
    summary["passed"] = failing.empty();
    if (!failing.empty()) {
        std::cerr << name << ": " << failing.size() << " row(s) outside tolerance:";
        for (auto i : failing) std::cerr << ' ' << i;
        std::cerr << '\n';
    }
    std::cout << name << ": " << (failing.empty() ? "PASS" : "FAIL") << '\n';
    return failing.empty() ? kPass : kNumericFailure;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

}  // namespace

void validate(const RunConfig& cfg) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string("--") + name + " must be positive and finite");
    };
    positive(cfg.hbar, "hbar");
    positive(cfg.beta, "beta");
    positive(cfg.p_max, "p-max");
    positive(cfg.q_max, "q-max");
    positive(cfg.q_min, "q-min");
    positive(cfg.q_max_affine, "q-max-affine");
    positive(cfg.step, "step");
    positive(cfg.curvature_step, "curvature-step");
    positive(cfg.t_span, "t-span");
    positive(cfg.dt, "dt");
    positive(cfg.x_min, "x-min");
    positive(cfg.x_max, "x-max");
    if (cfg.dim < 2 || cfg.dim > 4096) throw UsageError("--dim must lie in [2, 4096]");
    if (cfg.points < 16 || cfg.points > 20000) throw UsageError("--points must lie in [16, 20000]");
    if (!(cfg.x_max > cfg.x_min)) throw UsageError("--x-max must exceed --x-min");
    if (!(cfg.q_max_affine > cfg.q_min)) throw UsageError("--q-max-affine must exceed --q-min");
    if (!(cfg.lambda != 0.0) || !std::isfinite(cfg.lambda)) throw UsageError("--lambda must be nonzero");
    if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) throw UsageError("--gamma must be non-negative");
    for (const auto& tol : {cfg.tol_symbol, cfg.tol_metric, cfg.tol_curvature, cfg.tol_action, cfg.tol_bracket,
                            cfg.tol_norm})
        if (tol && !(*tol > 0.0)) throw UsageError("tolerances must be positive");
    if (cfg.family != "canonical" && cfg.family != "affine")
        throw UsageError("--family must be 'canonical' or 'affine'");
    if (cfg.domain != "halfline" && cfg.domain != "fullline")
        throw UsageError("--domain must be 'halfline' or 'fullline'");
    parse_grid(cfg.grid);
}

int cmd_symbol(const RunConfig& cfg) {
    const CatalogHamiltonian& ham = hamiltonian(cfg);
    const auto [np, nq] = parse_grid(cfg.grid);
    const CoherentFamily family(fock_rep(cfg));
    const auto ps = linspace(-cfg.p_max, cfg.p_max, np);
    const auto qs = linspace(-cfg.q_max, cfg.q_max, nq);
    require_trusted(family, {cfg.p_max, cfg.q_max});
    const OperatorMatrix h = quantize(family, ham.polynomial, ham.name);
    const double tol = cfg.tol_symbol.value_or(1e-8);

    struct Row {
        double p, q, symbol, classical, correction, predicted, deviation;
    };
    const auto rows = parallel_map(ps.size() * qs.size(), [&](std::size_t k) {
        const double p = ps[k / qs.size()], q = qs[k % qs.size()];
        const double s = weak_symbol(family, h, {p, q});
        const double c = ham.classical(p, q);
        const double pred = ham.correction(p, q, cfg.hbar);
        return Row{p, q, s, c, s - c, pred, std::abs(s - c - pred)};
    });

    CsvTable table({"p", "q", "symbol", "classical", "correction", "predicted", "deviation"});
    std::vector<std::size_t> failing;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        table.add_row({r.p, r.q, r.symbol, r.classical, r.correction, r.predicted, r.deviation});
        worst = std::max(worst, r.deviation);
        if (!(r.deviation <= tol)) failing.push_back(i);
    }
    json summary{{"command", "symbol"},  {"hamiltonian", ham.name}, {"operator", ham.description},
                 {"hbar", cfg.hbar},     {"dim", cfg.dim},          {"grid", cfg.grid},
                 {"max_deviation", worst}, {"tolerance", tol}};
    const int code = finish("symbol", failing, summary);
    write_outputs(cfg, "symbol", table.str(), summary);
    return code;
}

int cmd_metric(const RunConfig& cfg) {
    const auto [np, nq] = parse_grid(cfg.grid);
    const auto ps = linspace(-cfg.p_max, cfg.p_max, np);
    CsvTable table({"p", "q", "g_pp", "g_pq", "g_qq", "ref_pp", "ref_pq", "ref_qq", "deviation", "error_estimate"});
    std::vector<std::size_t> failing;
    double worst = 0.0;
    json summary{{"command", "metric"}, {"family", cfg.family}, {"hbar", cfg.hbar}};
    std::vector<std::pair<MetricSample, MetricSample>> rows;
    double tol = 0.0;

    if (cfg.family == "canonical") {
        const CoherentFamily family(fock_rep(cfg));
        const auto qs = linspace(-cfg.q_max, cfg.q_max, nq);
        require_trusted(family, {cfg.p_max + cfg.step, cfg.q_max + cfg.step});
        tol = cfg.tol_metric.value_or(1e-5);
        rows = parallel_map(ps.size() * qs.size(), [&](std::size_t k) {
            const PhasePoint pt{ps[k / qs.size()], qs[k % qs.size()]};
            return std::pair{fs_metric(family, pt, cfg.step), fs_metric_from_variances(family, pt)};
        });
        summary["dim"] = cfg.dim;
        summary["reference"] = "variance formula";
    } else {
        const AffineFamily family(affine_rep(cfg), cfg.beta);
        const auto qs = geomspace(cfg.q_min, cfg.q_max_affine, nq);
        tol = cfg.tol_metric.value_or(1e-3);
        rows = parallel_map(ps.size() * qs.size(), [&](std::size_t k) {
            const AffinePhasePoint pt{ps[k / qs.size()], qs[k % qs.size()]};
            return std::pair{fs_metric(family, pt, cfg.step), poincare_metric(cfg.beta, cfg.hbar, pt)};
        });
        summary["beta"] = cfg.beta;
        summary["points"] = cfg.points;
        summary["reference"] = "poincare half-plane";
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [g, ref] = rows[i];
        double dev;
        if (cfg.family == "canonical")
            dev = std::max({std::abs(g.g_pp - ref.g_pp), std::abs(g.g_pq - ref.g_pq), std::abs(g.g_qq - ref.g_qq)});
        else
            dev = std::max({std::abs(g.g_pp / ref.g_pp - 1.0), std::abs(g.g_qq / ref.g_qq - 1.0),
                            std::abs(g.g_pq) / std::sqrt(ref.g_pp * ref.g_qq)});
        table.add_row({g.p, g.q, g.g_pp, g.g_pq, g.g_qq, ref.g_pp, ref.g_pq, ref.g_qq, dev, g.error_estimate});
        worst = std::max(worst, dev);
        if (!(dev <= tol)) failing.push_back(i);
    }
    summary["convention"] = rows.empty() ? "" : rows.front().first.convention;
    summary["max_deviation"] = worst;
    summary["tolerance"] = tol;
    const int code = finish("metric", failing, summary);
    write_outputs(cfg, "metric", table.str(), summary);
    return code;
}

int cmd_curvature(const RunConfig& cfg) {
    const auto [np, nq] = parse_grid(cfg.grid);
    const auto ps = linspace(-cfg.p_max, cfg.p_max, np);
    std::vector<CurvatureSample> samples;
    double expected = 0.0;
    bool relative = false;
    json summary{{"command", "curvature"}, {"family", cfg.family}, {"hbar", cfg.hbar}};
    if (cfg.family == "canonical") {
        const CoherentFamily family(fock_rep(cfg));
        const auto qs = linspace(-cfg.q_max, cfg.q_max, nq);
        const double reach = 2.0 * cfg.curvature_step + kDefaultMetricStep;
        require_trusted(family, {cfg.p_max + reach, cfg.q_max + reach});
        samples = parallel_map(ps.size() * qs.size(), [&](std::size_t k) {
            return gaussian_curvature(family, PhasePoint{ps[k / qs.size()], qs[k % qs.size()]}, cfg.curvature_step);
        });
        summary["dim"] = cfg.dim;
    } else {
        const AffineFamily family(affine_rep(cfg), cfg.beta);
        const auto qs = geomspace(cfg.q_min, cfg.q_max_affine, nq);
        samples = parallel_map(ps.size() * qs.size(), [&](std::size_t k) {
            return gaussian_curvature(family, AffinePhasePoint{ps[k / qs.size()], qs[k % qs.size()]},
                                      cfg.curvature_step);
        });
        expected = -2.0 / (cfg.beta * cfg.hbar);
        relative = true;
        summary["beta"] = cfg.beta;
    }
    const double tol = cfg.tol_curvature.value_or(relative ? 1e-2 : 1e-3);
    CsvTable table({"p", "q", "gaussian_K", "scalar_R", "expected_R", "error"});
    std::vector<std::size_t> failing;
    double worst = 0.0, lo = samples.front().scalar, hi = lo, mean = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const double err = relative ? std::abs(s.scalar / expected - 1.0) : std::abs(s.scalar - expected);
        table.add_row({s.p, s.q, s.gaussian, s.scalar, expected, err});
        worst = std::max(worst, err);
        lo = std::min(lo, s.scalar);
        hi = std::max(hi, s.scalar);
        mean += s.scalar / static_cast<double>(samples.size());
        if (!(err <= tol)) failing.push_back(i);
    }
    const double spread = relative ? (hi - lo) / std::abs(mean) : hi - lo;
    summary["expected_R"] = expected;
    summary["error_kind"] = relative ? "relative" : "absolute";
    summary["max_error"] = worst;
    summary["spread"] = spread;
    summary["tolerance"] = tol;
    summary["spread_ok"] = spread <= tol;
    int code = finish("curvature", failing, summary);
    if (!(spread <= tol)) {
        std::cerr << "curvature: spread " << spread << " exceeds " << tol << '\n';
        summary["passed"] = false;
        code = kNumericFailure;
    }
    write_outputs(cfg, "curvature", table.str(), summary);
    return code;
}

int cmd_action(const RunConfig& cfg) {
    const CatalogHamiltonian& ham = hamiltonian(cfg);
    const CoherentFamily family(fock_rep(cfg));
    const OperatorMatrix h = quantize(family, ham.polynomial, ham.name);
    const Trajectory traj = integrate(ham.classical, {cfg.p0, cfg.q0}, cfg.t_span, cfg.dt);
    for (const auto& pt : traj.points) require_trusted(family, pt);
    const ActionReport a = enhanced_action(family, h, traj);
    const double tol = cfg.tol_action.value_or(1e-5);

    json summary{{"command", "action"},
                 {"hamiltonian", ham.name},
                 {"hbar", cfg.hbar},
                 {"dim", cfg.dim},
                 {"samples", traj.size()},
                 {"quantum", a.quantum},
                 {"quantum_imag", a.quantum_imag},
                 {"classical_p_dq", a.classical},
                 {"classical_minus_q_dp", a.classical_other},
                 {"boundary_term", a.boundary_term},
                 {"difference", a.difference},
                 {"richardson_gap", a.richardson_gap},
                 {"energy_drift", traj.energy_drift},
                 {"tolerance", tol}};
    std::vector<std::size_t> failing;
    if (!(std::abs(a.difference) <= tol)) failing.push_back(0);

    // The correction is constant only for quadratic catalog entries; there the
    // classical solution is also stationary for the quantum action.
    if (ham.name != "quartic") {
        const std::vector<double> eps{1e-2, 1e-3};
        const StationarityReport s = action_stationarity(family, h, traj, eps);
        summary["stationarity"] = {{"eps", s.eps}, {"delta_action", s.delta_action}, {"exponent", s.exponent},
                                   {"limit", 1.95}};
        if (!(s.exponent >= 1.95)) failing.push_back(1);
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    const int code = finish("action", failing, summary);
    write_outputs(cfg, "action", csv.str(), summary);
    return code;
}

int cmd_transform(const RunConfig& cfg) {
    std::vector<ContactTransform> transforms;
    if (cfg.transform == "all") {
        transforms = {identity_transform(), rotation_transform(), sqrt2_transform(), scaling_transform(cfg.lambda)};
    } else if (cfg.transform == "identity") {
        transforms = {identity_transform()};
    } else if (cfg.transform == "rotation") {
        transforms = {rotation_transform()};
    } else if (cfg.transform == "sqrt2") {
        transforms = {sqrt2_transform()};
    } else if (cfg.transform == "scaling") {
        transforms = {scaling_transform(cfg.lambda)};
    } else {
        throw UsageError("unknown transform '" + cfg.transform + "'; available: all, identity, rotation, sqrt2, scaling");
    }
    const auto [np, nq] = parse_grid(cfg.grid);
    std::vector<PhasePoint> pts;
    for (double p : linspace(-cfg.p_max, cfg.p_max, np))
        for (double q : linspace(-cfg.q_max, cfg.q_max, nq)) pts.push_back({p, q});

    const CoherentFamily family(fock_rep(cfg));
    for (const auto& pt : pts) require_trusted(family, pt);
    const OperatorMatrix h = quantize(family, find_hamiltonian("oscillator").polynomial);
    const Trajectory arc =
        sample_trajectory([](double t) { return PhasePoint{std::cos(t), std::sin(t)}; }, 0.0, 2.0, 1000);
    const double tol_bracket = cfg.tol_bracket.value_or(1e-10);
    const double tol_action = cfg.tol_action.value_or(1e-5);

    CsvTable table({"transform", "p", "q", "p_star", "q_star", "bracket", "relabel_distance"});
    std::vector<std::size_t> failing;
    json results = json::array();
    std::size_t row = 0;
    for (const auto& t : transforms) {
        const BracketReport b = check_bracket(t, pts);
        const auto relabel = parallel_map(pts.size(), [&](std::size_t i) {
            return relabel_invariance(family, t, t.forward(pts[i]));
        });
        double worst_relabel = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i, ++row) {
            const PhasePoint s = t.forward(pts[i]);
            table.add_row({t.name, pts[i].p, pts[i].q, s.p, s.q, b.brackets[i], relabel[i]});
            worst_relabel = std::max(worst_relabel, relabel[i]);
            if (!(std::abs(b.brackets[i] - 1.0) <= tol_bracket) || !(relabel[i] <= 1e-10)) failing.push_back(row);
        }
        const TransformedActionReport r = transformed_action_identity(family, h, t, map_trajectory(arc, t.forward));
        const bool action_ok = std::abs(r.difference) <= tol_action;
        if (!action_ok) std::cerr << "transform " << t.name << ": action identity gap " << r.difference << '\n';
        results.push_back({{"name", t.name},
                           {"max_bracket_deviation", b.max_deviation},
                           {"roundtrip_error", roundtrip_error(t, pts)},
                           {"max_relabel_distance", worst_relabel},
                           {"action_quantum", r.quantum},
                           {"action_classical_star", r.classical_star},
                           {"generator_term", r.generator_term},
                           {"action_gap", r.difference},
                           {"action_ok", action_ok}});
    }
    json summary{{"command", "transform"},       {"hbar", cfg.hbar},
                 {"dim", cfg.dim},               {"bracket_tolerance", tol_bracket},
                 {"action_tolerance", tol_action}, {"transforms", results}};
    int code = finish("transform", failing, summary);
    for (const auto& r : results)
        if (!r["action_ok"].get<bool>()) {
            summary["passed"] = false;
            code = kNumericFailure;
        }
    write_outputs(cfg, "transform", table.str(), summary);
    return code;
}

int cmd_deficiency(const RunConfig& cfg) {
    const double r2 = std::numbers::sqrt2;
    FirstOrderOperator op;
    if (cfg.op == "P")
        op = operator_for(OperatorKind::MomentumP);
    else if (cfg.op == "D")
        op = operator_for(OperatorKind::DilationD);
    else if (cfg.op == "sqrt2P+Q")
        op = {"sqrt2*P+Q", r2, 1.0, 0.0};
    else if (cfg.op == "sqrt2Q+P")
        op = {"sqrt2*Q+P", 1.0, r2, 0.0};
    else if (cfg.op == "-Q")
        op = {"-Q", 0.0, -1.0, 0.0};
    else
        throw UsageError("unknown operator '" + cfg.op + "'; available: P, D, sqrt2P+Q, sqrt2Q+P, -Q");
    const Domain domain{cfg.domain == "halfline" ? DomainKind::HalfLine : DomainKind::FullLine, cfg.gamma};
    if (op.label == "D" && (domain.kind != DomainKind::HalfLine || domain.gamma != 0.0))
        throw UsageError("D is defined on the half-line x > 0 only (--domain halfline --gamma 0)");
    if (domain.kind == DomainKind::FullLine && cfg.gamma != 0.0) throw UsageError("--gamma applies to the half-line");
    const DeficiencyReport r = deficiency_indices(op, domain, cfg.hbar);
    write_key_values(std::cout, r);

    CsvTable table({"sign", "normalizable", "norm_squared", "refinements", "reason"});
    for (const auto& [sign, res] : {std::pair{"+i", &r.plus}, std::pair{"-i", &r.minus}})
        table.add_row({std::string(sign), res->normalizable, res->norm_squared, static_cast<long long>(res->refinements),
                       res->reason});

    json summary{{"command", "deficiency"},
                 {"operator", r.operator_label},
                 {"domain", to_string(domain.kind)},
                 {"gamma", domain.gamma},
                 {"hbar", cfg.hbar},
                 {"n_plus", r.n_plus},
                 {"n_minus", r.n_minus},
                 {"verdict", to_string(r.verdict)},
                 {"norm_plus", number(r.plus.norm_squared)},
                 {"norm_minus", number(r.minus.norm_squared)}};
    std::vector<std::size_t> failing;
    if (verdict_for(r.n_plus, r.n_minus) != r.verdict) failing.push_back(0);
    if (op.label == "P" && domain.kind == DomainKind::HalfLine) {
        const double tol = cfg.tol_norm.value_or(1e-8);
        const double expected = cfg.hbar / 2.0;
        const double norm_gap = std::abs(r.plus.norm_squared - expected) / expected;
        const EigenvectorDemo demo = imaginary_eigenvector_demo(1.0, cfg.hbar);
        const HermiticityWitness w = momentum_hermiticity_witness(cfg.hbar);
        summary["witness_norm_relative_error"] = norm_gap;
        summary["eigenvector_demo"] = {{"alpha", demo.alpha},
                                       {"norm_squared", demo.norm_squared},
                                       {"norm_error", demo.norm_error},
                                       {"residual", demo.residual},
                                       {"expectation_re", demo.expectation.real()},
                                       {"expectation_im", demo.expectation.imag()},
                                       {"non_real", demo.non_real}};
        summary["hermitian_form_defect"] = w.defect;
        summary["boundary_form_defect"] = w.boundary_defect;
        if (!(norm_gap <= tol)) failing.push_back(1);
        if (!(demo.norm_error <= tol) || !(demo.residual <= 1e-6)) failing.push_back(2);
        if (!(w.defect <= 1e-8)) failing.push_back(3);
    }
    const int code = finish("deficiency", failing, summary);
    write_outputs(cfg, "deficiency", table.str(), summary);
    return code;
}

int cmd_verify_all(const RunConfig& cfg) {
    const auto results = run_acceptance();
    CsvTable table({"criterion", "name", "measurement", "value", "limit", "comparison", "passed"});
    json criteria = json::array();
    bool all = true;
    for (const auto& c : results) {
        for (const auto& m : c.measurements)
            table.add_row({static_cast<long long>(c.id), c.name, m.name, m.value, m.limit,
                           std::string(m.at_least ? ">=" : "<="), m.passed()});
        if (!c.error.empty())
            table.add_row({static_cast<long long>(c.id), c.name, std::string("error: ") + c.error, 0.0, 0.0,
                           std::string("n/a"), false});
        all = all && c.passed();
        criteria.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed()}, {"error", c.error}});
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (c.passed() ? "PASS" : "FAIL") << '\n';
    }
    json summary{{"command", "verify-all"}, {"criteria", criteria}, {"passed", all}};
    write_outputs(cfg, "verify-all", table.str(), summary);
    return all ? kPass : kNumericFailure;
}

}  // namespace equant::cli

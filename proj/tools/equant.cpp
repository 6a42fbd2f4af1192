// Command-line front end: one subcommand per experiment plus verify-all.

#include "commands.hpp"

#include "equant/errors.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace equant::cli;
    RunConfig cfg;
    CLI::App app{"equant: coherent-state quantization numerics"};
    app.set_config("--config", "", "Flat key=value configuration file (keys are long option names)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    app.add_option("--out", cfg.out, "Output directory for <cmd>.csv and <cmd>.json")->capture_default_str();
    app.add_option("--hbar", cfg.hbar, "Reduced Planck constant")->capture_default_str();
    app.add_option("--dim", cfg.dim, "Fock basis dimension")->capture_default_str();
    app.add_option("--beta", cfg.beta, "Affine fiducial parameter")->capture_default_str();
    app.add_option("--points", cfg.points, "Half-line grid points")->capture_default_str();
    app.add_option("--x-min", cfg.x_min, "Half-line grid lower end")->capture_default_str();
    app.add_option("--x-max", cfg.x_max, "Half-line grid upper end")->capture_default_str();
    app.add_option("--ham", cfg.ham, "Catalog Hamiltonian: oscillator, q, p, free, quartic")->capture_default_str();
    app.add_option("--family", cfg.family, "Coherent-state family: canonical or affine")->capture_default_str();
    app.add_option("--grid", cfg.grid, "Phase-space sweep size NxM")->capture_default_str();
    app.add_option("--p-max", cfg.p_max, "Sweep over |p| <= p-max")->capture_default_str();
    app.add_option("--q-max", cfg.q_max, "Canonical sweep over |q| <= q-max")->capture_default_str();
    app.add_option("--q-min", cfg.q_min, "Affine sweep lower q")->capture_default_str();
    app.add_option("--q-max-affine", cfg.q_max_affine, "Affine sweep upper q")->capture_default_str();
    app.add_option("--step", cfg.step, "Metric finite-difference step")->capture_default_str();
    app.add_option("--curvature-step", cfg.curvature_step, "Curvature stencil spacing")->capture_default_str();
    app.add_option("--p0", cfg.p0, "Initial p for action runs")->capture_default_str();
    app.add_option("--q0", cfg.q0, "Initial q for action runs")->capture_default_str();
    app.add_option("--t-span", cfg.t_span, "Integration time span")->capture_default_str();
    app.add_option("--dt", cfg.dt, "Integration time step")->capture_default_str();
    app.add_option("--transform", cfg.transform, "all, identity, rotation, sqrt2 or scaling")->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "Scaling transform factor")->capture_default_str();
    app.add_option("--op", cfg.op, "Operator: P, D, sqrt2P+Q, sqrt2Q+P, -Q")->capture_default_str();
    app.add_option("--domain", cfg.domain, "halfline or fullline")->capture_default_str();
    app.add_option("--gamma", cfg.gamma, "Half-line shift: domain (-gamma, inf)")->capture_default_str();
    app.add_option("--tol-symbol", cfg.tol_symbol, "Symbol correction tolerance (default 1e-8)");
    app.add_option("--tol-metric", cfg.tol_metric, "Metric tolerance (default 1e-5 canonical, 1e-3 affine)");
    app.add_option("--tol-curvature", cfg.tol_curvature, "Curvature tolerance (default 1e-2 relative affine)");
    app.add_option("--tol-action", cfg.tol_action, "Action agreement tolerance (default 1e-5)");
    app.add_option("--tol-bracket", cfg.tol_bracket, "Poisson bracket tolerance (default 1e-10)");
    app.add_option("--tol-norm", cfg.tol_norm, "Witness norm tolerance (default 1e-8)");

    const std::map<std::string, std::pair<std::string, std::function<int(const RunConfig&)>>> commands{
        {"symbol", {"Weak-correspondence symbol over a phase-space grid", cmd_symbol}},
        {"metric", {"Coherent-state metric against its closed form", cmd_metric}},
        {"curvature", {"Gaussian and scalar curvature of the coherent-state metric", cmd_curvature}},
        {"action", {"Quantum versus classical action along a classical trajectory", cmd_action}},
        {"transform", {"Contact transforms: brackets, relabeling and the transformed action", cmd_transform}},
        {"deficiency", {"Deficiency indices and self-adjointness verdict", cmd_deficiency}},
        {"verify-all", {"Run every acceptance check", cmd_verify_all}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsageError;
    }

    try {
        validate(cfg);
        for (const auto& [name, entry] : commands)
            if (app.got_subcommand(name)) return entry.second(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const equant::RegionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const equant::WindowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const equant::ResolutionError& e) {
        std::cerr << "error: " << e.what() << " (try --points " << e.suggested_points << ")\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kUsageError;
}

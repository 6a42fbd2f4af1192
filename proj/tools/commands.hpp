#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace equant::cli {

// Exit-code contract.
inline constexpr int kPass = 0;
inline constexpr int kNumericFailure = 1;
inline constexpr int kUsageError = 2;

// Thrown for configuration problems found after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string out = "equant-out";
    double hbar = 1.0;
    long dim = 128;
    double beta = 1.0;
    long points = 2000;
    double x_min = 1e-4;
    double x_max = 40.0;

    std::string ham = "oscillator";
    std::string family = "canonical";
    std::string grid = "11x11";
    double p_max = 1.0;
    double q_max = 1.0;
    double q_min = 0.5;  // affine sweeps run over [q_min, q_max_affine]
    double q_max_affine = 2.0;

    double step = 1e-3;             // metric finite-difference step
    double curvature_step = 0.05;
    double p0 = 1.0;
    double q0 = 0.0;
    double t_span = 6.283185307179586;
    double dt = 1e-3;

    std::string transform = "all";
    double lambda = 2.0;

    std::string op = "P";
    std::string domain = "halfline";
    double gamma = 0.0;

    std::optional<double> tol_symbol;
    std::optional<double> tol_metric;
    std::optional<double> tol_curvature;
    std::optional<double> tol_action;
    std::optional<double> tol_bracket;
    std::optional<double> tol_norm;
};

// Checks ranges shared by every command; throws UsageError.
void validate(const RunConfig& cfg);

int cmd_symbol(const RunConfig& cfg);
int cmd_metric(const RunConfig& cfg);
int cmd_curvature(const RunConfig& cfg);
int cmd_action(const RunConfig& cfg);
int cmd_transform(const RunConfig& cfg);
int cmd_deficiency(const RunConfig& cfg);
int cmd_verify_all(const RunConfig& cfg);

}  // namespace equant::cli

#pragma once

// Phase-space geometry induced by a coherent-state family: the scaled
// Fubini-Study metric ds^2 = 2 hbar [ ||d psi||^2 - |<psi|d psi>|^2 ] and its
// Gaussian curvature.

#include "equant/affine.hpp"
#include "equant/canonical.hpp"

#include <functional>
#include <string>

namespace equant {

// ds^2 = g_pp dp^2 + 2 g_pq dp dq + g_qq dq^2
struct MetricSample {
    double p = 0.0;
    double q = 0.0;
    double g_pp = 0.0;
    double g_pq = 0.0;
    double g_qq = 0.0;
    double error_estimate = 0.0;  // relative, from step halving
    std::string convention;

    double determinant() const { return g_pp * g_qq - g_pq * g_pq; }
    bool positive_definite() const { return g_pp > 0.0 && g_qq > 0.0 && determinant() > 0.0; }
};

struct CurvatureSample {
    double p = 0.0;
    double q = 0.0;
    double gaussian = 0.0;  // K
    double scalar = 0.0;    // R = 2K
};

using StateMap = std::function<StateVector(double p, double q)>;
using MetricField = std::function<MetricSample(double p, double q)>;

inline constexpr double kDefaultMetricStep = 1e-3;
inline constexpr double kDefaultCurvatureStep = 0.05;

// Central differences of the state map at steps h and h/2, combined by
// Richardson extrapolation. Throws StepSizeError when the two estimates
// disagree by more than rel_tol.
MetricSample fs_metric(const StateMap& state, double scale, double p, double q, double step = kDefaultMetricStep,
                       double rel_tol = 1e-5);

// Throws RegionError outside the trusted region.
MetricSample fs_metric(const CoherentFamily& family, PhasePoint pt, double step = kDefaultMetricStep);
MetricSample fs_metric(const AffineFamily& family, AffinePhasePoint pt, double step = kDefaultMetricStep);

// (2/hbar) { <dQ^2> dp^2 - <dQ dP + dP dQ> dp dq + <dP^2> dq^2 } with moments in
// the fiducial. The cross term sign follows from the displacement order
// exp(-iqP/hbar) exp(ipQ/hbar).
MetricSample fs_metric_from_variances(const CoherentFamily& family, PhasePoint pt);

// Linear change dp' = a dp, dq' = b dq + c dp that turns the metric into
// dp'^2 + dq'^2.
struct CartesianShift {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
};

CartesianShift cartesian_shift(const MetricSample& g);
// Metric components in the primed coordinates.
MetricSample transform_metric(const MetricSample& g, const CartesianShift& shift);

// Brioschi formula on a 5x5 stencil of metric samples (4th-order differences).
CurvatureSample gaussian_curvature(const MetricField& metric, double p, double q, double step = kDefaultCurvatureStep);
CurvatureSample gaussian_curvature(const CoherentFamily& family, PhasePoint pt, double step = kDefaultCurvatureStep);
CurvatureSample gaussian_curvature(const AffineFamily& family, AffinePhasePoint pt,
                                   double step = kDefaultCurvatureStep);

// Closed-form metric of the affine family: q^2/(beta hbar) dp^2 + beta hbar/q^2 dq^2.
MetricSample poincare_metric(double beta, double hbar, AffinePhasePoint pt);

}  // namespace equant

#include "equant/selfadjoint.hpp"

#include "equant/errors.hpp"
#include "equant/report.hpp"
#include "equant/stencil.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace equant {

namespace {

constexpr double kOverflowLog = 700.0;
constexpr int kMaxRefinements = 1000;
// Pieces may grow while the interval is wider than the density's own scale;
// only a long run of non-shrinking increments signals divergence.
constexpr int kGrowthPatience = 64;

double integrate_piece(const std::function<double(double)>& log_density, double a, double b) {
    auto f = [&](double y) { return std::exp(log_density(y)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-10);
}

struct TailResult {
    bool converged = false;
    double total = 0.0;
    int steps = 0;
    std::string reason;
};

// Sums int over [lo_k, hi_k] for k = 1, 2, ... where `interval(k)` walks
// toward a singular end (0 or infinity). `reference` is mass already found
// elsewhere; convergence is judged against the running total plus it.
TailResult sum_tail(const std::function<double(double)>& log_density,
                    const std::function<std::pair<double, double>(int)>& interval, double rel_tol,
                    double reference = 0.0) {
    TailResult r;
    double prev = std::numeric_limits<double>::infinity();
    int growing = 0;
    for (int k = 1; k <= kMaxRefinements; ++k) {
        const auto [a, b] = interval(k);
        r.steps = k;
        const double la = log_density(a);
        const double lb = log_density(b);
        if (!(la < kOverflowLog) || !(lb < kOverflowLog)) {
            r.reason = "density overflows";
            return r;
        }
        const double inc = integrate_piece(log_density, a, b);
        if (!std::isfinite(inc)) {
            r.reason = "non-finite partial norm";
            return r;
        }
        growing = (k > 1 && inc > prev * (1.0 - 1e-9)) ? growing + 1 : 0;
        if (growing >= kGrowthPatience) {
            r.total += inc;
            r.reason = "increments stopped shrinking";
            return r;
        }
        r.total += inc;
        const double known = r.total + reference;
        if (known > 0.0 && inc <= rel_tol * known && inc < prev) {
            // Geometric estimate of what lies beyond the last refinement.
            const double ratio = inc / prev;
            if (ratio < 1.0 && std::isfinite(ratio)) r.total += inc * ratio / (1.0 - ratio);
            r.converged = true;
            r.reason = "converged";
            return r;
        }
        prev = inc;
    }
    r.reason = "no convergence within the refinement budget";
    return r;
}

double pow2(int k) { return std::ldexp(1.0, k); }

}  // namespace

std::string to_string(OperatorKind k) { return k == OperatorKind::MomentumP ? "P" : "D"; }

std::string to_string(DomainKind d) { return d == DomainKind::FullLine ? "fullline" : "halfline"; }

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::SelfAdjoint: return "SelfAdjoint";
        case Verdict::HasSelfAdjointExtensions: return "HasSelfAdjointExtensions";
        case Verdict::NotExtendable: return "NotExtendable";
    }
    return "unknown";
}

Verdict verdict_for(int n_plus, int n_minus) {
    if (n_plus < 0 || n_minus < 0) throw std::invalid_argument("deficiency indices must be non-negative");
    if (n_plus != n_minus) return Verdict::NotExtendable;
    return n_plus == 0 ? Verdict::SelfAdjoint : Verdict::HasSelfAdjointExtensions;
}

FirstOrderOperator operator_for(OperatorKind k) {
    if (k == OperatorKind::MomentumP) return {"P", 1.0, 0.0, 0.0};
    return {"D", 0.0, 0.0, 1.0};
}

IntegrabilityResult test_integrability(const std::function<double(double)>& log_density, const Domain& domain,
                                       double rel_tol) {
    IntegrabilityResult out;
    std::vector<TailResult> parts;
    if (domain.kind == DomainKind::HalfLine) {
        parts.push_back(sum_tail(log_density, [](int k) { return std::pair{pow2(-k), pow2(-k + 1)}; }, rel_tol));
        parts.push_back(sum_tail(log_density, [](int k) { return std::pair{pow2(k - 1), pow2(k)}; }, rel_tol,
                                 parts.front().total));
    } else {
        auto right = [](int k) { return k == 1 ? std::pair{0.0, 1.0} : std::pair{pow2(k - 2), pow2(k - 1)}; };
        const std::function<double(double)> mirrored = [&log_density](double y) { return log_density(-y); };
        parts.push_back(sum_tail(log_density, right, rel_tol));
        parts.push_back(sum_tail(mirrored, right, rel_tol, parts.front().total));
    }
    out.normalizable = true;
    out.reason = "converged";
    for (const auto& p : parts) {
        out.refinements += p.steps;
        out.norm_squared += p.total;
        if (!p.converged) {
            out.normalizable = false;
            out.reason = p.reason;
        }
    }
    if (!out.normalizable) out.norm_squared = std::numeric_limits<double>::infinity();
    return out;
}

DeficiencyReport deficiency_indices(const FirstOrderOperator& op, const Domain& domain, double hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("deficiency_indices: hbar must be positive");
    if (domain.kind == DomainKind::HalfLine && !(domain.gamma >= 0.0))
        throw std::invalid_argument("deficiency_indices: gamma must be non-negative");
    const double shift = domain.kind == DomainKind::HalfLine ? domain.gamma : 0.0;
    if (op.c_d != 0.0) {
        const double root = -op.c_p / op.c_d;
        const bool inside = domain.kind == DomainKind::FullLine || root > -shift;
        if (inside) throw std::invalid_argument("deficiency_indices: leading coefficient vanishes inside the domain");
    }

    DeficiencyReport r;
    r.operator_label = op.label;
    r.domain = domain;
    r.hbar = hbar;

    if (op.c_p == 0.0 && op.c_d == 0.0) {
        // Real multiplication operator: (c_q x -+ i) psi = 0 forces psi = 0.
        r.plus.reason = r.minus.reason = "multiplication operator has no eigenvalue +-i";
        r.verdict = Verdict::SelfAdjoint;
        return r;
    }

    // Coordinate y: distance from the left end of the half-line, x on the line.
    auto a_of = [&](double x) { return op.c_p + op.c_d * x; };
    const double y0 = (domain.kind == DomainKind::HalfLine && a_of(-shift) == 0.0) ? 1.0 : 0.0;
    const double x0 = y0 - shift;
    auto log_ratio_a = [&](double y) {
        // int_{y0}^{y} dx / a(x)
        const double x = y - shift;
        if (op.c_d == 0.0) return (y - y0) / op.c_p;
        return std::log(std::abs(a_of(x) / a_of(x0))) / op.c_d;
    };
    auto phase = [&](double y) {
        const double x = y - shift;
        double v;
        if (op.c_d == 0.0)
            v = (x - x0) * (x + x0) / (2.0 * op.c_p);
        else
            v = (x - x0) / op.c_d - op.c_p / (op.c_d * op.c_d) * std::log(std::abs(a_of(x) / a_of(x0)));
        return -op.c_q * v / hbar;
    };

    const Representation report_rep = Representation::half_line(HalfLineGrid{}, hbar);
    for (int sign : {+1, -1}) {
        const double rate = op.c_d + sign * 2.0 / hbar;
        const std::function<double(double)> log_density = [&, rate](double y) { return -rate * log_ratio_a(y); };
        IntegrabilityResult res = test_integrability(log_density, domain);
        if (res.normalizable) {
            (sign > 0 ? r.n_plus : r.n_minus) += 1;
            if (domain.kind == DomainKind::HalfLine) {
                const RealVector& y = report_rep.nodes();
                Vector c(y.size());
                const double scale = 1.0 / std::sqrt(res.norm_squared);
                for (Index i = 0; i < y.size(); ++i)
                    c(i) = scale * std::polar(std::exp(0.5 * log_density(y(i))), phase(y(i)));
                r.witness_functions.emplace_back(report_rep, std::move(c));
            }
        }
        (sign > 0 ? r.plus : r.minus) = std::move(res);
    }
    r.verdict = verdict_for(r.n_plus, r.n_minus);
    return r;
}

DeficiencyReport deficiency_indices(OperatorKind kind, const Domain& domain, double hbar) {
    if (kind == OperatorKind::DilationD && (domain.kind != DomainKind::HalfLine || domain.gamma != 0.0))
        throw std::invalid_argument("deficiency_indices: D is defined on the half-line x > 0 only");
    return deficiency_indices(operator_for(kind), domain, hbar);
}

HalfLineGrid demo_grid(double alpha, double hbar) {
    const double scale = hbar / alpha;
    return {4000, 1e-12 * scale, 30.0 * scale, Spacing::Logarithmic};
}

EigenvectorDemo imaginary_eigenvector_demo(double alpha, double hbar, const HalfLineGrid& grid) {
    if (!(alpha > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("imaginary_eigenvector_demo: alpha, hbar > 0");
    const double lower = -std::expm1(-2.0 * alpha * grid.x_min / hbar);
    const double upper = std::exp(-2.0 * alpha * grid.x_max / hbar);
    if (lower + upper > 1e-10) {
        std::ostringstream msg;
        msg << "grid window misses " << (lower + upper) << " of the norm (limit 1e-10)";
        throw WindowError(msg.str());
    }
    const Representation rep = Representation::half_line(grid, hbar);
    const RealVector& x = rep.nodes();
    const RealVector& w = rep.weights();
    const Vector psi = (-alpha / hbar * x.array()).exp().cast<Complex>().matrix();
    const Vector dpsi = apply_uniform_derivative(psi, rep.native_step(), 4);
    const Vector p_psi = Complex(0.0, -hbar) * dpsi.cwiseQuotient(rep.jacobian().cast<Complex>());

    EigenvectorDemo d;
    d.alpha = alpha;
    d.hbar = hbar;
    d.norm_squared = (w.array() * psi.array().abs2()).sum();
    const double exact = hbar / (2.0 * alpha);
    d.norm_error = std::abs(d.norm_squared - exact) / exact;
    const Vector res = p_psi - Complex(0.0, alpha) * psi;
    d.residual = std::sqrt((w.array() * res.array().abs2()).sum() / d.norm_squared);
    d.expectation = (w.cast<Complex>().array() * psi.array().conjugate() * p_psi.array()).sum() / d.norm_squared;
    d.boundary_term = hbar / (2.0 * d.norm_squared);
    d.non_real = std::abs(d.expectation.imag()) > 1e-8 * std::max(1.0, std::abs(d.expectation));
    return d;
}

EigenvectorDemo imaginary_eigenvector_demo(double alpha, double hbar) {
    return imaginary_eigenvector_demo(alpha, hbar, demo_grid(alpha, hbar));
}

HermiticityWitness momentum_hermiticity_witness(double hbar) {
    if (!(hbar > 0.0)) throw std::invalid_argument("momentum_hermiticity_witness: hbar > 0");
    using Fn = std::function<Complex(double)>;
    auto form_gap = [hbar](const Fn& phi, const Fn& dphi, const Fn& psi, const Fn& dpsi) {
        // <phi|P psi> - <P phi|psi> with P = -i hbar d/dx
        auto integrand = [&](double x) {
            return std::conj(phi(x)) * Complex(0.0, -hbar) * dpsi(x) -
                   std::conj(Complex(0.0, -hbar) * dphi(x)) * psi(x);
        };
        using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
        const double end = 80.0 * hbar;
        const double re = GK::integrate([&](double x) { return integrand(x).real(); }, 0.0, end, 8, 1e-12);
        const double im = GK::integrate([&](double x) { return integrand(x).imag(); }, 0.0, end, 8, 1e-12);
        return std::abs(Complex(re, im));
    };
    const Fn phi = [hbar](double x) { const double u = x / hbar; return Complex(u * u * std::exp(-u)); };
    const Fn dphi = [hbar](double x) { const double u = x / hbar; return Complex((2.0 * u - u * u) * std::exp(-u) / hbar); };
    const Fn psi = [hbar](double x) { const double u = x / hbar; return Complex(u, u * u) * std::exp(-0.5 * u); };
    const Fn dpsi = [hbar](double x) {
        const double u = x / hbar;
        return (Complex(1.0, 2.0 * u) - 0.5 * Complex(u, u * u)) * std::exp(-0.5 * u) / hbar;
    };
    const Fn edge = [hbar](double x) { return Complex(std::exp(-x / hbar)); };
    const Fn dedge = [hbar](double x) { return Complex(-std::exp(-x / hbar) / hbar); };
    return {form_gap(phi, dphi, psi, dpsi), form_gap(edge, dedge, edge, dedge)};
}

std::vector<TransformDiagnosis> quantum_transform_diagnosis(double hbar) {
    const double r = std::numbers::sqrt2;
    const Domain half{DomainKind::HalfLine, 0.0};
    std::vector<TransformDiagnosis> out;
    for (auto [name, op] : std::vector<std::pair<std::string, FirstOrderOperator>>{
             {"P*=sqrt2*P+Q", {"sqrt2*P+Q", r, 1.0, 0.0}},
             {"Q*=sqrt2*Q+P", {"sqrt2*Q+P", 1.0, r, 0.0}},
             {"P*=-Q", {"-Q", 0.0, -1.0, 0.0}},
             {"Q*=P", {"P", 1.0, 0.0, 0.0}}}) {
        out.push_back({name, op, deficiency_indices(op, half, hbar)});
    }
    return out;
}

void write_key_values(std::ostream& out, const DeficiencyReport& r) {
    out << "operator=" << r.operator_label << '\n'
        << "domain=" << to_string(r.domain.kind) << '\n'
        << "gamma=" << format_number(r.domain.gamma) << '\n'
        << "hbar=" << format_number(r.hbar) << '\n'
        << "n_plus=" << r.n_plus << '\n'
        << "n_minus=" << r.n_minus << '\n'
        << "verdict=" << to_string(r.verdict) << '\n'
        << "norm_plus=" << format_number(r.plus.norm_squared) << '\n'
        << "norm_minus=" << format_number(r.minus.norm_squared) << '\n';
}

}  // namespace equant

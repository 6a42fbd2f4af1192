#pragma once

// Hermitian versus self-adjoint: deficiency indices of first-order operators
// on the line and half-line, the square-integrable imaginary-eigenvalue
// solution of P on the half-line, and the diagnosis of transformed operators.

#include "equant/hilbert.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace equant {

enum class OperatorKind { MomentumP, DilationD };
enum class DomainKind { FullLine, HalfLine };
enum class Verdict { SelfAdjoint, HasSelfAdjointExtensions, NotExtendable };

std::string to_string(OperatorKind k);
std::string to_string(DomainKind d);
std::string to_string(Verdict v);
Verdict verdict_for(int n_plus, int n_minus);

// A = c_p P + c_q Q + c_d D with P = -i hbar d/dx, Q = x, D = (PQ + QP)/2.
struct FirstOrderOperator {
    std::string label;
    double c_p = 0.0;
    double c_q = 0.0;
    double c_d = 0.0;
};

FirstOrderOperator operator_for(OperatorKind k);

// FullLine is the real axis; HalfLine is (-gamma, inf).
struct Domain {
    DomainKind kind = DomainKind::HalfLine;
    double gamma = 0.0;
};

struct IntegrabilityResult {
    bool normalizable = false;
    double norm_squared = 0.0;  // +inf when divergent
    int refinements = 0;        // doublings/halvings used
    std::string reason;
};

// Convergence of int |psi|^2 under domain doubling (toward infinity) and
// halving (toward a finite endpoint). Converged when the relative change
// drops below rel_tol with shrinking increments; divergent when increments
// fail to shrink for 64 consecutive refinements or the density overflows.
// The density is given by its logarithm in the coordinate y measured from
// the left end of a half-line, or from 0 on the full line.
IntegrabilityResult test_integrability(const std::function<double(double)>& log_density, const Domain& domain,
                                       double rel_tol = 1e-8);

struct DeficiencyReport {
    std::string operator_label;
    Domain domain;
    double hbar = 1.0;
    int n_plus = 0;
    int n_minus = 0;
    Verdict verdict = Verdict::SelfAdjoint;
    IntegrabilityResult plus;   // A^dagger psi = +i psi
    IntegrabilityResult minus;  // A^dagger psi = -i psi
    // Normalizable solutions sampled on the reporting grid (y coordinate).
    std::vector<StateVector> witness_functions;
};

// Closed-form solutions of A^dagger psi = +-i psi,
//   d/dx ln|psi|^2 = -(c_d +- 2/hbar) / (c_p + c_d x),
// followed by the numerical integrability test. Throws std::invalid_argument
// when c_p + c_d x vanishes inside the open domain.
DeficiencyReport deficiency_indices(const FirstOrderOperator& op, const Domain& domain, double hbar);
DeficiencyReport deficiency_indices(OperatorKind kind, const Domain& domain, double hbar);

struct EigenvectorDemo {
    double alpha = 1.0;
    double hbar = 1.0;
    double norm_squared = 0.0;    // quadrature, compared with hbar/(2 alpha)
    double norm_error = 0.0;      // relative
    double residual = 0.0;        // ||P psi - i alpha psi|| / ||psi||
    Complex expectation;          // <psi|P|psi>/<psi|psi>
    double boundary_term = 0.0;   // hbar |psi(0)|^2 / (2 <psi|psi>)
    bool non_real = false;
};

// Log grid on [1e-12 hbar/alpha, 30 hbar/alpha] with 4000 points.
HalfLineGrid demo_grid(double alpha, double hbar);

// psi = exp(-alpha x/hbar). Throws WindowError when the grid misses more
// than 1e-10 of the norm.
EigenvectorDemo imaginary_eigenvector_demo(double alpha, double hbar, const HalfLineGrid& grid);
EigenvectorDemo imaginary_eigenvector_demo(double alpha, double hbar);

struct HermiticityWitness {
    double defect = 0.0;           // |<phi|P psi> - <P phi|psi>| for phi, psi vanishing at 0
    double boundary_defect = 0.0;  // the same with phi = psi = exp(-x/hbar), equals hbar
};

HermiticityWitness momentum_hermiticity_witness(double hbar);

struct TransformDiagnosis {
    std::string name;
    FirstOrderOperator op;
    DeficiencyReport report;
};

// P* = sqrt2 P + Q, Q* = sqrt2 Q + P, P* = -Q and Q* = P on the half-line.
std::vector<TransformDiagnosis> quantum_transform_diagnosis(double hbar);

// key=value lines: operator, domain, gamma, hbar, n_plus, n_minus, verdict, norms.
void write_key_values(std::ostream& out, const DeficiencyReport& r);

}  // namespace equant

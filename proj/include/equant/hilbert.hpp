#pragma once

// Finite-dimensional Hilbert-space representations: truncated oscillator
// (Fock) basis for the full line and quadrature grids for the half-line.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace equant {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Non-fatal diagnostics collected by the caller.
using Warnings = std::vector<std::string>;

struct FockLine {
    Index dim = 64;
};

enum class Spacing { Uniform, Logarithmic };

struct HalfLineGrid {
    Index points = 2000;
    double x_min = 1e-4;
    double x_max = 40.0;
    Spacing spacing = Spacing::Logarithmic;
};

// Immutable description of the working Hilbert space. For grids the node
// positions and trapezoidal weights in the native uniform coordinate
// (x for Uniform, ln x for Logarithmic) are computed once and shared.
class Representation {
public:
    static Representation fock(Index dim, double hbar = 1.0);
    static Representation half_line(const HalfLineGrid& grid, double hbar = 1.0);

    bool is_fock() const { return std::holds_alternative<FockLine>(kind_); }
    bool is_grid() const { return !is_fock(); }
    const FockLine& fock_line() const;
    const HalfLineGrid& grid() const;

    double hbar() const { return hbar_; }
    Index size() const;

    // Grid positions x_i (grid representations only).
    const RealVector& nodes() const;
    // Quadrature weights; all ones for the Fock basis.
    const RealVector& weights() const { return data_->weights; }
    // dx/ds at each node for the native coordinate s.
    const RealVector& jacobian() const;
    // Uniform spacing of the native coordinate.
    double native_step() const;

    // Same space with a different hbar.
    Representation with_hbar(double hbar) const;

    friend bool operator==(const Representation& a, const Representation& b);

private:
    struct Data {
        RealVector nodes;
        RealVector weights;
        RealVector jacobian;
        double native_step = 1.0;
    };

    Representation(std::variant<FockLine, HalfLineGrid> kind, double hbar);

    std::variant<FockLine, HalfLineGrid> kind_;
    double hbar_;
    std::shared_ptr<const Data> data_;
};

struct StateVector {
    Representation rep;
    Vector coeffs;

    StateVector(Representation r, Vector c);
};

struct OperatorMatrix {
    Representation rep;
    Matrix entries;
    std::string label;

    OperatorMatrix(Representation r, Matrix m, std::string l = {});
};

// Eigenpairs of a (weighted-)hermitian operator. Columns of `vectors` are
// orthonormal under the representation's inner product.
struct SpectralData {
    Representation rep;
    RealVector eigenvalues;  // ascending
    Matrix vectors;

    StateVector eigenvector(Index k) const { return {rep, vectors.col(k)}; }
    Index size() const { return eigenvalues.size(); }
};

// ---- states -------------------------------------------------------------

Complex inner(const StateVector& a, const StateVector& b);
double norm(const StateVector& s);
StateVector normalized(const StateVector& s);
StateVector basis_vector(const Representation& rep, Index k);
StateVector apply(const OperatorMatrix& a, const StateVector& v);
Complex expectation(const OperatorMatrix& a, const StateVector& v);
// Weighted L2 distance.
double distance(const StateVector& a, const StateVector& b);

// ---- operators ----------------------------------------------------------

std::pair<OperatorMatrix, OperatorMatrix> build_fock_ops(const Representation& rep);

OperatorMatrix identity(const Representation& rep);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(Complex s, const OperatorMatrix& a);
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
// Adjoint under the representation's inner product: W^-1 A^H W.
OperatorMatrix adjoint(const OperatorMatrix& a);

// max |WA - (WA)^H| / max |WA|, optionally ignoring `boundary_rows` rows and
// columns at each end of a grid.
double hermiticity_defect(const OperatorMatrix& a, Index boundary_rows = 0);
bool is_hermitian(const OperatorMatrix& a, double tol = 1e-12, Index boundary_rows = 0);

// exp(s A) v. Hermitian generators go through the eigendecomposition;
// anything else through scaling-and-squaring.
StateVector expm_apply(const OperatorMatrix& a, Complex s, const StateVector& v);
// exp(s A) v for a precomputed decomposition of A.
StateVector expm_apply(const SpectralData& spectrum, Complex s, const StateVector& v);

SpectralData spectral_decompose(const OperatorMatrix& a, double tol = 1e-12);
// Sum_k c_k |c_k><c_k| as an operator on coefficient vectors.
Matrix reconstruct(const SpectralData& s);

// Dense-matrix helpers shared by the modules.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

}  // namespace equant

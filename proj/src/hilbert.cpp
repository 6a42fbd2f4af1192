#include "equant/hilbert.hpp"

#include "equant/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace equant {

namespace {

void require_same(const Representation& a, const Representation& b, const char* what) {
    if (!(a == b)) throw RepresentationMismatch(std::string(what) + ": representations differ");
}

}  // namespace

Representation::Representation(std::variant<FockLine, HalfLineGrid> kind, double hbar)
    : kind_(std::move(kind)), hbar_(hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidRepresentation("hbar must be positive and finite");
    auto data = std::make_shared<Data>();
    if (const auto* f = std::get_if<FockLine>(&kind_)) {
        if (f->dim < 2) throw InvalidRepresentation("FockLine dimension must be at least 2");
        data->weights = RealVector::Ones(f->dim);
    } else {
        const auto& g = std::get<HalfLineGrid>(kind_);
        if (g.points < 16) throw InvalidRepresentation("HalfLineGrid needs at least 16 points");
        if (!(g.x_min > 0.0)) throw InvalidRepresentation("HalfLineGrid x_min must be positive");
        if (!(g.x_max > g.x_min)) throw InvalidRepresentation("HalfLineGrid x_max must exceed x_min");
        const Index n = g.points;
        data->nodes.resize(n);
        data->jacobian.resize(n);
        if (g.spacing == Spacing::Uniform) {
            data->native_step = (g.x_max - g.x_min) / static_cast<double>(n - 1);
            for (Index i = 0; i < n; ++i) data->nodes(i) = g.x_min + static_cast<double>(i) * data->native_step;
            data->nodes(n - 1) = g.x_max;
            data->jacobian.setOnes();
        } else {
            data->native_step = std::log(g.x_max / g.x_min) / static_cast<double>(n - 1);
            for (Index i = 0; i < n; ++i)
                data->nodes(i) = g.x_min * std::exp(static_cast<double>(i) * data->native_step);
            data->nodes(n - 1) = g.x_max;
            data->jacobian = data->nodes;
        }
        data->weights = data->jacobian * data->native_step;
        data->weights(0) *= 0.5;
        data->weights(n - 1) *= 0.5;
    }
    data_ = std::move(data);
}

Representation Representation::fock(Index dim, double hbar) { return {FockLine{dim}, hbar}; }

Representation Representation::half_line(const HalfLineGrid& grid, double hbar) { return {grid, hbar}; }

const FockLine& Representation::fock_line() const {
    if (!is_fock()) throw InvalidRepresentation("not a FockLine representation");
    return std::get<FockLine>(kind_);
}

const HalfLineGrid& Representation::grid() const {
    if (!is_grid()) throw InvalidRepresentation("not a HalfLineGrid representation");
    return std::get<HalfLineGrid>(kind_);
}

Index Representation::size() const { return is_fock() ? fock_line().dim : grid().points; }

const RealVector& Representation::nodes() const {
    if (!is_grid()) throw InvalidRepresentation("FockLine has no grid nodes");
    return data_->nodes;
}

const RealVector& Representation::jacobian() const {
    if (!is_grid()) throw InvalidRepresentation("FockLine has no grid jacobian");
    return data_->jacobian;
}

double Representation::native_step() const { return data_->native_step; }

Representation Representation::with_hbar(double hbar) const {
    Representation r = *this;
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidRepresentation("hbar must be positive and finite");
    r.hbar_ = hbar;
    return r;
}

bool operator==(const Representation& a, const Representation& b) {
    if (a.hbar_ != b.hbar_ || a.kind_.index() != b.kind_.index()) return false;
    if (a.is_fock()) return a.fock_line().dim == b.fock_line().dim;
    const auto& ga = a.grid();
    const auto& gb = b.grid();
    return ga.points == gb.points && ga.x_min == gb.x_min && ga.x_max == gb.x_max && ga.spacing == gb.spacing;
}

StateVector::StateVector(Representation r, Vector c) : rep(std::move(r)), coeffs(std::move(c)) {
    if (coeffs.size() != rep.size()) throw InvalidRepresentation("state dimension does not match representation");
}

OperatorMatrix::OperatorMatrix(Representation r, Matrix m, std::string l)
    : rep(std::move(r)), entries(std::move(m)), label(std::move(l)) {
    if (entries.rows() != rep.size() || entries.cols() != rep.size())
        throw InvalidRepresentation("operator dimension does not match representation");
}

Complex inner(const StateVector& a, const StateVector& b) {
    require_same(a.rep, b.rep, "inner");
    return (a.coeffs.conjugate().array() * b.coeffs.array() * a.rep.weights().array().cast<Complex>()).sum();
}

double norm(const StateVector& s) { return std::sqrt(std::max(0.0, inner(s, s).real())); }

StateVector normalized(const StateVector& s) {
    const double n = norm(s);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("cannot normalize a zero or non-finite state");
    return {s.rep, s.coeffs / n};
}

StateVector basis_vector(const Representation& rep, Index k) {
    Vector v = Vector::Zero(rep.size());
    v(k) = 1.0;
    return {rep, v};
}

StateVector apply(const OperatorMatrix& a, const StateVector& v) {
    require_same(a.rep, v.rep, "apply");
    return {v.rep, a.entries * v.coeffs};
}

Complex expectation(const OperatorMatrix& a, const StateVector& v) { return inner(v, apply(a, v)); }

double distance(const StateVector& a, const StateVector& b) {
    require_same(a.rep, b.rep, "distance");
    return norm(StateVector{a.rep, a.coeffs - b.coeffs});
}

std::pair<OperatorMatrix, OperatorMatrix> build_fock_ops(const Representation& rep) {
    const Index n = rep.fock_line().dim;
    Matrix lower = Matrix::Zero(n, n);  // annihilation a: a|k> = sqrt(k)|k-1>
    for (Index k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Matrix raise = lower.adjoint();
    const double s = std::sqrt(rep.hbar() / 2.0);
    Matrix q = s * (lower + raise);
    Matrix p = Complex(0.0, s) * (raise - lower);
    return {OperatorMatrix(rep, std::move(q), "Q"), OperatorMatrix(rep, std::move(p), "P")};
}

OperatorMatrix identity(const Representation& rep) {
    return {rep, Matrix::Identity(rep.size(), rep.size()), "1"};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a.rep, b.rep, "operator product");
    return {a.rep, a.entries * b.entries, a.label + b.label};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a.rep, b.rep, "operator sum");
    return {a.rep, a.entries + b.entries, "(" + a.label + "+" + b.label + ")"};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a.rep, b.rep, "operator difference");
    return {a.rep, a.entries - b.entries, "(" + a.label + "-" + b.label + ")"};
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {a.rep, s * a.entries, a.label}; }

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same(a.rep, b.rep, "commutator");
    return {a.rep, a.entries * b.entries - b.entries * a.entries, "[" + a.label + "," + b.label + "]"};
}

OperatorMatrix adjoint(const OperatorMatrix& a) {
    const RealVector& w = a.rep.weights();
    Matrix adj = w.cwiseInverse().asDiagonal() * a.entries.adjoint() * w.asDiagonal();
    return {a.rep, std::move(adj), a.label + "^dagger"};
}

double hermiticity_defect(const OperatorMatrix& a, Index boundary_rows) {
    const Matrix wa = a.rep.weights().asDiagonal() * a.entries;
    const Index n = wa.rows();
    const Index b = a.rep.is_grid() ? boundary_rows : 0;
    if (n - 2 * b <= 0) return 0.0;
    const auto block = wa.block(b, b, n - 2 * b, n - 2 * b);
    const double scale = max_abs(block);
    if (scale == 0.0) return 0.0;
    return max_abs(block - block.adjoint()) / scale;
}

bool is_hermitian(const OperatorMatrix& a, double tol, Index boundary_rows) {
    return hermiticity_defect(a, boundary_rows) <= tol;
}

SpectralData spectral_decompose(const OperatorMatrix& a, double tol) {
    if (!all_finite(a.entries)) throw NumericError("spectral_decompose: non-finite entries");
    if (!is_hermitian(a, tol)) throw HermiticityError("spectral_decompose: operator '" + a.label + "' is not hermitian");
    const RealVector sw = a.rep.weights().cwiseSqrt();
    Matrix sym = sw.asDiagonal() * a.entries * sw.cwiseInverse().asDiagonal();
    sym = 0.5 * (sym + sym.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericError("spectral_decompose: eigensolver failed");
    Matrix vectors = sw.cwiseInverse().asDiagonal() * solver.eigenvectors();
    return {a.rep, solver.eigenvalues(), std::move(vectors)};
}

Matrix reconstruct(const SpectralData& s) {
    return s.vectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.vectors.adjoint() *
           s.rep.weights().asDiagonal();
}

StateVector expm_apply(const SpectralData& spectrum, Complex s, const StateVector& v) {
    require_same(spectrum.rep, v.rep, "expm_apply");
    const Vector weighted = v.rep.weights().cast<Complex>().cwiseProduct(v.coeffs);
    Vector amplitudes = spectrum.vectors.adjoint() * weighted;
    for (Index k = 0; k < amplitudes.size(); ++k) amplitudes(k) *= std::exp(s * spectrum.eigenvalues(k));
    Vector out = spectrum.vectors * amplitudes;
    if (!all_finite(out)) throw NumericError("expm_apply: non-finite result");
    return {v.rep, std::move(out)};
}

StateVector expm_apply(const OperatorMatrix& a, Complex s, const StateVector& v) {
    require_same(a.rep, v.rep, "expm_apply");
    if (!all_finite(a.entries) || !all_finite(v.coeffs) || !std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw NumericError("expm_apply: non-finite input");
    if (s == Complex(0.0)) return v;
    if (is_hermitian(a)) return expm_apply(spectral_decompose(a), s, v);
    const Matrix generator = s * a.entries;
    Matrix exp_a = generator.exp();
    Vector out = exp_a * v.coeffs;
    if (!all_finite(out)) throw NumericError("expm_apply: non-finite result");
    return {v.rep, std::move(out)};
}

}  // namespace equant

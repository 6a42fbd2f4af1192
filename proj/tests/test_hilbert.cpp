#include "equant/catalog.hpp"
#include "equant/canonical.hpp"
#include "equant/errors.hpp"
#include "equant/hilbert.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace equant;

namespace {

Matrix random_matrix(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

Vector random_vector(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
    return v;
}

}  // namespace

TEST_CASE("fock operators at dimension two") {
    const auto [q, p] = build_fock_ops(Representation::fock(2, 1.0));
    const double s = std::sqrt(0.5);
    CHECK(std::abs(q.entries(0, 1) - s) < 1e-15);
    CHECK(std::abs(q.entries(1, 0) - s) < 1e-15);
    CHECK(std::abs(q.entries(0, 0)) == 0.0);
    CHECK(std::abs(q.entries(1, 1)) == 0.0);
    CHECK(std::abs(p.entries(0, 1) - Complex(0.0, -s)) < 1e-15);
    CHECK(std::abs(p.entries(1, 0) - Complex(0.0, s)) < 1e-15);
}

TEST_CASE("fock operators are hermitian") {
    for (Index n : {2, 17, 64}) {
        const auto [q, p] = build_fock_ops(Representation::fock(n, 0.7));
        CHECK(is_hermitian(q));
        CHECK(is_hermitian(p));
    }
}

TEST_CASE("truncated commutator carries the corner defect") {
    for (double hbar : {0.5, 1.0}) {
        const Index n = 64;
        const auto [q, p] = build_fock_ops(Representation::fock(n, hbar));
        Matrix expected = Matrix::Identity(n, n) * Complex(0.0, hbar);
        expected(n - 1, n - 1) = Complex(0.0, hbar * (1.0 - double(n)));
        CHECK(max_abs(commutator(q, p).entries - expected) <= 1e-12);
    }
}

TEST_CASE("inner products of basis vectors") {
    const Representation rep = Representation::fock(8);
    CHECK(std::abs(inner(basis_vector(rep, 0), basis_vector(rep, 0)) - 1.0) < 1e-15);
    CHECK(std::abs(inner(basis_vector(rep, 0), basis_vector(rep, 1))) == 0.0);
    CHECK_THROWS_AS(inner(basis_vector(rep, 0), basis_vector(Representation::fock(9), 0)), RepresentationMismatch);
    CHECK_THROWS_AS(inner(basis_vector(rep, 0), basis_vector(Representation::fock(8, 2.0), 0)),
                    RepresentationMismatch);
}

TEST_CASE("invalid representations are rejected") {
    CHECK_THROWS_AS(Representation::fock(1), InvalidRepresentation);
    CHECK_THROWS_AS(Representation::fock(8, 0.0), InvalidRepresentation);
    CHECK_THROWS_AS(Representation::fock(8, -1.0), InvalidRepresentation);
    CHECK_THROWS_AS(Representation::half_line({15, 1e-3, 10.0, Spacing::Uniform}), InvalidRepresentation);
    CHECK_THROWS_AS(Representation::half_line({64, 0.0, 10.0, Spacing::Uniform}), InvalidRepresentation);
    CHECK_THROWS_AS(Representation::half_line({64, 2.0, 1.0, Spacing::Logarithmic}), InvalidRepresentation);
    CHECK_THROWS_AS(StateVector(Representation::fock(4), Vector::Zero(5)), InvalidRepresentation);
}

TEST_CASE("grid quadrature integrates exp(-x)") {
    // int_a^b exp(-x) dx = exp(-a) - exp(-b)
    for (Spacing sp : {Spacing::Logarithmic, Spacing::Uniform}) {
        const HalfLineGrid g{sp == Spacing::Uniform ? 20001 : 2000, 1e-6, 50.0, sp};
        const Representation rep = Representation::half_line(g);
        const Vector psi = (-0.5 * rep.nodes().array()).exp().cast<Complex>().matrix();
        const double exact = std::exp(-g.x_min) - std::exp(-g.x_max);
        // Uniform trapezoid error h^2/12 (f'(b) - f'(a)); the log grid decays at both ends.
        const double h = rep.native_step();
        const double bias = sp == Spacing::Uniform ? h * h / 12.0 * (std::exp(-g.x_min) - std::exp(-g.x_max)) : 0.0;
        CHECK(std::abs(inner(StateVector(rep, psi), StateVector(rep, psi)).real() - exact - bias) <= 1e-9);
    }
}

TEST_CASE("expm_apply examples") {
    const Representation rep = Representation::fock(64, 1.0);
    const auto [q, p] = build_fock_ops(rep);
    const StateVector v = normalized(StateVector(rep, Vector::LinSpaced(64, 1.0, 0.0).cast<Complex>()));

    CHECK(distance(expm_apply(q, 0.0, v), v) == 0.0);
    CHECK(std::abs(norm(expm_apply(q, Complex(0.0, 0.7), v)) - 1.0) <= 1e-10);

    const Representation two = Representation::fock(2);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const StateVector w(two, Vector::Constant(2, Complex(1.0 / std::sqrt(2.0))));
    const StateVector out = expm_apply(OperatorMatrix(two, d), 1.0, w);
    CHECK(std::abs(out.coeffs(0) - std::exp(1.0) / std::sqrt(2.0)) <= 1e-13);
    CHECK(std::abs(out.coeffs(1) - std::exp(2.0) / std::sqrt(2.0)) <= 1e-12);

    // Nilpotent generator: exp(N) = 1 + N.
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    const StateVector e1 = basis_vector(two, 1);
    const StateVector shifted = expm_apply(OperatorMatrix(two, nil), 1.0, e1);
    CHECK(std::abs(shifted.coeffs(0) - 1.0) <= 1e-14);
    CHECK(std::abs(shifted.coeffs(1) - 1.0) <= 1e-14);

    Matrix bad = d;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(expm_apply(OperatorMatrix(two, bad), 1.0, w), NumericError);
}

TEST_CASE("spectral decomposition examples") {
    const Representation three = Representation::fock(3);
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const SpectralData s = spectral_decompose(OperatorMatrix(three, d));
    CHECK(std::abs(s.eigenvalues(0) - 1.0) <= 1e-14);
    CHECK(std::abs(s.eigenvalues(1) - 2.0) <= 1e-14);
    CHECK(std::abs(s.eigenvalues(2) - 3.0) <= 1e-14);

    const auto [q, p] = build_fock_ops(Representation::fock(64, 1.0));
    const SpectralData sq = spectral_decompose(q);
    for (Index k = 0; k < 32; ++k) CHECK(std::abs(sq.eigenvalues(k) + sq.eigenvalues(63 - k)) <= 1e-10);

    const CoherentFamily family(Representation::fock(128, 1.0));
    const OperatorMatrix h = quantize(family, find_hamiltonian("oscillator").polynomial);
    const SpectralData sh = spectral_decompose(h);
    for (Index n = 0; n < 5; ++n) CHECK(std::abs(sh.eigenvalues(n) - (double(n) + 0.5)) <= 1e-8);

    Matrix skew = Matrix::Zero(3, 3);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral_decompose(OperatorMatrix(three, skew)), HermiticityError);
}

TEST_CASE("property: unitarity of exp(itA) for random hermitian A") {
    std::mt19937_64 rng(7);
    const Representation rep = Representation::fock(24);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix m = random_matrix(24, rng);
        const OperatorMatrix a(rep, 0.5 * (m + m.adjoint()));
        const StateVector v = normalized(StateVector(rep, random_vector(24, rng)));
        const double t = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        CHECK(std::abs(norm(expm_apply(a, Complex(0.0, t), v)) - 1.0) <= 1e-10);
    }
}

TEST_CASE("property: spectral completeness and reconstruction") {
    std::mt19937_64 rng(11);
    const Representation rep = Representation::fock(32);
    const Matrix m = random_matrix(32, rng);
    const OperatorMatrix a(rep, 0.5 * (m + m.adjoint()));
    const SpectralData s = spectral_decompose(a);
    CHECK(max_abs(s.vectors * s.vectors.adjoint() - Matrix::Identity(32, 32)) <= 1e-10);
    CHECK(max_abs(s.vectors.adjoint() * s.vectors - Matrix::Identity(32, 32)) <= 1e-10);
    CHECK((reconstruct(s) - a.entries).norm() / a.entries.norm() <= 1e-10);
    for (Index k = 1; k < s.size(); ++k) CHECK(s.eigenvalues(k) >= s.eigenvalues(k - 1));
}

TEST_CASE("property: spectral data on a weighted grid") {
    std::mt19937_64 rng(13);
    const Representation rep = Representation::half_line({40, 0.1, 5.0, Spacing::Logarithmic});
    // W A hermitian means A = W^{-1} H for hermitian H.
    const Matrix m = random_matrix(40, rng);
    const Matrix herm = 0.5 * (m + m.adjoint());
    const Matrix a = rep.weights().cwiseInverse().cast<Complex>().asDiagonal() * herm;
    const SpectralData s = spectral_decompose(OperatorMatrix(rep, a));
    for (Index j = 0; j < 40; ++j)
        for (Index k = 0; k < 40; ++k) {
            const Complex ov = inner(s.eigenvector(j), s.eigenvector(k));
            CHECK(std::abs(ov - (j == k ? 1.0 : 0.0)) <= 1e-10);
        }
    CHECK((reconstruct(s) - a).norm() / a.norm() <= 1e-10);
}

TEST_CASE("property: adjoint duality") {
    std::mt19937_64 rng(17);
    for (const Representation& rep :
         {Representation::fock(20), Representation::half_line({20, 0.5, 4.0, Spacing::Logarithmic})}) {
        for (int trial = 0; trial < 10; ++trial) {
            const OperatorMatrix a(rep, random_matrix(20, rng));
            const StateVector psi(rep, random_vector(20, rng));
            const StateVector phi(rep, random_vector(20, rng));
            const Complex lhs = inner(psi, apply(adjoint(a), phi));
            const Complex rhs = std::conj(inner(phi, apply(a, psi)));
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

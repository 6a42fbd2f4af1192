#include "equant/errors.hpp"
#include "equant/selfadjoint.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

using namespace equant;

namespace {

const Domain kHalf{DomainKind::HalfLine, 0.0};
const Domain kFull{DomainKind::FullLine, 0.0};

}  // namespace

TEST_CASE("verdict mapping") {
    CHECK(verdict_for(0, 0) == Verdict::SelfAdjoint);
    CHECK(verdict_for(1, 1) == Verdict::HasSelfAdjointExtensions);
    CHECK(verdict_for(1, 0) == Verdict::NotExtendable);
    CHECK(verdict_for(0, 1) == Verdict::NotExtendable);
    CHECK(verdict_for(2, 1) == Verdict::NotExtendable);
    CHECK(to_string(Verdict::NotExtendable) == "NotExtendable");
    CHECK(to_string(OperatorKind::DilationD) == "D");
    CHECK(to_string(DomainKind::FullLine) == "fullline");
}

TEST_CASE("integrability oracles") {
    // int_0^inf e^-y dy = 1
    const IntegrabilityResult exp_half = test_integrability([](double y) { return -y; }, kHalf);
    CHECK(exp_half.normalizable);
    CHECK(std::abs(exp_half.norm_squared - 1.0) <= 1e-8);
    CHECK(exp_half.refinements > 0);

    // int e^{-y^2} dy = sqrt(pi)
    const IntegrabilityResult gauss = test_integrability([](double y) { return -y * y; }, kFull);
    CHECK(gauss.normalizable);
    CHECK(std::abs(gauss.norm_squared - std::sqrt(std::numbers::pi)) <= 1e-8);

    // int_0^inf (1 + y)^-2 dy = 1 with an algebraic tail.
    const IntegrabilityResult algebraic = test_integrability([](double y) { return -2.0 * std::log1p(y); }, kHalf);
    CHECK(algebraic.normalizable);
    CHECK(std::abs(algebraic.norm_squared - 1.0) <= 1e-6);

    // y^-1/2 is integrable at 0 but not at infinity; y^-1 fails at both ends.
    CHECK_FALSE(test_integrability([](double y) { return -0.5 * std::log(y); }, kHalf).normalizable);
    const IntegrabilityResult log_div = test_integrability([](double y) { return -std::log(y); }, kHalf);
    CHECK_FALSE(log_div.normalizable);
    CHECK(log_div.norm_squared == std::numeric_limits<double>::infinity());
    CHECK_FALSE(log_div.reason.empty());

    // Growing densities overflow.
    CHECK_FALSE(test_integrability([](double y) { return y; }, kHalf).normalizable);
}

TEST_CASE("P on the half-line has indices (1, 0)") {
    for (double hbar : {0.5, 1.0, 2.0}) {
        CAPTURE(hbar);
        const DeficiencyReport r = deficiency_indices(OperatorKind::MomentumP, kHalf, hbar);
        CHECK(r.n_plus == 1);
        CHECK(r.n_minus == 0);
        CHECK(r.verdict == Verdict::NotExtendable);
        // |psi|^2 = exp(-2x/hbar) integrates to hbar/2.
        CHECK(std::abs(r.plus.norm_squared - 0.5 * hbar) <= 1e-8);
        CHECK_FALSE(r.minus.normalizable);
        REQUIRE(r.witness_functions.size() == 1);
        // The reporting grid starts at y = 1e-4 and misses 1 - exp(-2e-4/hbar) of the norm.
        const double kept = std::exp(-2e-4 / hbar);
        CHECK(std::abs(std::pow(norm(r.witness_functions.front()), 2) - kept) <= 1e-8);
        CHECK(r.operator_label == "P");
    }
}

TEST_CASE("P on the full line is self-adjoint") {
    const DeficiencyReport r = deficiency_indices(OperatorKind::MomentumP, kFull, 1.0);
    CHECK(r.n_plus == 0);
    CHECK(r.n_minus == 0);
    CHECK(r.verdict == Verdict::SelfAdjoint);
    CHECK(r.witness_functions.empty());
}

TEST_CASE("D on the half-line is self-adjoint") {
    for (double hbar : {0.5, 1.0, 3.0}) {
        CAPTURE(hbar);
        const DeficiencyReport r = deficiency_indices(OperatorKind::DilationD, kHalf, hbar);
        CHECK(r.n_plus == 0);
        CHECK(r.n_minus == 0);
        CHECK(r.verdict == Verdict::SelfAdjoint);
    }
}

TEST_CASE("property: verdicts do not depend on hbar or the endpoint") {
    for (double gamma : {0.0, 1.0, 1e3}) {
        for (double hbar : {1e-3, 0.25, 1.0, 4.0, 1e3}) {
            CAPTURE(gamma);
            CAPTURE(hbar);
            const DeficiencyReport r = deficiency_indices(OperatorKind::MomentumP, {DomainKind::HalfLine, gamma}, hbar);
            CHECK(r.n_plus == 1);
            CHECK(r.n_minus == 0);
            CHECK(std::abs(r.plus.norm_squared - 0.5 * hbar) <= 1e-8 * hbar);
        }
    }
    for (double hbar : {1e-3, 0.25, 4.0, 1e3}) {
        CAPTURE(hbar);
        const DeficiencyReport d = deficiency_indices(OperatorKind::DilationD, kHalf, hbar);
        CHECK(d.n_plus == 0);
        CHECK(d.n_minus == 0);
        CHECK(deficiency_indices(OperatorKind::MomentumP, kFull, hbar).verdict == Verdict::SelfAdjoint);
    }
}

TEST_CASE("singular coefficient inside the domain is rejected") {
    const FirstOrderOperator d = operator_for(OperatorKind::DilationD);
    CHECK_THROWS_AS(deficiency_indices(d, kFull, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(deficiency_indices(d, {DomainKind::HalfLine, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(deficiency_indices(OperatorKind::DilationD, kFull, 1.0), std::invalid_argument);
}

TEST_CASE("multiplication operators are self-adjoint") {
    const DeficiencyReport r = deficiency_indices(FirstOrderOperator{"Q", 0.0, 1.0, 0.0}, kHalf, 1.0);
    CHECK(r.n_plus == 0);
    CHECK(r.n_minus == 0);
}

TEST_CASE("imaginary eigenvalue of P on the half-line") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        CAPTURE(alpha);
        const EigenvectorDemo d = imaginary_eigenvector_demo(alpha, 1.0);
        CHECK(std::abs(d.norm_squared - 0.5 / alpha) <= 1e-6 * (0.5 / alpha));
        CHECK(d.norm_error <= 1e-6);
        CHECK(d.residual <= 1e-6);
        // <P> = i alpha, and the imaginary part is the boundary flux hbar |psi(0)|^2 / (2 ||psi||^2).
        CHECK(std::abs(d.expectation.imag() - alpha) <= 1e-5 * alpha);
        CHECK(std::abs(d.expectation.real()) <= 1e-8);
        CHECK(std::abs(d.boundary_term - alpha) <= 1e-5 * alpha);
        CHECK(d.non_real);
    }
    const HalfLineGrid g = demo_grid(2.0, 0.5);
    CHECK(g.points == 4000);
    CHECK(g.x_min == doctest::Approx(1e-12 * 0.25));
    CHECK(g.x_max == doctest::Approx(30.0 * 0.25));
}

TEST_CASE("eigenvector demo window checks") {
    CHECK_THROWS_AS(imaginary_eigenvector_demo(1.0, 1.0, HalfLineGrid{}), WindowError);
    CHECK_THROWS_AS(imaginary_eigenvector_demo(1.0, 1.0, HalfLineGrid{4000, 1e-12, 5.0, Spacing::Logarithmic}),
                    WindowError);
}

TEST_CASE("P is hermitian only away from the boundary") {
    for (double hbar : {0.5, 1.0, 2.0}) {
        CAPTURE(hbar);
        const HermiticityWitness w = momentum_hermiticity_witness(hbar);
        CHECK(w.defect <= 1e-8);
        CHECK(std::abs(w.boundary_defect - hbar) <= 1e-8 * hbar);
    }
}

TEST_CASE("transformed operators on the half-line") {
    const auto diagnoses = quantum_transform_diagnosis(1.0);
    REQUIRE(diagnoses.size() == 4);
    const double r2 = std::numbers::sqrt2;
    for (const auto& d : diagnoses) {
        CAPTURE(d.name);
        if (d.name == "P*=-Q") {
            CHECK(d.report.verdict == Verdict::SelfAdjoint);
        } else {
            CHECK(d.report.n_plus == 1);
            CHECK(d.report.n_minus == 0);
            CHECK(d.report.verdict == Verdict::NotExtendable);
            // |psi|^2 = exp(-2x / (c_p hbar)) integrates to c_p hbar / 2.
            CHECK(std::abs(d.report.plus.norm_squared - 0.5 * d.op.c_p) <= 1e-8);
        }
    }
    CHECK(diagnoses[0].op.c_p == r2);
    CHECK(diagnoses[3].name == "Q*=P");
}

TEST_CASE("key-value report") {
    std::ostringstream out;
    write_key_values(out, deficiency_indices(OperatorKind::MomentumP, kHalf, 1.0));
    const std::string s = out.str();
    CHECK(s.rfind("operator=P\ndomain=halfline\ngamma=0.0000000000000000e+00\nhbar=1.0000000000000000e+00\n", 0) == 0);
    CHECK(s.find("n_plus=1\nn_minus=0\nverdict=NotExtendable\n") != std::string::npos);
    CHECK(s.find("norm_plus=5.0000000") != std::string::npos);
    CHECK(s.find("norm_minus=inf\n") != std::string::npos);
}

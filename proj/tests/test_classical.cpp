#include "equant/catalog.hpp"
#include "equant/classical.hpp"
#include "equant/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace equant;

namespace {

constexpr double kPi = std::numbers::pi;

const CoherentFamily& vacuum_family() {
    static const CoherentFamily family(Representation::fock(128, 1.0));
    return family;
}

const OperatorMatrix& oscillator_op() {
    static const OperatorMatrix h = quantize(vacuum_family(), find_hamiltonian("oscillator").polynomial);
    return h;
}

// Oscillator solution through (p, q) = (1, 0): p = cos t, q = sin t.
Trajectory unit_circle(double t1, std::size_t n) {
    return sample_trajectory([](double t) { return PhasePoint{std::cos(t), std::sin(t)}; }, 0.0, t1, n);
}

const std::vector<PhasePoint>& probe_points() {
    static const std::vector<PhasePoint> pts{{0.0, 0.0}, {1.0, -0.5}, {-2.0, 0.3}, {0.7, 1.9}};
    return pts;
}

}  // namespace

TEST_CASE("oscillator returns after one period") {
    const Trajectory traj = integrate(oscillator_hamiltonian(), {0.0, 1.0}, 2.0 * kPi, 1e-3);
    CHECK(traj.times.back() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(traj.uniform());
    CHECK(std::abs(traj.points.back().p) <= 1e-5);
    CHECK(std::abs(traj.points.back().q - 1.0) <= 1e-5);
    CHECK(traj.energy_drift <= 1e-6);
    // Quarter period: (p, q) = (-1, 0).
    const PhasePoint quarter = traj.points[traj.size() / 4];
    CHECK(std::abs(quarter.p + 1.0) <= 1e-3);
}

TEST_CASE("translation Hamiltonian moves q at unit speed") {
    const Trajectory traj = integrate(translation_hamiltonian(), {0.4, -1.0}, 3.0, 0.01);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(std::abs(traj.points[i].q - (-1.0 + traj.times[i])) <= 1e-10);
        CHECK(traj.points[i].p == 0.4);
    }
}

TEST_CASE("implicit midpoint for a non-separable Hamiltonian") {
    // H = p q: q = q0 e^t, p = p0 e^-t, and pq is conserved exactly by the midpoint rule.
    const ClassicalHamiltonian h = from_function([](double p, double q) { return p * q; });
    const Trajectory traj = integrate(h, {2.0, 0.5}, 1.0, 1e-3);
    CHECK(std::abs(traj.points.back().q / (0.5 * std::exp(1.0)) - 1.0) <= 1e-6);
    CHECK(std::abs(traj.points.back().p / (2.0 * std::exp(-1.0)) - 1.0) <= 1e-6);
    CHECK(traj.energy_drift <= 1e-10);
}

TEST_CASE("integration errors") {
    CHECK_THROWS_AS(integrate(oscillator_hamiltonian(), {0.0, 1.0}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(oscillator_hamiltonian(), {0.0, 1.0}, -1.0, 0.1), std::invalid_argument);
    // p' = q^3 escapes to infinity in finite time.
    const ClassicalHamiltonian runaway = from_function([](double p, double q) { return 0.5 * p * p - 0.25 * std::pow(q, 4); }, true);
    CHECK_THROWS_AS(integrate(runaway, {1.0, 1.0}, 10.0, 1e-2), BlowUpError);
}

TEST_CASE("catalog transforms are canonical and invertible") {
    for (const ContactTransform& t : transform_catalog()) {
        CAPTURE(t.name);
        const BracketReport b = check_bracket(t, probe_points());
        CHECK(b.max_deviation <= 1e-10);
        CHECK(b.brackets.size() == probe_points().size());
        CHECK(roundtrip_error(t, probe_points()) <= 1e-12);
        REQUIRE(t.generator.has_value());
    }
    const PhasePoint r = rotation_transform().forward({2.0, 3.0});
    CHECK(r.p == -3.0);
    CHECK(r.q == 2.0);
    const PhasePoint s = scaling_transform(2.0).forward({2.0, 3.0});
    CHECK(s.p == 1.0);
    CHECK(s.q == 6.0);
}

TEST_CASE("degenerate transforms are rejected") {
    const ContactTransform collapse{"collapse", [](PhasePoint x) { return PhasePoint{x.p + x.q, x.p + x.q}; },
                                    [](PhasePoint s) { return s; }, std::nullopt};
    CHECK_THROWS_AS(check_bracket(collapse, probe_points()), DegenerateTransform);
    CHECK_THROWS_AS(scaling_transform(0.0), DegenerateTransform);
}

TEST_CASE("pulled-back Hamiltonians") {
    const ClassicalHamiltonian osc = oscillator_hamiltonian();
    const ClassicalHamiltonian rotated = pullback_H(osc, rotation_transform());
    for (const PhasePoint& x : probe_points()) {
        CHECK(rotated(x.p, x.q) == doctest::Approx(osc(x.p, x.q)).epsilon(1e-14));
    }
    const ClassicalHamiltonian same = pullback_H(osc, identity_transform());
    CHECK(same(0.3, -0.7) == doctest::Approx(osc(0.3, -0.7)).epsilon(1e-14));

    // H*(p*, q*) = H(sqrt2 p* - q*, sqrt2 q* - p*).
    const double r = std::numbers::sqrt2;
    const ClassicalHamiltonian star = pullback_H(osc, sqrt2_transform());
    const double ps = 0.4, qs = -0.9;
    const double p = r * ps - qs, q = r * qs - ps;
    CHECK(star(ps, qs) == doctest::Approx(0.5 * (p * p + q * q)).epsilon(1e-14));
    CHECK(std::abs(star.grad_p(ps, qs) - (r * p - q)) <= 1e-7);
    CHECK(std::abs(star.grad_q(ps, qs) - (r * q - p)) <= 1e-7);
}

TEST_CASE("property: flows commute with the transform") {
    const ContactTransform t = sqrt2_transform();
    const PhasePoint start{0.6, -0.2};
    const Trajectory direct = integrate(oscillator_hamiltonian(), start, 1.0, 1e-3);
    const Trajectory star = integrate(pullback_H(oscillator_hamiltonian(), t), t.forward(start), 1.0, 1e-3);
    const PhasePoint mapped = t.forward(direct.points.back());
    CHECK(std::abs(mapped.p - star.points.back().p) <= 1e-6);
    CHECK(std::abs(mapped.q - star.points.back().q) <= 1e-6);
}

TEST_CASE("action of a static path is -T <H>") {
    const Trajectory still = sample_trajectory([](double) { return PhasePoint{0.5, 0.3}; }, 0.0, 1.5, 20);
    const ActionReport r = enhanced_action(vacuum_family(), oscillator_op(), still);
    const double energy = 0.5 * (0.25 + 0.09) + 0.5;
    CHECK(std::abs(r.quantum + 1.5 * energy) <= 1e-7);
    CHECK(std::abs(r.quantum_imag) <= 1e-10);
    CHECK(std::abs(r.difference) <= 1e-7);
    CHECK(r.boundary_term == 0.0);
}

TEST_CASE("action around the oscillator circle") {
    // int p q' dt = pi and int <H> dt = 2 pi (1/2 + hbar/2).
    const ActionReport r = enhanced_action(vacuum_family(), oscillator_op(), unit_circle(2.0 * kPi, 400));
    CHECK(std::abs(r.quantum + kPi) <= 1e-5);
    CHECK(std::abs(r.classical + kPi) <= 1e-5);
    CHECK(std::abs(r.difference) <= 1e-5);
    CHECK(std::abs(r.boundary_term) <= 1e-12);
    CHECK(std::abs(r.classical - r.classical_other) <= 1e-5);
    CHECK(r.richardson_gap <= 1e-3);
    CHECK(std::abs(kinetic_integral(unit_circle(2.0 * kPi, 400)) - kPi) <= 1e-8);
}

TEST_CASE("open arc keeps the boundary term") {
    const Trajectory arc = unit_circle(1.0, 200);
    const ActionReport r = enhanced_action(vacuum_family(), oscillator_op(), arc);
    CHECK(std::abs(r.difference) <= 1e-5);
    const double pq_end = std::cos(1.0) * std::sin(1.0);
    CHECK(std::abs(r.boundary_term - pq_end) <= 1e-12);
    // Trapezoid on an open arc: dt^2/12 |f'(b) - f'(a)| with dt = 5e-3.
    CHECK(std::abs((r.classical - r.classical_other) - pq_end) <= 1e-5);
}

TEST_CASE("affine action uses -q p' - H") {
    const AffineFamily family(Representation::half_line(default_affine_grid(), 1.0), 2.0);
    const Trajectory loop = sample_trajectory(
        [](double t) { return PhasePoint{0.3 * std::sin(t), 1.0 + 0.2 * std::cos(t)}; }, 0.0, 1.5, 150);
    const ActionReport r = enhanced_action(family, family.Q(), loop, [](double, double q) { return q; });
    CHECK(std::abs(r.difference) <= 1e-4);
    CHECK(std::abs(r.classical_other - r.classical - r.boundary_term) <= 1e-5);
    const Trajectory bad = sample_trajectory([](double t) { return PhasePoint{0.0, 1.0 - t}; }, 0.0, 1.0, 10);
    CHECK_THROWS_AS(enhanced_action(family, family.Q(), bad), std::invalid_argument);
}

TEST_CASE("action needs a uniform path") {
    const Trajectory short_path = unit_circle(1.0, 3);
    CHECK_THROWS_AS(enhanced_action(vacuum_family(), oscillator_op(), short_path), std::invalid_argument);
    const Trajectory uneven({0.0, 0.1, 0.3, 0.4, 0.5, 0.6}, std::vector<PhasePoint>(6, PhasePoint{0.0, 0.0}));
    CHECK_THROWS_AS(enhanced_action(vacuum_family(), oscillator_op(), uneven), std::invalid_argument);
}

TEST_CASE("catalog Hamiltonians agree on both sides of the action") {
    const Trajectory path = sample_trajectory(
        [](double t) { return PhasePoint{0.3 * std::cos(t), 0.3 * std::sin(t) + 0.1}; }, 0.0, 1.0, 200);
    for (const char* name : {"free", "quartic", "q", "p"}) {
        CAPTURE(name);
        const CatalogHamiltonian& entry = find_hamiltonian(name);
        const OperatorMatrix h = quantize(vacuum_family(), entry.polynomial);
        const ActionReport r = enhanced_action(vacuum_family(), h, path);
        CHECK(std::abs(r.difference) <= 1e-5);
    }
}

TEST_CASE("relabelling leaves the states alone") {
    for (const ContactTransform& t : transform_catalog()) {
        CAPTURE(t.name);
        for (const PhasePoint& x : {PhasePoint{0.3, -0.4}, PhasePoint{1.0, 0.5}}) {
            CHECK(relabel_invariance(vacuum_family(), t, x) <= 1e-10);
        }
    }
}

TEST_CASE("transformed action identity") {
    for (const ContactTransform& t : {rotation_transform(), sqrt2_transform()}) {
        CAPTURE(t.name);
        const Trajectory loop_star = map_trajectory(unit_circle(2.0 * kPi, 400), t.forward);
        const TransformedActionReport closed = transformed_action_identity(vacuum_family(), oscillator_op(), t, loop_star);
        CHECK(std::abs(closed.difference) <= 1e-5);
        CHECK(std::abs(closed.generator_term) <= 1e-7);

        const Trajectory arc_star = map_trajectory(unit_circle(2.0, 200), t.forward);
        const TransformedActionReport open = transformed_action_identity(vacuum_family(), oscillator_op(), t, arc_star);
        CHECK(std::abs(open.difference) <= 1e-5);
        const PhasePoint a = arc_star.points.front(), b = arc_star.points.back();
        const double g_change = (*t.generator)(b.p, b.q) - (*t.generator)(a.p, a.q);
        // Trapezoid bias dt^2/12 |G''(b) - G''(a)| with dt = 1e-2.
        CHECK(std::abs(open.generator_term - g_change) <= 5e-5);
        CHECK(std::abs(open.generator_term) >= 1e-3);
    }
    ContactTransform bare = rotation_transform();
    bare.generator.reset();
    CHECK_THROWS_AS(transformed_action_identity(vacuum_family(), oscillator_op(), bare, unit_circle(1.0, 20)),
                    GeneratorRequired);
}

TEST_CASE("property: loop integral of p dq is invariant") {
    const Trajectory loop = unit_circle(2.0 * kPi, 400);
    for (const ContactTransform& t : transform_catalog()) {
        CAPTURE(t.name);
        CHECK(std::abs(kinetic_integral(map_trajectory(loop, t.forward)) - kinetic_integral(loop)) <= 1e-7);
    }
}

TEST_CASE("property: the action is stationary on solutions") {
    const Trajectory solution = unit_circle(2.0, 200);
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    const StationarityReport s = action_stationarity(vacuum_family(), oscillator_op(), solution, eps);
    CHECK(s.delta_action.size() == 3);
    CHECK(s.exponent >= 1.95);

    // Off-shell paths change at first order.
    const Trajectory off = sample_trajectory([](double t) { return PhasePoint{0.5, t}; }, 0.0, 2.0, 200);
    const StationarityReport f = action_stationarity(vacuum_family(), oscillator_op(), off, eps);
    CHECK(std::abs(f.exponent - 1.0) <= 0.05);
}

TEST_CASE("trajectory csv") {
    const Trajectory traj({0.0, 0.5}, {PhasePoint{1.0, -0.25}, PhasePoint{0.125, 2.0}});
    std::ostringstream plain;
    write_trajectory_csv(plain, traj);
    CHECK(plain.str() ==
          "t,p,q\n"
          "0.0000000000000000e+00,1.0000000000000000e+00,-2.5000000000000000e-01\n"
          "5.0000000000000000e-01,1.2500000000000000e-01,2.0000000000000000e+00\n");
    std::ostringstream both;
    write_trajectory_csv(both, traj, &traj);
    CHECK(both.str().rfind("t,p,q,p_star,q_star\n", 0) == 0);
    const Trajectory other({0.0}, {PhasePoint{0.0, 0.0}});
    CHECK_THROWS_AS(write_trajectory_csv(both, traj, &other), std::invalid_argument);
}

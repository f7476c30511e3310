#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "projq/classical.hpp"
#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/linalg.hpp"
#include "projq/poly.hpp"
#include "projq/quantize.hpp"

using namespace projq;

namespace {

constraint_system circle_system() {
    return constraint_system(parse_polynomial("0.5*p1^2 + 0.5*p2^2"),
                             {parse_polynomial("0.5*q1^2 + 0.5*q2^2 - 0.5"),
                              parse_polynomial("q1*p1 + q2*p2")});
}

double max_drift(const trajectory& t) {
    double worst = 0.0;
    for (double d : t.drift) worst = std::max(worst, d);
    return worst;
}

} // namespace

TEST_SUITE("classical") {
    TEST_CASE("polynomial parsing, printing, evaluation") {
        const phase_polynomial f = parse_polynomial("0.5*p1^2 + q1*q2 - 2*q2^2");
        CHECK(f.dof == 2);
        CHECK(f.degree() == 2);
        phase_point x;
        x.q = (rvector(2) << 1.0, 2.0).finished();
        x.p = (rvector(2) << 3.0, 0.0).finished();
        CHECK(f.eval(x) == doctest::Approx(0.5 * 9.0 + 2.0 - 8.0));
        // Unicode minus and whitespace variants parse identically.
        const phase_polynomial g = parse_polynomial("0.5*p1^2+q1*q2−2*q2^2");
        CHECK(max_coeff_diff(f, g) == 0.0);
        CHECK_THROWS_AS(parse_polynomial("q1 +"), parse_error);
        CHECK_THROWS_AS(parse_polynomial("p0"), parse_error);
        CHECK_THROWS_AS(parse_polynomial(""), parse_error);
    }

    TEST_CASE("canonical bracket convention: {q, p} = +1") {
        const phase_polynomial q1 = phase_polynomial::coordinate(1, 1);
        const phase_polynomial p1 = phase_polynomial::momentum(1, 1);
        const phase_polynomial bracket = poisson_bracket(q1, p1);
        CHECK(max_coeff_diff(bracket, phase_polynomial::constant(1, 1.0)) == 0.0);
        CHECK(poisson_bracket(q1, q1).is_zero());
        // Angular momentum algebra: {L1, L2} = L3.
        const phase_polynomial l1 = parse_polynomial("q2*p3 - q3*p2");
        const phase_polynomial l2 = parse_polynomial("q3*p1 - q1*p3");
        const phase_polynomial l3 = parse_polynomial("q1*p2 - q2*p1");
        CHECK(max_coeff_diff(poisson_bracket(l1, l2), l3) == 0.0);
    }

    TEST_CASE("bracket identities vanish exactly on dyadic polynomials") {
        std::mt19937_64 rng(20260816);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const phase_polynomial f = random_sparse_polynomial(rng, 3, 4, 4);
            const phase_polynomial g = random_sparse_polynomial(rng, 3, 4, 4);
            const phase_polynomial h = random_sparse_polynomial(rng, 3, 4, 4);
            worst = std::max(worst, bracket_identity_residual(f, g, h));
        }
        CHECK(worst == 0.0);
    }

    TEST_CASE("surface sampling lands on the constraint surface") {
        const constraint_system sys = circle_system();
        const std::vector<phase_point> pts = surface_samples(sys.phis, 25);
        CHECK(pts.size() >= 20);
        for (const phase_point& x : pts)
            for (const phase_polynomial& phi : sys.phis)
                CHECK(std::abs(phi.eval(x)) < 1e-9);
    }

    TEST_CASE("classification: second class (circle)") {
        const classification_report rep = classify(circle_system(), 40);
        CHECK(rep.verdict == constraint_verdict::second_class);
        // The report normalizes each constraint to unit max coefficient, which
        // doubles the 0.5-scaled radius constraint: {q^2+q^2-1, q.p} = 2 on
        // the unit circle.
        CHECK(rep.bracket_matrix_min_singular_value == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(!rep.secondary_constraint_suspected);
    }

    TEST_CASE("classification: first class, closed algebra (rotations)") {
        const constraint_system sys(parse_polynomial("q1*p2 - q2*p1"),
                                    {parse_polynomial("q2*p3 - q3*p2"),
                                     parse_polynomial("q3*p1 - q1*p3"),
                                     parse_polynomial("q1*p2 - q2*p1")});
        const classification_report rep = classify(sys, 40);
        CHECK(rep.verdict == constraint_verdict::first_class_closed);
    }

    TEST_CASE("classification: mixed set") {
        const constraint_system sys(phase_polynomial::zero(2),
                                    {parse_polynomial("p1"), parse_polynomial("p2"),
                                     parse_polynomial("q2")});
        const classification_report rep = classify(sys, 40);
        CHECK(rep.verdict == constraint_verdict::mixed);
    }

    TEST_CASE("classification: inconclusive with a suspected secondary") {
        const constraint_system sys(parse_polynomial("q1"),
                                    {parse_polynomial("q1*p1")});
        const classification_report rep = classify(sys, 40);
        CHECK(rep.verdict == constraint_verdict::inconclusive);
        CHECK(rep.secondary_constraint_suspected);
    }

    TEST_CASE("classification is invariant under constraint rescaling") {
        const constraint_system scaled(
            parse_polynomial("0.5*p1^2 + 0.5*p2^2"),
            {parse_polynomial("5e6*q1^2 + 5e6*q2^2 - 5e6"),
             parse_polynomial("1e-7*q1*p1 + 1e-7*q2*p2")});
        const classification_report rep = classify(scaled, 40);
        CHECK(rep.verdict == constraint_verdict::second_class);
    }

    TEST_CASE("multipliers annihilate the constraint velocities") {
        const constraint_system sys = circle_system();
        phase_point x0;
        x0.q = (rvector(2) << 1.0, 0.0).finished();
        x0.p = (rvector(2) << 0.0, 1.0).finished();
        const std::vector<double> lambda = solve_multipliers(sys, x0);
        REQUIRE(lambda.size() == 2);
        // By hand: B = [[0,1],[-1,0]], rhs = ({phi1,H},{phi2,H}) = (0,1).
        CHECK(lambda[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(lambda[1]) < 1e-10);
        // A first-class set has no invertible bracket matrix anywhere.
        const constraint_system fc(parse_polynomial("q1*p2 - q2*p1"),
                                   {parse_polynomial("p1"), parse_polynomial("p2")});
        phase_point y;
        y.q = (rvector(2) << 0.3, -0.2).finished();
        y.p = (rvector(2) << 0.0, 0.0).finished();
        CHECK_THROWS_AS(solve_multipliers(fc, y), not_second_class_error);
    }

    TEST_CASE("constrained flow: drift stays tiny and shrinks at order >= 3.5") {
        const constraint_system sys = circle_system();
        phase_point x0;
        x0.q = (rvector(2) << 1.0, 0.0).finished();
        x0.p = (rvector(2) << 0.0, 1.0).finished();
        const multiplier_source src = multiplier_source::auto_second_class();
        std::vector<double> dts{0.1, 0.05, 0.025};
        std::vector<double> drifts;
        for (double dt : dts) {
            const long steps = std::lround(2.5 / dt);
            drifts.push_back(max_drift(integrate_constrained(sys, src, x0, dt, steps)));
        }
        CHECK(drifts.back() < 1e-6);
        CHECK(loglog_slope(dts, drifts) > 3.5);
        // Off-surface starting points are rejected.
        phase_point off = x0;
        off.q(0) = 1.5;
        CHECK_THROWS_AS(integrate_constrained(sys, src, off, 0.05, 10), input_error);
    }

    TEST_CASE("symmetric quantization of one-freedom polynomials") {
        const hilbert_space space = hilbert_space::fock(20);
        auto [p, q] = canonical_pair(space);
        const op_matrix q2 = quantize_polynomial(space, parse_polynomial("q1^2"));
        CHECK(max_abs(q2.entries - q.entries * q.entries) < 1e-12);
        const op_matrix mixed = quantize_polynomial(space, parse_polynomial("p1*q1"));
        const matrix sym = 0.5 * (p.entries * q.entries + q.entries * p.entries);
        CHECK(max_abs(mixed.entries - sym) < 1e-12);
        CHECK(mixed.hermitian);
        const op_matrix h = quantize_polynomial(space, parse_polynomial("0.5*p1^2 + 0.5*q1^2"));
        CHECK(max_abs(h.entries - 0.5 * (p.entries * p.entries + q.entries * q.entries)) <
              1e-12);
        CHECK_THROWS_AS(quantize_polynomial(space, parse_polynomial("q1*q2")), input_error);
    }
}

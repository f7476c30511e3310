#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/lattice.hpp"
#include "projq/linalg.hpp"
#include "projq/projection.hpp"

using namespace projq;

namespace {

constexpr double pi = std::numbers::pi;

op_matrix zero_op(const hilbert_space& space) {
    return op_matrix(space, matrix::Zero(space.dim, space.dim), true);
}

op_matrix oscillator_h(const hilbert_space& space) {
    auto [p, q] = canonical_pair(space);
    return op_matrix(space, 0.5 * (p.entries * p.entries + q.entries * q.entries), true);
}

} // namespace

TEST_SUITE("lattice") {
    TEST_CASE("grid weights integrate the square exactly") {
        const phase_grid grid = phase_grid::square(6.0, 0.25);
        CHECK(grid.nodes.size() == 49 * 49);
        double total = 0.0;
        for (double w : grid.weights) total += w;
        CHECK(total == doctest::Approx(144.0).epsilon(1e-12));
        CHECK_THROWS_AS(phase_grid::square(1.0, 0.3), validation_error);
    }

    TEST_CASE("grid trust: nodes must respect the cutoff budget") {
        const hilbert_space small = hilbert_space::fock(30);
        CHECK_THROWS_AS(resolution_residual(small, phase_grid::square(6.0, 0.25), 0),
                        trust_error);
    }

    TEST_CASE("resolution of unity at the documented grid") {
        const hilbert_space space = hilbert_space::fock(40);
        const phase_grid grid = phase_grid::square(6.0, 0.25);
        const double r0 = resolution_residual(space, grid, 0);
        CHECK(r0 < 1e-7); // frozen: 4.7e-9
        // Higher probe levels spread over phase space and the finite window
        // stops resolving them; the residual must grow monotonically.
        const double r5 = resolution_residual(space, grid, 5);
        CHECK(r5 == doctest::Approx(1.06e-4).epsilon(0.05));
        const double r8 = resolution_residual(space, grid, 8);
        CHECK(r8 == doctest::Approx(2.5e-3).epsilon(0.05));
        CHECK(r0 < r5);
        CHECK(r5 < r8);
        // Production grid: half-width 6, spacing 0.2, cutoff 50.
        const double rp = resolution_residual(hilbert_space::fock(50),
                                              phase_grid::square(6.0, 0.2), 0);
        CHECK(rp < 1e-6);
        CHECK_THROWS_AS(resolution_residual(space, grid, 36), input_error);
    }

    TEST_CASE("zero generator: pure telescoping of the resolution error") {
        const hilbert_space space = hilbert_space::fock(40);
        const phase_grid grid = phase_grid::square(6.0, 0.25);
        const lattice_result r =
            lattice_propagator(zero_op(space), {0.0, 0.0}, {0.0, 0.0}, 0.5, 8, grid);
        CHECK(std::abs(r.reference - cx(1.0, 0.0)) < 1e-12);
        CHECK(r.deviation < 1e-5);
        CHECK(!r.quadrature_limited);
    }

    TEST_CASE("harmonic generator: first-order deviation, frozen magnitude") {
        const hilbert_space space = hilbert_space::fock(40);
        const phase_grid grid = phase_grid::square(6.0, 0.25);
        const op_matrix h = oscillator_h(space);
        const lattice_result r64 =
            lattice_propagator(h, {0.0, 0.0}, {0.0, 0.0}, 0.5, 64, grid);
        CHECK(r64.deviation == doctest::Approx(3.94e-3).epsilon(0.1));
        CHECK(r64.deviation < 5e-3);
        const lattice_result r32 =
            lattice_propagator(h, {0.0, 0.0}, {0.0, 0.0}, 0.5, 32, grid);
        CHECK(r32.deviation / r64.deviation == doctest::Approx(2.0).epsilon(0.1));
        // Reference for the ground-state diagonal element: e^{-iT/2}.
        CHECK(std::abs(r64.reference - std::exp(cx(0.0, -0.25))) < 1e-10);
    }

    TEST_CASE("constrained lattice, zero generator: frozen refinement ladder") {
        const hilbert_space space = hilbert_space::fock(30);
        auto [p, q] = canonical_pair(space);
        const constraint_set cs(space, {p, q});
        const coherent_label to{1.0, 0.0}, from{0.0, 1.0};
        const double t = 0.5;
        const struct {
            double h;
            long n;
            double v;   // gamma * eps = v * pi
            double pin; // frozen deviation
        } rungs[] = {{1.0, 4, 16.5, 3.26e-4}, {0.5, 8, 32.5, 1.56e-4}, {0.25, 16, 64.5, 8.36e-5}};
        double prev = 1.0;
        for (const auto& rung : rungs) {
            const double eps = t / double(rung.n);
            const gamma_quadrature quad{rung.v * pi / eps, 32, quad_kind::tanh_sinh};
            const lattice_result r = constrained_lattice_propagator(
                zero_op(space), cs, 2.0, to, from, t, rung.n, phase_grid::square(5.0, rung.h),
                quad);
            CHECK(r.deviation == doctest::Approx(rung.pin).epsilon(0.15));
            CHECK(r.deviation < prev);
            prev = r.deviation;
            // Kernel endpoint overlap: |<to|0><0|from>| = e^{-1/2}.
            CHECK(std::abs(std::abs(r.reference) - std::exp(-0.5)) < 1e-10);
        }
    }

    TEST_CASE("constrained lattice, harmonic generator: frozen schedule") {
        const hilbert_space space = hilbert_space::fock(30);
        auto [p, q] = canonical_pair(space);
        const constraint_set cs(space, {p, q});
        const op_matrix h = oscillator_h(space);
        const coherent_label to{1.0, 0.0}, from{0.0, 1.0};
        const double t = 0.5;
        const struct {
            double h;
            long n;
            double v;
            double pin;
        } rungs[] = {{1.0, 8, 32.5, 1.91e-2}, {0.5, 16, 64.5, 9.55e-3}, {0.25, 32, 128.5, 4.77e-3}};
        std::vector<double> devs;
        for (const auto& rung : rungs) {
            const double eps = t / double(rung.n);
            const gamma_quadrature quad{rung.v * pi / eps, 32, quad_kind::tanh_sinh};
            const lattice_result r = constrained_lattice_propagator(
                h, cs, 2.0, to, from, t, rung.n, phase_grid::square(5.0, rung.h), quad);
            CHECK(r.deviation == doctest::Approx(rung.pin).epsilon(0.15));
            devs.push_back(r.deviation);
            // Reference: ground phase e^{-iT/2} on the real kernel overlap
            // <to|0><0|from> = e^{-1/4} * e^{-1/4}.
            CHECK(std::abs(r.reference - std::exp(cx(0.0, -0.25)) * std::exp(-0.5)) < 1e-10);
        }
        CHECK(devs.back() < 5e-3);
        CHECK(devs[0] / devs[1] == doctest::Approx(2.0).epsilon(0.1));
        CHECK(devs[1] / devs[2] == doctest::Approx(2.0).epsilon(0.1));
    }

    TEST_CASE("multiplier average: ladder, extrapolant, frozen limits") {
        const lambda_average_report flat = lambda_average_extrapolated(0.0, 0.7, 1e-3);
        for (const cx& v : flat.values) CHECK(std::abs(v - cx(1.0, 0.0)) < 1e-12);

        const lambda_average_report rep = lambda_average_extrapolated(1.0, 0.7, 1e-3);
        const cx quadratic_limit{1.0, 0.7e-3};
        CHECK(std::abs(rep.extrapolant - quadratic_limit) < 1e-8); // frozen: 1.6e-11
        // Distance to the exponential form isolates the (a*gamma)^2/2 term.
        const cx exponential = std::exp(cx(0.0, 0.7e-3));
        CHECK(std::abs(rep.extrapolant - exponential) ==
              doctest::Approx(2.45e-7).epsilon(0.05));
        CHECK(rep.eta_ladder.size() == 3);
    }

    TEST_CASE("first-order multiplier expansion: defect slopes 1 and 2") {
        const hilbert_space space = hilbert_space::fock(30);
        auto [p, q] = canonical_pair(space);
        const constraint_set cs(space, {p, q});
        const insufficiency_report rep =
            first_order_insufficiency_demo(cs, 2.0, {0.32, 0.16, 0.08, 0.04, 0.02});
        CHECK(!rep.exact);
        CHECK(rep.first_order_slope == doctest::Approx(1.0).epsilon(0.05));
        CHECK(rep.second_order_slope == doctest::Approx(2.0).epsilon(0.05));
        for (std::size_t i = 1; i < rep.eps_ladder.size(); ++i) {
            CHECK(rep.first_order_defect[i] < rep.first_order_defect[i - 1]);
            CHECK(rep.second_order_defect[i] < rep.second_order_defect[i - 1]);
        }

        const constraint_set trivial(space, {zero_op(space)});
        const insufficiency_report none =
            first_order_insufficiency_demo(trivial, 1.0, {0.32, 0.16, 0.08, 0.04, 0.02});
        CHECK(none.exact);
    }
}

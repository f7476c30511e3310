#include <doctest.h>

#include <cmath>
#include <vector>

#include "projq/dynamics.hpp"
#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/linalg.hpp"
#include "projq/projection.hpp"

using namespace projq;

namespace {

struct oscillator_fixture {
    hilbert_space space = hilbert_space::fock(30);
    op_matrix p, q, x, h_sq, h_osc;
    projector e;

    oscillator_fixture() {
        auto [pp, qq] = canonical_pair(space);
        p = pp;
        q = qq;
        x = sum_of_squares(constraint_set(space, {p, q}));
        h_sq = op_matrix(space, q.entries * q.entries, true);
        h_osc = op_matrix(space, 0.5 * x.entries, true);
        e = spectral_projector(x, 2.0);
    }
};

} // namespace

TEST_SUITE("dynamics") {
    TEST_CASE("exact evolution is unitary and correct on eigenvectors") {
        const oscillator_fixture f;
        const op_matrix u = exact_evolution(f.h_osc, 1.0);
        CHECK(spectral_norm(u.entries * u.entries.adjoint() -
                            matrix::Identity(30, 30)) < 1e-10);
        // Ground state of the diagonal oscillator picks up phase e^{-i/2}.
        cvector ground = cvector::Zero(30);
        ground(0) = 1.0;
        const cx phase = ground.dot(u.entries * ground);
        CHECK(std::abs(phase - std::exp(cx(0.0, -0.5))) < 1e-12);
    }

    TEST_CASE("product sequence applies element 0 first (rightmost)") {
        const oscillator_fixture f;
        const double eps = 0.3;
        const op_matrix t = trotter_product({f.p, f.q}, eps);
        const matrix manual =
            exact_evolution(f.q, eps).entries * exact_evolution(f.p, eps).entries;
        CHECK(max_abs(t.entries - manual) < 1e-10);
    }

    TEST_CASE("projected product: first-order convergence for H = Q^2") {
        const oscillator_fixture f;
        const std::vector<long> ladder{64, 128, 256, 512, 1024, 2048, 4096};
        const evolution_report rep = chernoff_convergence(f.h_sq, f.e, 1.0, ladder);
        CHECK(rep.order_defined);
        CHECK(rep.fitted_order == doctest::Approx(0.9992).epsilon(0.05));
        for (std::size_t i = 1; i < rep.errors.size(); ++i)
            CHECK(rep.errors[i] < rep.errors[i - 1]);
    }

    TEST_CASE("projected product is exact for an observable generator") {
        const oscillator_fixture f;
        const std::vector<long> ladder{64, 128, 256, 512};
        auto [ok, residual] = is_observable(f.h_osc, f.e);
        CHECK(ok);
        CHECK(residual < 1e-12);
        const evolution_report rep = chernoff_convergence(f.h_osc, f.e, 1.0, ladder);
        for (double err : rep.errors) CHECK(err < 1e-12);
    }

    TEST_CASE("single-slice error is quadratic in T after right compression") {
        const oscillator_fixture f;
        auto error_at = [&](double t) {
            const matrix k = chernoff_product(f.h_sq, f.e, t, 1).entries;
            const matrix r = reduced_evolution(f.h_sq, f.e, t).entries;
            return spectral_norm(f.e.mat.entries * (k - r) * f.e.mat.entries);
        };
        const double ratio = error_at(0.2) / error_at(0.1);
        CHECK(ratio == doctest::Approx(4.0).epsilon(0.03));
    }

    TEST_CASE("confinement: exact on the right, O(eps) on the left") {
        const oscillator_fixture f;
        const matrix one = matrix::Identity(30, 30);
        double prev = 0.0;
        for (long n : {64L, 128L, 256L}) {
            const matrix k = chernoff_product(f.h_sq, f.e, 1.0, n).entries;
            // K ends with the projector, so K(1-E) vanishes identically.
            CHECK(spectral_norm(k * (one - f.e.mat.entries)) < 1e-9);
            // The missing leftmost projector leaves an O(eps) leak.
            const double leak = spectral_norm((one - f.e.mat.entries) * k);
            CHECK(leak > 1e-6);
            if (prev > 0.0) CHECK(prev / leak == doctest::Approx(2.0).epsilon(0.2));
            prev = leak;
        }
    }

    TEST_CASE("ladder validation") {
        const oscillator_fixture f;
        CHECK_THROWS_AS(chernoff_convergence(f.h_sq, f.e, 1.0, {64, 128}), input_error);
        CHECK_THROWS_AS(chernoff_convergence(f.h_sq, f.e, 1.0, {64, 128, 200, 400}),
                        input_error);
    }
}

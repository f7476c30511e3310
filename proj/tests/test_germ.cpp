#include <doctest.h>

#include <cmath>
#include <vector>

#include "projq/errors.hpp"
#include "projq/germ.hpp"

using namespace projq;

TEST_SUITE("germ") {
    TEST_CASE("quotient limit reproduces exp(-(p_bra^2 + p_ket^2)/2)") {
        const std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
        const germ_report rep = germ_limit({1.0, 0.0}, {0.0, 0.0}, schedule);
        CHECK(rep.extrapolated);
        CHECK(std::abs(rep.extrapolant - std::exp(-0.5)) < 1e-4);
        CHECK(rep.values.size() == 5);
        // The raw quotients converge monotonically from below in delta^2.
        CHECK(std::abs(rep.values.back() - std::exp(-0.5)) <
              std::abs(rep.values.front() - std::exp(-0.5)));
    }

    TEST_CASE("limit is independent of both q labels") {
        const std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
        const germ_report center = germ_limit({1.0, 0.0}, {0.0, 0.0}, schedule);
        double spread = 0.0;
        for (double qb : {-0.5, 0.0, 0.5})
            for (double qk : {-0.5, 0.0, 0.5}) {
                const germ_report rep = germ_limit({1.0, qb}, {0.0, qk}, schedule);
                spread = std::max(spread, std::abs(rep.extrapolant - center.extrapolant));
            }
        CHECK(spread < 1e-4);
        // Frozen single-width check: at delta = 1e-3 the q dependence is
        // already below 1e-5 (measured 6.7e-6).
        const cx a = germ_quotient({1.0, -0.5}, {0.0, 0.5}, 1e-3);
        const cx b = germ_quotient({1.0, 0.0}, {0.0, 0.0}, 1e-3);
        CHECK(std::abs(a - b) < 1e-5);
        CHECK(std::abs(a - b) > 1e-8);
    }

    TEST_CASE("other momentum endpoints") {
        const std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
        const germ_report rep = germ_limit({0.7, 0.2}, {-0.4, -0.1}, schedule);
        const double target = std::exp(-(0.49 + 0.16) / 2.0);
        CHECK(std::abs(rep.extrapolant - target) < 1e-4);
    }

    TEST_CASE("schedules must decrease strictly and end small") {
        CHECK_THROWS_AS(germ_limit({1.0, 0.0}, {0.0, 0.0}, {}), input_error);
        CHECK_THROWS_AS(germ_limit({1.0, 0.0}, {0.0, 0.0}, {1e-4, 1e-4}), input_error);
        CHECK_THROWS_AS(germ_limit({1.0, 0.0}, {0.0, 0.0}, {1e-2, 1e-3}), input_error);
    }
}

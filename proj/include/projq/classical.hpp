#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "projq/config.hpp"
#include "projq/poly.hpp"

namespace projq {

// Hamiltonian plus constraints over a shared phase space; members are
// promoted to the common dof at construction.
struct constraint_system {
    phase_polynomial h;
    std::vector<phase_polynomial> phis;
    int dof = 0;   // J
    int count = 0; // A

    constraint_system(phase_polynomial hamiltonian, std::vector<phase_polynomial> constraints);
};

// Newton projection of `seeds` random starting points onto {phi_alpha = 0};
// every returned point satisfies max |phi_alpha| <= tol. More than half the
// seeds failing to converge raises surface_error.
std::vector<phase_point> surface_samples(const std::vector<phase_polynomial>& phis,
                                         int seeds, double tol = 1e-10,
                                         std::uint64_t rng_seed = 12345);

// B_ab = {phi_a, phi_b} evaluated at the point; exactly antisymmetric.
rmatrix bracket_matrix(const std::vector<phase_polynomial>& phis, const phase_point& x);

enum class constraint_verdict {
    first_class_closed,
    first_class_open,
    second_class,
    mixed,
    inconclusive,
};

const char* verdict_name(constraint_verdict v);

struct classification_report {
    constraint_verdict verdict = constraint_verdict::inconclusive;
    rmatrix on_surface_bracket_residuals;         // A x A, max |{phi_a,phi_b}| over samples
    double bracket_matrix_min_singular_value = 0; // min over samples
    std::vector<double> h_bracket_residuals;      // max |{phi_a,H}| over samples
    int sample_count = 0;
    double tol_first = 0.0;
    double tol_second = 0.0;
    // The constraint brackets vanish on the surface but some {phi,H} does
    // not: time evolution leaves the surface and a further constraint is
    // needed. Reported, not automated.
    bool secondary_constraint_suspected = false;
};

// Samples the constraint surface and sorts the system into
//   first-class   all {phi,phi} and {phi,H} vanish on-surface (<= tol_first);
//                 closed when {phi_a,phi_b} - c_ab^g phi_g == 0 holds exactly
//                 as polynomials for best-fit constants c, open otherwise;
//   second-class  min singular value of {phi,phi} >= tol_second at every sample;
//   mixed         every sample shows both a near-kernel and an invertible part;
//   inconclusive  anything else.
// Constraints are rescaled to unit max coefficient internally, so the verdict
// ignores rescaling of any phi by a nonzero constant.
classification_report classify(const constraint_system& system, int samples,
                               double tol_first = 1e-8, double tol_second = 1e-6,
                               const tolerances& tol = {}, std::uint64_t rng_seed = 12345);

// lambda = -B^{-1} {phi,H} at the point, the unique multipliers that keep a
// second-class surface stationary there; requires min singular value of B
// >= 1e-10 and verifies the phi-dot residual afterwards.
std::vector<double> solve_multipliers(const constraint_system& system, const phase_point& x,
                                      const tolerances& tol = {});

struct multiplier_source {
    enum class kind { automatic, scheduled };
    kind mode = kind::automatic;
    std::function<std::vector<double>(double)> schedule;

    // Re-solves for lambda at every integrator stage point; each solve
    // requires the bracket matrix to be invertible there.
    static multiplier_source auto_second_class();
    static multiplier_source scheduled(std::function<std::vector<double>(double)> fn);
};

struct trajectory {
    std::vector<phase_point> points; // steps+1 entries, starting at x0
    std::vector<double> drift;       // max |phi_alpha| after each step
};

// Classical RK4 for qdot_j = dH/dp_j + lambda^a dphi_a/dp_j,
// pdot_j = -dH/dq^j - lambda^a dphi_a/dq^j. The start must sit on the
// surface within 1e-8; a drift beyond tol.drift_explosion aborts with
// step_size_error.
trajectory integrate_constrained(const constraint_system& system,
                                 const multiplier_source& source, const phase_point& x0,
                                 double dt, long steps, const tolerances& tol = {});

// Worst coefficient residual of the antisymmetry, Leibniz, and Jacobi
// identities on the triple (f, g, h). Exactly zero when all coefficients are
// small dyadic rationals, since every intermediate stays exactly
// representable.
double bracket_identity_residual(const phase_polynomial& f, const phase_polynomial& g,
                                 const phase_polynomial& h);

// Sparse random polynomial with dyadic coefficients in [-2, 2] (never all
// zero), at most `monomials` terms, total degree <= degree.
phase_polynomial random_sparse_polynomial(std::mt19937_64& rng, int dof, int degree,
                                          int monomials);

} // namespace projq

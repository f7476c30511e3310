#pragma once

#include <utility>
#include <vector>

#include "projq/config.hpp"
#include "projq/operators.hpp"
#include "projq/quadrature.hpp"

namespace projq {

// Ordered list of self-adjoint constraint operators on one space.
struct constraint_set {
    hilbert_space space;
    std::vector<op_matrix> phis;

    constraint_set(hilbert_space sp, std::vector<op_matrix> ops,
                   double hermiticity_tol = 1e-12);
    int count() const { return static_cast<int>(phis.size()); }
};

op_matrix sum_of_squares(const constraint_set& c);

struct delta_policy {
    enum class kind { gap_midpoint, fixed };
    kind mode = kind::gap_midpoint;
    double value = 0.0;

    static delta_policy gap_midpoint() { return {}; }
    static delta_policy fixed(double v) { return {kind::fixed, v}; }
};

// Midpoint between the minimum eigenvalue cluster and the next distinct one
// (clusters merged at relative gap `cluster_rel_gap`); throws when the
// spectrum has no gap above its minimum cluster.
double choose_delta(const op_matrix& x, delta_policy policy, double cluster_rel_gap = 1e-6);

// Spectral projector onto { lambda <= delta_sq } with its retained eigenpairs.
struct projector {
    op_matrix mat;
    double delta_sq = 0.0;
    std::vector<eigenpair> retained;
    int rank = 0;
};

projector spectral_projector(const op_matrix& x, double delta_sq, const tolerances& tol = {});

// Symmetric quadrature over gamma in [-gamma_max, gamma_max]; `nodes` is the
// per-panel point count, panel count follows the integrand's phase budget.
struct gamma_quadrature {
    double gamma_max = 50.0;
    int nodes = 32;
    quad_kind rule = quad_kind::tanh_sinh;
};

// Quadrature of exp(i gamma eps X) sin(gamma eps delta^2)/(pi gamma): a
// Dirichlet smoothing of the spectral projector. Eigenvalues within the
// kernel's resolution band around delta^2 land near 1/2 and are reported in
// `boundary_flags` rather than silently projected.
struct gamma_projector_result {
    op_matrix mat;
    std::vector<double> boundary_flags;
    double resolution_band = 0.0; // pi / (gamma_max * eps)
};

gamma_projector_result gamma_integral_projector(const op_matrix& x, double delta_sq,
                                                const gamma_quadrature& quad, double eps_eff,
                                                int threads = 1);

// (commutes, residual): residual = ||OE - EO|| in spectral norm.
std::pair<bool, double> is_observable(const op_matrix& o, const projector& e,
                                      double tol = 1e-9);

// Orthonormal basis of range(E); throws when the rank is zero.
std::vector<state_vector> physical_basis(const projector& e);

} // namespace projq

#pragma once

#include <vector>

#include "projq/config.hpp"
#include "projq/dynamics.hpp"
#include "projq/projection.hpp"

namespace projq {

// Uniform square grid over [-R, R]^2 with trapezoidal cell weights
// (half at edges, quarter at corners), so the weights sum to (2R)^2.
struct phase_grid {
    double radius = 0.0;
    double spacing = 0.0;
    std::vector<coherent_label> nodes;
    std::vector<double> weights;

    static phase_grid square(double radius, double spacing);
    std::size_t size() const { return nodes.size(); }
};

struct lattice_result {
    cx value{};
    long slices = 0;
    double grid_radius = 0.0;
    double grid_spacing = 0.0;
    cx reference{};
    double deviation = 0.0;
    // Set when the grid's resolution residual exceeds the requested lattice
    // tolerance, i.e. quadrature error dominates whatever is measured.
    bool quadrature_limited = false;
};

// || sum_i w_i |z_i><z_i| / (2 pi) - 1 || compressed to occupations
// n <= probe_level.
double resolution_residual(const hilbert_space& space, const phase_grid& grid,
                           int probe_level, const tolerances& tol = {});

// N-slice time lattice with per-step factor <z'|1 - i eps H|z> assembled on
// the grid; evaluated as a product of transfer maps (associativity makes
// this exactly the nested grid sum). Reference: <z_to| exp(-iHT) |z_from>.
lattice_result lattice_propagator(const op_matrix& h, coherent_label to,
                                  coherent_label from, double t, long n,
                                  const phase_grid& grid, const tolerances& tol = {});

// Same lattice with the per-step factor <z'|(1 - i eps H) E_Gamma|z>, where
// E_Gamma is the gamma-quadrature projector for sum(Phi^2) at delta^2.
// Reference: <z_to| E exp(-i(EHE)T) E |z_from> with the sharp projector E.
lattice_result constrained_lattice_propagator(const op_matrix& h, const constraint_set& c,
                                              double delta_sq, coherent_label to,
                                              coherent_label from, double t, long n,
                                              const phase_grid& grid,
                                              const gamma_quadrature& quad,
                                              const tolerances& tol = {}, int threads = 1);

// Regularized Fresnel quadrature of the one-step multiplier average
//
//   int (1 - i a l phi - a^2 l^2 phi^2 / 2) e^{-i a l^2/(4 gamma)} e^{-eta l^2} dl
//   ------------------------------------------------------------------------------
//   int e^{-i a l^2/(4 gamma)} e^{-eta l^2} dl
//
// self-normalized on shared nodes, so phi = 0 gives exactly 1. As eta -> 0
// and lambda_max -> infinity the value tends to 1 + i gamma a phi^2, which is
// exp(i gamma a phi^2) + O(a^2).
cx lambda_average_step(double phi_eigenvalue, double gamma, double a, double eta,
                       double lambda_max);

// Drives lambda_average_step over the dimensionless damping ladder
// eta = eta_tilde * a/(4 gamma), eta_tilde in {1e-2, 1e-3, 1e-4}, with
// lambda_max matched to each rung, and extrapolates quadratically to
// eta_tilde = 0.
struct lambda_average_report {
    std::vector<double> eta_ladder;    // the dimensionless eta_tilde values
    std::vector<cx> values;
    cx extrapolant{};
};
lambda_average_report lambda_average_extrapolated(double phi_eigenvalue, double gamma,
                                                  double a,
                                                  std::vector<double> eta_ladder = {
                                                      1e-2, 1e-3, 1e-4});

// Measures why dropping the quadratic constraint term does not work: per
// eigenvalue lambda of sum(Phi^2), the exact multiplier averages of the
// second- and first-order expansions are 1 + i eps gamma lambda and 1, whose
// defects against e^{i eps gamma lambda} scale as O(eps^2) and O(eps). The
// defect is measured on the physical branch: eigenvalues of sum(phi^2) below
// delta^2, where the strength integral concentrates its weight.
struct insufficiency_report {
    std::vector<double> eps_ladder;
    std::vector<double> first_order_defect;
    std::vector<double> second_order_defect;
    double gamma = 0.0;
    double first_order_slope = 0.0;
    double second_order_slope = 0.0;
    bool exact = false; // physical-branch phases vanish; both variants exact
};

insufficiency_report first_order_insufficiency_demo(const constraint_set& c, double delta_sq,
                                                    const std::vector<double>& eps_ladder,
                                                    double gamma = 0.7);

} // namespace projq

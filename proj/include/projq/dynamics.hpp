#pragma once

#include <vector>

#include "projq/config.hpp"
#include "projq/projection.hpp"

namespace projq {

// exp(-iHT) via the spectral decomposition; unitary up to round-off.
op_matrix exact_evolution(const op_matrix& h, double t);

// exp(-i eps H_N) ... exp(-i eps H_1): element 0 of the list acts first
// (rightmost factor), the latest generator is leftmost.
op_matrix trotter_product(const std::vector<op_matrix>& h_list, double eps);

// E exp(-i (EHE) T) E; unitary on range(E).
op_matrix reduced_evolution(const op_matrix& h, const projector& e, double t);

// (exp(-i eps H) E)^N with eps = T/N: the rightmost factor is E, the leftmost
// exp(-i eps H). At finite N the missing leftmost E is part of the measured
// convergence error.
op_matrix chernoff_product(const op_matrix& h, const projector& e, double t, long n);

struct evolution_report {
    std::vector<long> n_values;
    std::vector<double> errors;  // spectral-norm distance to reduced_evolution
    double fitted_order = 0.0;   // log-log regression in 1/N
    bool order_defined = false;  // false when every error sits at round-off
};

// Ladder must contain >= 4 doubling N values.
evolution_report chernoff_convergence(const op_matrix& h, const projector& e, double t,
                                      const std::vector<long>& ladder);

} // namespace projq

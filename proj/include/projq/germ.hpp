#pragma once

#include <vector>

#include "projq/operators.hpp"

namespace projq {

// Continuous-spectrum constraint P with a shrinking window |k| <= delta,
// worked in the analytic momentum representation (truncation would
// discretize the spectrum and falsify the limit):
//
//   numerator   = int_{-delta}^{delta} exp[-(k-p")^2/2 + ik(q"-q') - (k-p')^2/2] dk
//   denominator = int_{-delta}^{delta} exp[-k^2] dk
//
// As delta -> 0 the quotient tends to exp[-(p"^2 + p'^2)/2], independent of
// q" and q'.
cx germ_quotient(coherent_label bra, coherent_label ket, double delta);

struct germ_report {
    std::vector<double> schedule;
    std::vector<cx> values;
    cx extrapolant{};
    double error_estimate = 0.0; // +inf when the schedule has a single entry
    bool extrapolated = false;
};

// Richardson (Neville in delta^2) extrapolation of germ_quotient along a
// strictly decreasing schedule ending at or below 1e-4.
germ_report germ_limit(coherent_label bra, coherent_label ket,
                       const std::vector<double>& schedule);

} // namespace projq

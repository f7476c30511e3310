#pragma once

#include <cstdint>

namespace projq {

inline constexpr const char* version_string = "0.1.0";

// Every tolerance used anywhere in the library, with its default.
// The scenario file may override any field; nothing else is hidden.
struct tolerances {
    double hermiticity = 1e-12;        // max-abs ||M - M^dag|| accepted at construction
    double unitarity = 1e-10;          // spectral-norm deviation from unitarity
    double projector = 1e-10;          // idempotence / hermiticity of projectors
    double rank_trace = 1e-8;          // |rank - trace| for projectors
    double eigen_residual = 1e-10;     // ||Mv - lambda v|| per eigenpair
    double boundary_exclusion = 1e-9;  // minimum |lambda - delta^2|
    double cluster_rel_gap = 1e-6;     // relative gap that merges eigenvalue clusters
    double trust_tail = 1e-10;         // admissible truncated-tail weight of a coherent label
    double grid_mean_fraction = 1.0;   // grid nodes allowed while (p^2+q^2)/2 <= fraction * D
    double state_norm = 1e-10;         // |norm - 1| for constructed states
    double observable = 1e-9;          // commutator residual below which O counts as observable
    double gamma_entry = 2e-3;         // per-eigenvalue error of the gamma-integral projector
    double overlap_formula = 1e-7;     // numeric overlap vs closed form
    double metric_identity = 1e-5;     // finite-difference metric vs identity
    double metric_step = 1e-4;         // default finite-difference step
    double resolution = 1e-6;          // resolution-of-unity residual at the reference grid
    double lattice_deviation = 5e-3;   // lattice propagator vs operator oracle
    double classify_first = 1e-8;      // on-surface residual for first-class verdicts
    double classify_second = 1e-6;     // min singular value for second-class verdicts
    double surface = 1e-10;            // max |phi| accepted for surface samples
    double multiplier_residual = 1e-9; // phi-dot residual after solving multipliers
    double drift_explosion = 1e-3;     // constraint drift that aborts integration
    double structure_fit = 1e-10;      // exact-polynomial residual for closed-vs-open
};

// Process-wide execution options resolved by the command-line driver.
struct run_options {
    int threads = 1;
    std::uint64_t seed = 12345;
};

} // namespace projq

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "projq/config.hpp"
#include "projq/operators.hpp"

namespace projq {

// Annihilation/creation pair on a truncated Fock space. The truncation shows
// up only in the top corner: [A, A+] = 1 - D |D-1><D-1|.
std::pair<op_matrix, op_matrix> ladder_pair(const hilbert_space& space);

// (P, Q) with Q = (A + A+)/sqrt(2), P = (A - A+)/(i sqrt(2)); hbar = 1.
// Q + iP annihilates the ground state exactly at every cutoff.
std::pair<op_matrix, op_matrix> canonical_pair(const hilbert_space& space);

// Weight of the exact coherent state beyond occupation D-1 (a Poisson tail
// with mean (p^2+q^2)/2). This is the norm deficit incurred by truncation.
double coherent_tail(int cutoff, double label_norm_sq_half);

// Largest label norm sqrt(p^2+q^2) whose truncated tail stays below `tail`.
double trust_radius(int cutoff, double tail = 1e-10);

// exp(-iqP) exp(ipQ) |0>, built from the truncated operators themselves so
// that overlap and Weyl identities remain genuine checks.
state_vector coherent_state(const hilbert_space& space, coherent_label label,
                            const tolerances& tol = {});

// Column k is the coherent state for labels[k]. `enforce_point_trust` selects
// the strict per-label radius; grid assembly uses the relaxed mean-based
// policy and passes false.
matrix coherent_batch(const hilbert_space& space, const std::vector<coherent_label>& labels,
                      bool enforce_point_trust, const tolerances& tol = {});

// <a|b>; conjugate-symmetric by construction.
cx overlap(const state_vector& a, const state_vector& b);

// Closed form for <bra|ket> between ideal coherent states:
// exp{ i (p"+p')(q"-q')/2 - [(p"-p')^2 + (q"-q')^2]/4 }.
cx coherent_overlap_formula(coherent_label bra, coherent_label ket);

// <p,q| H |p,q>. Real within 1e-10 when H is hermitian.
cx lower_symbol(const op_matrix& h, coherent_label label, const tolerances& tol = {});

// Spectral-norm residual of e^{ipQ} e^{-iqP} - e^{ipq} e^{-iqP} e^{ipQ}
// compressed to occupations n <= window. The default window is
// D - ceil(4(p^2+q^2)); displaced tails reach into that window, so
// cross-cutoff comparisons should fix the window explicitly.
double weyl_residual(const hilbert_space& space, double p, double q,
                     std::optional<int> window = std::nullopt);

// Central finite-difference estimate of the metric
// 2[ ||d|p,q>||^2 - |<p,q|d|p,q>|^2 ]; identity for ideal coherent states.
Eigen::Matrix2d fubini_study_metric(const hilbert_space& space, coherent_label label,
                                    double step = 1e-4, const tolerances& tol = {});

} // namespace projq

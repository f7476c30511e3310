#pragma once

#include "projq/fock.hpp"
#include "projq/poly.hpp"

namespace projq {

// Maps a single-dof polynomial to a truncated-oscillator operator, monomial
// by monomial with the symmetric ordering (P^a Q^b + Q^b P^a)/2, which keeps
// the result hermitian. Requires a Fock space; degrees of freedom beyond the
// first must not appear.
op_matrix quantize_polynomial(const hilbert_space& space, const phase_polynomial& poly);

} // namespace projq

#pragma once

#include <tuple>

#include "projq/operators.hpp"

namespace projq {

// Standard spin matrices for one multiplet j (hbar = 1), basis ordered
// m = j, j-1, ..., -j.
std::tuple<matrix, matrix, matrix> spin_matrices(double j);

// Block-diagonal generators (J1, J2, J3) on a spin direct sum; exact algebra
// [J1, J2] = i J3 and cyclic.
std::tuple<op_matrix, op_matrix, op_matrix> rotation_generators(const hilbert_space& space);

// Total-spin generators J_k x 1 + 1 x J_k for two spin-j particles on the
// tensor-product space.
std::tuple<op_matrix, op_matrix, op_matrix> coupled_pair_generators(double j);

// J1^2 + J2^2 + J3^2 for any generator triple.
op_matrix casimir(const std::tuple<op_matrix, op_matrix, op_matrix>& generators);

} // namespace projq

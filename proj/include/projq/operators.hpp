#pragma once

#include <vector>

#include "projq/linalg.hpp"
#include "projq/spaces.hpp"

namespace projq {

// Dense operator tied to its space. When `hermitian` is asserted the entries
// are verified against it at construction (max-abs tolerance).
struct op_matrix {
    hilbert_space space;
    matrix entries;
    bool hermitian = false;

    op_matrix() = default;
    op_matrix(hilbert_space sp, matrix m, bool hermitian_flag = false,
              double hermiticity_tol = 1e-12);

    int dim() const { return space.dim; }
};

struct state_vector {
    hilbert_space space;
    cvector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

struct coherent_label {
    double p = 0.0;
    double q = 0.0;
};

struct eigenpair {
    double value;
    state_vector vec;
};

op_matrix identity_op(const hilbert_space& space);

// Kronecker product; the result lives on the tensor-product space.
op_matrix tensor_product(const op_matrix& a, const op_matrix& b);

// Ascending eigenpairs of a hermitian operator; each pair satisfies
// ||Mv - lambda v|| within the eigen_residual tolerance.
std::vector<eigenpair> hermitian_spectrum(const op_matrix& m, double residual_tol = 1e-10);

void require_same_space(const hilbert_space& a, const hilbert_space& b, const char* what);

} // namespace projq

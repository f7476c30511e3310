#include "projq/spin.hpp"

#include <cmath>

#include "projq/errors.hpp"

namespace projq {

std::tuple<matrix, matrix, matrix> spin_matrices(double j) {
    const int m = static_cast<int>(std::round(2.0 * j)) + 1;
    matrix jplus = matrix::Zero(m, m);
    matrix j3 = matrix::Zero(m, m);
    for (int r = 0; r < m; ++r) {
        const double mz = j - r;
        j3(r, r) = mz;
        if (r > 0) jplus(r - 1, r) = std::sqrt(j * (j + 1.0) - (mz + 1.0) * mz);
    }
    const matrix jminus = jplus.adjoint();
    matrix j1 = (jplus + jminus) / 2.0;
    matrix j2 = (jplus - jminus) / (2.0 * imag_unit);
    return {std::move(j1), std::move(j2), std::move(j3)};
}

std::tuple<op_matrix, op_matrix, op_matrix> rotation_generators(const hilbert_space& space) {
    if (space.kind != space_kind::spin_sum)
        throw kind_error("rotation_generators requires a spin-sum space");
    matrix j1 = matrix::Zero(space.dim, space.dim);
    matrix j2 = j1, j3 = j1;
    int offset = 0;
    for (double j : space.spins) {
        auto [b1, b2, b3] = spin_matrices(j);
        const int m = static_cast<int>(b1.rows());
        j1.block(offset, offset, m, m) = b1;
        j2.block(offset, offset, m, m) = b2;
        j3.block(offset, offset, m, m) = b3;
        offset += m;
    }
    return {op_matrix(space, std::move(j1), true), op_matrix(space, std::move(j2), true),
            op_matrix(space, std::move(j3), true)};
}

std::tuple<op_matrix, op_matrix, op_matrix> coupled_pair_generators(double j) {
    const hilbert_space one = hilbert_space::spin_sum({j});
    auto [j1, j2, j3] = rotation_generators(one);
    const op_matrix eye = identity_op(one);
    auto lift = [&](const op_matrix& g) {
        op_matrix left = tensor_product(g, eye);
        const op_matrix right = tensor_product(eye, g);
        left.entries += right.entries;
        return left;
    };
    return {lift(j1), lift(j2), lift(j3)};
}

op_matrix casimir(const std::tuple<op_matrix, op_matrix, op_matrix>& generators) {
    const auto& [j1, j2, j3] = generators;
    matrix total = j1.entries * j1.entries + j2.entries * j2.entries + j3.entries * j3.entries;
    return {j1.space, std::move(total), true};
}

} // namespace projq

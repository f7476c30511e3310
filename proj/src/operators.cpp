#include "projq/operators.hpp"

#include <sstream>

#include "projq/errors.hpp"

namespace projq {

op_matrix::op_matrix(hilbert_space sp, matrix m, bool hermitian_flag, double hermiticity_tol)
    : space(std::move(sp)), entries(std::move(m)), hermitian(hermitian_flag) {
    if (entries.rows() != entries.cols() || entries.rows() != space.dim)
        throw dimension_error("operator entries do not match the space dimension");
    if (hermitian && !hermitian_within(entries, hermiticity_tol))
        throw validation_error("operator asserted hermitian violates the tolerance");
}

op_matrix identity_op(const hilbert_space& space) {
    return {space, matrix::Identity(space.dim, space.dim), true};
}

op_matrix tensor_product(const op_matrix& a, const op_matrix& b) {
    const int ra = a.dim(), rb = b.dim();
    matrix out(ra * rb, ra * rb);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ra; ++j)
            out.block(i * rb, j * rb, rb, rb) = a.entries(i, j) * b.entries;
    return {hilbert_space::product(a.space, b.space), std::move(out),
            a.hermitian && b.hermitian};
}

std::vector<eigenpair> hermitian_spectrum(const op_matrix& m, double residual_tol) {
    if (!m.hermitian)
        throw validation_error("hermitian_spectrum requires a hermitian-flagged operator");
    const eigensystem es = hermitian_eig(m.entries);
    std::vector<eigenpair> out;
    out.reserve(m.dim());
    for (int k = 0; k < m.dim(); ++k) {
        const cvector v = es.vectors.col(k);
        const double residual = (m.entries * v - es.values(k) * v).norm();
        if (residual > residual_tol) {
            std::ostringstream msg;
            msg << "eigenpair residual " << residual << " exceeds " << residual_tol;
            throw error(msg.str());
        }
        out.push_back({es.values(k), state_vector{m.space, v}});
    }
    return out;
}

void require_same_space(const hilbert_space& a, const hilbert_space& b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": spaces differ (" << a.describe() << " vs " << b.describe() << ")";
        throw dimension_error(msg.str());
    }
}

} // namespace projq

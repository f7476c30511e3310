#include "projq/quantize.hpp"

#include "projq/errors.hpp"

namespace projq {

op_matrix quantize_polynomial(const hilbert_space& space, const phase_polynomial& poly) {
    if (space.kind != space_kind::fock)
        throw kind_error("quantize_polynomial requires a Fock space");
    for (const auto& [key, coeff] : poly.terms)
        for (std::size_t slot = 0; slot < key.size(); ++slot)
            if (key[slot] != 0 && slot != 0 && slot != static_cast<std::size_t>(poly.dof))
                throw input_error(
                    "quantize_polynomial: only p1/q1 may appear in a quantized polynomial");

    const auto [p, q] = canonical_pair(space);
    const int d = space.dim;
    matrix out = matrix::Zero(d, d);
    for (const auto& [key, coeff] : poly.terms) {
        const int a = key.empty() ? 0 : key[0];
        const int b = poly.dof > 0 ? key[static_cast<std::size_t>(poly.dof)] : 0;
        matrix pa = matrix::Identity(d, d);
        for (int e = 0; e < a; ++e) pa = pa * p.entries;
        matrix qb = matrix::Identity(d, d);
        for (int e = 0; e < b; ++e) qb = qb * q.entries;
        out += coeff * 0.5 * (pa * qb + qb * pa);
    }
    return op_matrix(space, out, true, 1e-10);
}

} // namespace projq

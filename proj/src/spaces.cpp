#include "projq/spaces.hpp"

#include <cmath>
#include <sstream>

#include "projq/errors.hpp"

namespace projq {

hilbert_space hilbert_space::fock(int cutoff) {
    if (cutoff < 2) throw validation_error("fock space needs cutoff >= 2");
    hilbert_space s;
    s.kind = space_kind::fock;
    s.cutoff = cutoff;
    s.dim = cutoff;
    return s;
}

hilbert_space hilbert_space::spin_sum(std::vector<double> js) {
    if (js.empty()) throw validation_error("spin sum needs at least one spin");
    int dim = 0;
    for (double j : js) {
        const double twoj = 2.0 * j;
        if (j < 0.0 || std::abs(twoj - std::round(twoj)) > 1e-12)
            throw validation_error("spins must be nonnegative half-integers");
        dim += static_cast<int>(std::round(twoj)) + 1;
    }
    hilbert_space s;
    s.kind = space_kind::spin_sum;
    s.spins = std::move(js);
    s.dim = dim;
    return s;
}

hilbert_space hilbert_space::product(const hilbert_space& a, const hilbert_space& b) {
    hilbert_space s;
    s.kind = space_kind::product;
    // Flatten so nested products keep a plain factor list.
    if (a.kind == space_kind::product)
        s.factor_dims = a.factor_dims;
    else
        s.factor_dims.push_back(a.dim);
    if (b.kind == space_kind::product)
        s.factor_dims.insert(s.factor_dims.end(), b.factor_dims.begin(), b.factor_dims.end());
    else
        s.factor_dims.push_back(b.dim);
    s.dim = a.dim * b.dim;
    return s;
}

bool hilbert_space::operator==(const hilbert_space& other) const {
    return kind == other.kind && dim == other.dim && cutoff == other.cutoff &&
           spins == other.spins && factor_dims == other.factor_dims;
}

std::string hilbert_space::describe() const {
    std::ostringstream out;
    switch (kind) {
    case space_kind::fock:
        out << "fock(" << cutoff << ")";
        break;
    case space_kind::spin_sum:
        out << "spins(";
        for (std::size_t i = 0; i < spins.size(); ++i) out << (i ? "," : "") << spins[i];
        out << ")";
        break;
    case space_kind::product:
        out << "product(";
        for (std::size_t i = 0; i < factor_dims.size(); ++i)
            out << (i ? "x" : "") << factor_dims[i];
        out << ")";
        break;
    }
    return out.str();
}

} // namespace projq

#pragma once

#include <string>
#include <vector>

namespace projq {

enum class space_kind { fock, spin_sum, product };

// A finite-dimensional state space: a truncated Fock ladder, a direct sum of
// spin multiplets, or a tensor product of such factors.
struct hilbert_space {
    space_kind kind = space_kind::fock;
    int cutoff = 0;                 // fock: dimension D, occupation numbers 0..D-1
    std::vector<double> spins;      // spin_sum: the j values, each a half-integer
    std::vector<int> factor_dims;   // product: dimensions of the factors in order
    int dim = 0;

    static hilbert_space fock(int cutoff);
    static hilbert_space spin_sum(std::vector<double> js);
    static hilbert_space product(const hilbert_space& a, const hilbert_space& b);

    bool operator==(const hilbert_space& other) const;
    bool operator!=(const hilbert_space& other) const { return !(*this == other); }

    std::string describe() const;
};

} // namespace projq

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "projq/config.hpp"
#include "projq/operators.hpp"
#include "projq/projection.hpp"

namespace projq {

// One refinement rung of the constrained lattice schedule: grid spacing h,
// slice count N, and the soft-projector strength given either directly or as
// gamma_max * eps in units of pi.
struct lattice_rung {
    double h = 0.0;
    long n = 0;
    std::optional<double> gamma_eps_over_pi;
    std::optional<double> gamma_max;
};

struct lattice_block {
    double radius = 6.0;
    double spacing = 0.25;
    double gamma_max = 50.0;
    int gamma_nodes = 32;
    quad_kind rule = quad_kind::tanh_sinh;
    double t = 0.5;
    long n = 64;
    int probe_level = 12;
    coherent_label to{};
    coherent_label from{};
    std::vector<lattice_rung> schedule;
};

struct evolution_block {
    double t = 1.0;
    std::vector<long> n_ladder;
};

struct classical_block {
    int seeds = 40;
    double dt = 0.05;
    long steps = 200;
};

struct germ_block {
    double p_bra = 1.0;
    double p_ket = 0.0;
    std::vector<double> q_grid{-0.5, 0.0, 0.5};
    std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
};

// A fully validated experiment description. Unknown JSON fields are rejected
// and every numeric field is range-checked at load time. `hash` fingerprints
// the canonical (sorted-key, whitespace-free) form of the file.
struct scenario {
    int schema = 1;
    std::string name;

    std::string space_kind; // "fock" | "spin"
    int cutoff = 0;
    std::vector<double> spins;

    std::string hamiltonian; // polynomial text or preset name
    std::vector<std::string> constraints;
    delta_policy delta;

    std::optional<evolution_block> evolution;
    std::optional<lattice_block> lattice;
    std::optional<classical_block> classical;
    std::optional<germ_block> germ;

    tolerances tol;
    std::uint64_t seed = 12345;
    std::string hash;
};

scenario load_scenario(const std::string& path);
scenario parse_scenario_text(const std::string& text);

std::uint64_t fnv1a(const std::string& bytes);

} // namespace projq

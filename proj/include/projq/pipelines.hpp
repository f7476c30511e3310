#pragma once

#include <optional>
#include <string>
#include <vector>

#include "projq/classical.hpp"
#include "projq/scenario.hpp"
#include "projq/spaces.hpp"

namespace projq {

// Builders shared by the command pipelines and the verification suite.
// Hamiltonian and constraint entries are either polynomial texts (quantized
// with symmetric ordering on Fock spaces) or the named presets
// "P-and-Q", "P-only-germ", "rotation-generators", "J3".
hilbert_space scenario_space(const scenario& sc);
op_matrix scenario_hamiltonian(const scenario& sc, const hilbert_space& space);
std::vector<op_matrix> scenario_constraint_ops(const scenario& sc, const hilbert_space& space);

// Classical counterpart of the scenario's algebraic content: presets map to
// their classical symbols ({p1,q1}, {p1}, the angular momenta L_k, and
// L3 = q1*p2 - q2*p1); texts are parsed directly.
constraint_system scenario_classical_system(const scenario& sc);

// Loads the scenario, runs one of verify|project|evolve|pathint|classify,
// and writes report.json, CSV tables, plotdata_*.json, and timings.json into
// out_dir. Partial outputs are removed on failure. Returns the process exit
// code: 0 pass, 1 runtime error, 2 validation or diagnostic failure.
int run_command(const std::string& command, const std::string& scenario_path,
                const std::string& out_dir, std::optional<std::uint64_t> seed_override,
                std::optional<int> threads_override);

} // namespace projq

// Command-line driver: runs one scenario file through a named pipeline and
// writes its artifacts (CSV tables, plot data, report.json) to a directory.
#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "projq/config.hpp"
#include "projq/pipelines.hpp"

namespace {

struct common_args {
    std::string scenario_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

void attach(CLI::App* cmd, common_args& args) {
    cmd->add_option("scenario", args.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (default: out)");
    cmd->add_option("--seed", args.seed, "Override the scenario seed");
    cmd->add_option("--threads", args.threads,
                    "Worker threads (default: PROJQ_THREADS or 1)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-quantization toolkit: projection, reduced dynamics, "
                 "phase-space lattices, and classical constraint analysis"};
    app.set_version_flag("--version", projq::version_string);
    app.require_subcommand(1);

    common_args args;
    const char* const commands[] = {"verify", "project", "evolve", "pathint", "classify"};
    const char* const about[] = {
        "Run the scenario's self-consistency checks and worked examples",
        "Build the physical-subspace projector and its strength-resolved form",
        "Measure the convergence of the projected evolution product",
        "Evaluate the phase-space lattice propagator and multiplier averages",
        "Classify the classical constraint set and integrate the flow",
    };
    for (int i = 0; i < 5; ++i) attach(app.add_subcommand(commands[i], about[i]), args);

    CLI11_PARSE(app, argc, argv);

    const std::string chosen = app.get_subcommands().front()->get_name();
    return projq::run_command(chosen, args.scenario_path, args.out_dir, args.seed,
                              args.threads);
}

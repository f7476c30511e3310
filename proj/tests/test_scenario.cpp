#include <doctest.h>

#include <string>
#include <vector>

#include "projq/errors.hpp"
#include "projq/pipelines.hpp"
#include "projq/scenario.hpp"

using namespace projq;

namespace {

const char* minimal = R"({
  "schema": 1,
  "name": "minimal",
  "space": { "kind": "fock", "cutoff": 16 },
  "hamiltonian": "0.5*p1^2 + 0.5*q1^2"
})";

std::string with_field(const std::string& extra) {
    std::string text = minimal;
    text.erase(text.rfind('}'));
    return text + ",\n" + extra + "\n}";
}

} // namespace

TEST_SUITE("scenario") {
    TEST_CASE("minimal scenario: defaults fill in") {
        const scenario sc = parse_scenario_text(minimal);
        CHECK(sc.name == "minimal");
        CHECK(sc.space_kind == "fock");
        CHECK(sc.cutoff == 16);
        CHECK(sc.constraints.empty());
        CHECK(!sc.evolution);
        CHECK(!sc.lattice);
        CHECK(sc.seed == 12345);
        CHECK(sc.tol.projector == 1e-10);
        CHECK(sc.hash.size() == 16);
        // Hash is a pure function of the canonical content.
        CHECK(sc.hash == parse_scenario_text(minimal).hash);
    }

    TEST_CASE("unknown fields are rejected everywhere") {
        CHECK_THROWS_AS(parse_scenario_text(with_field("\"surprise\": 1")),
                        validation_error);
        CHECK_THROWS_AS(
            parse_scenario_text(with_field("\"delta\": { \"policy\": \"fixed\", "
                                           "\"value\": 1.0, \"bogus\": 2 }")),
            validation_error);
        CHECK_THROWS_AS(
            parse_scenario_text(with_field("\"tolerances\": { \"no_such_knob\": 1e-9 }")),
            validation_error);
    }

    TEST_CASE("every tolerance can be overridden") {
        const scenario sc = parse_scenario_text(with_field(
            "\"tolerances\": { \"projector\": 1e-8, \"lattice_deviation\": 1e-2, "
            "\"classify_second\": 1e-5 }"));
        CHECK(sc.tol.projector == 1e-8);
        CHECK(sc.tol.lattice_deviation == 1e-2);
        CHECK(sc.tol.classify_second == 1e-5);
        CHECK(sc.tol.rank_trace == 1e-8); // untouched default
    }

    TEST_CASE("delta policy validation") {
        const scenario fixed = parse_scenario_text(
            with_field("\"delta\": { \"policy\": \"fixed\", \"value\": 0.25 }"));
        CHECK(fixed.delta.mode == delta_policy::kind::fixed);
        CHECK(fixed.delta.value == 0.25);
        CHECK_THROWS_AS(
            parse_scenario_text(with_field("\"delta\": { \"policy\": \"fixed\" }")),
            validation_error);
        CHECK_THROWS_AS(parse_scenario_text(with_field(
                            "\"delta\": { \"policy\": \"gap-midpoint\", \"value\": 1.0 }")),
                        validation_error);
    }

    TEST_CASE("structural validation") {
        CHECK_THROWS_AS(parse_scenario_text("{ not json"), parse_error);
        CHECK_THROWS_AS(
            parse_scenario_text(with_field("\"evolution\": { \"T\": 1.0, "
                                           "\"N_ladder\": [64, 32] }")),
            validation_error);
        CHECK_THROWS_AS(
            parse_scenario_text(with_field(
                "\"lattice\": { \"R\": 6.0, \"h\": 0.25, \"T\": 0.5, \"N\": 8, "
                "\"schedule\": [ { \"h\": 1.0, \"N\": 4 } ] }")),
            validation_error); // rung needs a strength entry
        std::string bad_name = minimal;
        const std::size_t at = bad_name.find("minimal");
        bad_name.replace(at, 7, "min mal");
        CHECK_THROWS_AS(parse_scenario_text(bad_name), validation_error);
    }

    TEST_CASE("spin spaces") {
        const scenario sc = parse_scenario_text(R"({
          "schema": 1,
          "name": "pair",
          "space": { "kind": "spin", "spins": [0.5, 0.5] },
          "hamiltonian": "J3"
        })");
        CHECK(sc.spins.size() == 2);
        const hilbert_space space = scenario_space(sc);
        CHECK(space.dim == 4);
        CHECK_THROWS_AS(parse_scenario_text(R"({
          "schema": 1,
          "name": "bad",
          "space": { "kind": "spin", "spins": [0.4] },
          "hamiltonian": "J3"
        })"),
                        validation_error);
    }

    TEST_CASE("bundled scenarios all parse") {
        const std::vector<std::string> names = {
            "worked-examples",      "oscillator-project", "spin-pair-project",
            "singlet-evolve",       "oscillator-evolve",  "harmonic-pathint",
            "constrained-pathint",  "germ-quotient",      "classify-second-class",
            "classify-rotations",   "mixed-constraints",  "bad-delta"};
        for (const std::string& name : names) {
            const scenario sc = load_scenario(std::string(PROJQ_SCENARIO_DIR) + "/" + name +
                                              ".json");
            CHECK(sc.name == name);
        }
        CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), input_error);
    }
}

#include "projq/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "projq/errors.hpp"

namespace projq {

using nlohmann::json;

namespace {

std::string where_key(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw validation_error("scenario: " + (where.empty() ? "top level" : where) +
                               " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed)
            if (key == name) {
                known = true;
                break;
            }
        if (!known)
            throw validation_error("scenario: unknown field '" + where_key(where, key) + "'");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw validation_error("scenario: missing field '" + where_key(where, key) + "'");
    return *it;
}

double get_num(const json& obj, const std::string& where, const char* key, double lo,
               double hi) {
    const json& v = require(obj, where, key);
    if (!v.is_number())
        throw validation_error("scenario: '" + where_key(where, key) + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi)
        throw validation_error("scenario: '" + where_key(where, key) + "' out of range [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

long get_int(const json& obj, const std::string& where, const char* key, long lo, long hi) {
    const json& v = require(obj, where, key);
    if (!v.is_number_integer())
        throw validation_error("scenario: '" + where_key(where, key) + "' must be an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
        throw validation_error("scenario: '" + where_key(where, key) + "' out of range [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

std::string get_str(const json& obj, const std::string& where, const char* key) {
    const json& v = require(obj, where, key);
    if (!v.is_string())
        throw validation_error("scenario: '" + where_key(where, key) + "' must be a string");
    return v.get<std::string>();
}

coherent_label parse_label(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw validation_error("scenario: '" + where + "' must be a [p, q] pair");
    const double p = v[0].get<double>();
    const double q = v[1].get<double>();
    if (!std::isfinite(p) || !std::isfinite(q))
        throw validation_error("scenario: '" + where + "' must be finite");
    return {p, q};
}

delta_policy parse_delta(const json& v) {
    check_keys(v, "delta", {"policy", "value"});
    const std::string policy = get_str(v, "delta", "policy");
    if (policy == "gap-midpoint") {
        if (v.contains("value"))
            throw validation_error("scenario: delta.value is only valid with policy 'fixed'");
        return delta_policy::gap_midpoint();
    }
    if (policy == "fixed")
        return delta_policy::fixed(get_num(v, "delta", "value", 1e-300, 1e300));
    throw validation_error("scenario: delta.policy must be 'gap-midpoint' or 'fixed'");
}

evolution_block parse_evolution(const json& v) {
    check_keys(v, "evolution", {"T", "N_ladder"});
    evolution_block out;
    out.t = get_num(v, "evolution", "T", 1e-12, 1e6);
    const json& ladder = require(v, "evolution", "N_ladder");
    if (!ladder.is_array() || ladder.empty())
        throw validation_error("scenario: evolution.N_ladder must be a nonempty array");
    long prev = 0;
    for (const json& n : ladder) {
        if (!n.is_number_integer())
            throw validation_error("scenario: evolution.N_ladder entries must be integers");
        const long value = n.get<long>();
        if (value < 1 || value <= prev)
            throw validation_error(
                "scenario: evolution.N_ladder must be strictly increasing positives");
        out.n_ladder.push_back(value);
        prev = value;
    }
    return out;
}

lattice_rung parse_rung(const json& v, const std::string& where) {
    check_keys(v, where, {"h", "N", "gamma_eps_over_pi", "gamma_max"});
    lattice_rung rung;
    rung.h = get_num(v, where, "h", 1e-12, 1e6);
    rung.n = get_int(v, where, "N", 1, 1000000);
    if (v.contains("gamma_eps_over_pi"))
        rung.gamma_eps_over_pi = get_num(v, where, "gamma_eps_over_pi", 1e-12, 1e9);
    if (v.contains("gamma_max"))
        rung.gamma_max = get_num(v, where, "gamma_max", 1e-12, 1e12);
    if (rung.gamma_eps_over_pi.has_value() == rung.gamma_max.has_value())
        throw validation_error("scenario: '" + where +
                               "' needs exactly one of gamma_eps_over_pi / gamma_max");
    return rung;
}

lattice_block parse_lattice(const json& v) {
    check_keys(v, "lattice",
               {"R", "h", "gamma_max", "gamma_nodes", "rule", "T", "N", "probe_level",
                "endpoints", "schedule"});
    lattice_block out;
    out.radius = get_num(v, "lattice", "R", 1e-12, 1e6);
    out.spacing = get_num(v, "lattice", "h", 1e-12, 1e6);
    if (v.contains("gamma_max")) out.gamma_max = get_num(v, "lattice", "gamma_max", 1e-12, 1e12);
    if (v.contains("gamma_nodes"))
        out.gamma_nodes = static_cast<int>(get_int(v, "lattice", "gamma_nodes", 4, 4096));
    if (v.contains("rule")) {
        const std::string rule = get_str(v, "lattice", "rule");
        if (rule == "tanh-sinh")
            out.rule = quad_kind::tanh_sinh;
        else if (rule == "gauss-legendre")
            out.rule = quad_kind::gauss_legendre;
        else
            throw validation_error(
                "scenario: lattice.rule must be 'tanh-sinh' or 'gauss-legendre'");
    }
    out.t = get_num(v, "lattice", "T", 1e-12, 1e6);
    out.n = get_int(v, "lattice", "N", 1, 100000000);
    if (v.contains("probe_level"))
        out.probe_level = static_cast<int>(get_int(v, "lattice", "probe_level", 0, 100000));
    if (v.contains("endpoints")) {
        const json& e = v["endpoints"];
        check_keys(e, "lattice.endpoints", {"to", "from"});
        out.to = parse_label(require(e, "lattice.endpoints", "to"), "lattice.endpoints.to");
        out.from =
            parse_label(require(e, "lattice.endpoints", "from"), "lattice.endpoints.from");
    }
    if (v.contains("schedule")) {
        const json& sched = v["schedule"];
        if (!sched.is_array())
            throw validation_error("scenario: lattice.schedule must be an array");
        int k = 0;
        for (const json& rung : sched)
            out.schedule.push_back(
                parse_rung(rung, "lattice.schedule[" + std::to_string(k++) + "]"));
    }
    return out;
}

classical_block parse_classical(const json& v) {
    check_keys(v, "classical", {"seeds", "dt", "steps"});
    classical_block out;
    out.seeds = static_cast<int>(get_int(v, "classical", "seeds", 1, 1000000));
    out.dt = get_num(v, "classical", "dt", 1e-12, 1e6);
    out.steps = get_int(v, "classical", "steps", 1, 100000000);
    return out;
}

germ_block parse_germ(const json& v) {
    check_keys(v, "germ", {"p_bra", "p_ket", "q_grid", "schedule"});
    germ_block out;
    out.p_bra = get_num(v, "germ", "p_bra", -1e6, 1e6);
    out.p_ket = get_num(v, "germ", "p_ket", -1e6, 1e6);
    if (v.contains("q_grid")) {
        out.q_grid.clear();
        const json& grid = v["q_grid"];
        if (!grid.is_array() || grid.empty())
            throw validation_error("scenario: germ.q_grid must be a nonempty array");
        for (const json& q : grid) {
            if (!q.is_number())
                throw validation_error("scenario: germ.q_grid entries must be numbers");
            const double x = q.get<double>();
            if (!std::isfinite(x) || std::abs(x) > 1e6)
                throw validation_error("scenario: germ.q_grid entry out of range");
            out.q_grid.push_back(x);
        }
    }
    if (v.contains("schedule")) {
        out.schedule.clear();
        const json& sched = v["schedule"];
        if (!sched.is_array() || sched.empty())
            throw validation_error("scenario: germ.schedule must be a nonempty array");
        for (const json& d : sched) {
            if (!d.is_number())
                throw validation_error("scenario: germ.schedule entries must be numbers");
            const double x = d.get<double>();
            if (!(x > 0.0) || !std::isfinite(x))
                throw validation_error("scenario: germ.schedule entries must be positive");
            out.schedule.push_back(x);
        }
    }
    return out;
}

tolerances parse_tolerances(const json& v) {
    struct field {
        const char* name;
        double tolerances::*member;
    };
    static const field fields[] = {
        {"hermiticity", &tolerances::hermiticity},
        {"unitarity", &tolerances::unitarity},
        {"projector", &tolerances::projector},
        {"rank_trace", &tolerances::rank_trace},
        {"eigen_residual", &tolerances::eigen_residual},
        {"boundary_exclusion", &tolerances::boundary_exclusion},
        {"cluster_rel_gap", &tolerances::cluster_rel_gap},
        {"trust_tail", &tolerances::trust_tail},
        {"grid_mean_fraction", &tolerances::grid_mean_fraction},
        {"state_norm", &tolerances::state_norm},
        {"observable", &tolerances::observable},
        {"gamma_entry", &tolerances::gamma_entry},
        {"overlap_formula", &tolerances::overlap_formula},
        {"metric_identity", &tolerances::metric_identity},
        {"metric_step", &tolerances::metric_step},
        {"resolution", &tolerances::resolution},
        {"lattice_deviation", &tolerances::lattice_deviation},
        {"classify_first", &tolerances::classify_first},
        {"classify_second", &tolerances::classify_second},
        {"surface", &tolerances::surface},
        {"multiplier_residual", &tolerances::multiplier_residual},
        {"drift_explosion", &tolerances::drift_explosion},
        {"structure_fit", &tolerances::structure_fit},
    };
    if (!v.is_object())
        throw validation_error("scenario: tolerances must be an object");
    tolerances out;
    for (const auto& [key, value] : v.items()) {
        bool known = false;
        for (const field& f : fields)
            if (key == f.name) {
                out.*(f.member) = get_num(v, "tolerances", f.name, 1e-300, 1e6);
                known = true;
                break;
            }
        if (!known)
            throw validation_error("scenario: unknown field 'tolerances." + key + "'");
    }
    return out;
}

} // namespace

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

scenario parse_scenario_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("scenario: invalid JSON: ") + e.what());
    }
    check_keys(root, "",
               {"schema", "name", "space", "hamiltonian", "constraints", "delta", "evolution",
                "lattice", "classical", "germ", "tolerances", "seed"});

    scenario out;
    out.schema = static_cast<int>(get_int(root, "", "schema", 1, 1));
    out.name = get_str(root, "", "name");
    if (out.name.empty()) throw validation_error("scenario: name must be nonempty");
    for (char c : out.name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            throw validation_error("scenario: name may contain [a-zA-Z0-9_-] only");

    const json& space = require(root, "", "space");
    check_keys(space, "space", {"kind", "cutoff", "spins"});
    out.space_kind = get_str(space, "space", "kind");
    if (out.space_kind == "fock") {
        out.cutoff = static_cast<int>(get_int(space, "space", "cutoff", 2, 100000));
        if (space.contains("spins"))
            throw validation_error("scenario: space.spins is not valid for kind 'fock'");
    } else if (out.space_kind == "spin") {
        const json& spins = require(space, "space", "spins");
        if (!spins.is_array() || spins.empty() || spins.size() > 2)
            throw validation_error("scenario: space.spins must hold one or two spins");
        for (const json& j : spins) {
            if (!j.is_number())
                throw validation_error("scenario: space.spins entries must be numbers");
            const double value = j.get<double>();
            if (!(value > 0.0) || value > 20.0 ||
                std::abs(value * 2.0 - std::round(value * 2.0)) > 1e-12)
                throw validation_error(
                    "scenario: space.spins entries must be positive half-integers <= 20");
            out.spins.push_back(value);
        }
        if (space.contains("cutoff"))
            throw validation_error("scenario: space.cutoff is not valid for kind 'spin'");
    } else {
        throw validation_error("scenario: space.kind must be 'fock' or 'spin'");
    }

    out.hamiltonian = get_str(root, "", "hamiltonian");
    if (root.contains("constraints")) {
        const json& cons = root["constraints"];
        if (!cons.is_array())
            throw validation_error("scenario: constraints must be an array of strings");
        for (const json& c : cons) {
            if (!c.is_string())
                throw validation_error("scenario: constraints must be an array of strings");
            out.constraints.push_back(c.get<std::string>());
        }
    }
    if (root.contains("delta")) out.delta = parse_delta(root["delta"]);
    if (root.contains("evolution")) out.evolution = parse_evolution(root["evolution"]);
    if (root.contains("lattice")) out.lattice = parse_lattice(root["lattice"]);
    if (root.contains("classical")) out.classical = parse_classical(root["classical"]);
    if (root.contains("germ")) out.germ = parse_germ(root["germ"]);
    if (root.contains("tolerances")) out.tol = parse_tolerances(root["tolerances"]);
    if (root.contains("seed"))
        out.seed = static_cast<std::uint64_t>(get_int(root, "", "seed", 0, 4611686018427387903L));

    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(root.dump())));
    out.hash = buf;
    return out;
}

scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("scenario: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

} // namespace projq

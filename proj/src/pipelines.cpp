#include "projq/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "projq/dynamics.hpp"
#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/germ.hpp"
#include "projq/lattice.hpp"
#include "projq/quantize.hpp"
#include "projq/spin.hpp"

namespace projq {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    return out.str();
}

struct output_sink {
    std::filesystem::path dir;
    std::vector<std::filesystem::path> written;

    explicit output_sink(const std::string& out_dir) : dir(out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw input_error("cannot create output directory '" + dir.string() + "'");
    }
    void write(const std::string& name, const std::string& content) {
        const std::filesystem::path path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw error("cannot open '" + path.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw error("short write to '" + path.string() + "'");
        written.push_back(path);
    }
    void discard_all() {
        for (const auto& path : written) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        written.clear();
    }
};

struct check_row {
    std::string name;
    bool pass = false;
    std::optional<double> measured;
    std::optional<double> threshold;
    std::string detail;
};

struct check_list {
    std::vector<check_row> rows;

    void add(const std::string& name, double measured, double threshold,
             const std::string& detail = "") {
        rows.push_back({name, measured <= threshold, measured, threshold, detail});
    }
    void add_flag(const std::string& name, bool pass, const std::string& detail = "") {
        rows.push_back({name, pass, std::nullopt, std::nullopt, detail});
    }
    bool all_pass() const {
        for (const check_row& row : rows)
            if (!row.pass) return false;
        return true;
    }
    json to_json() const {
        json out = json::array();
        for (const check_row& row : rows) {
            json entry;
            entry["name"] = row.name;
            entry["pass"] = row.pass;
            if (row.measured) entry["measured"] = *row.measured;
            if (row.threshold) entry["threshold"] = *row.threshold;
            if (!row.detail.empty()) entry["detail"] = row.detail;
            out.push_back(entry);
        }
        return out;
    }
    std::vector<std::vector<std::string>> to_rows() const {
        std::vector<std::vector<std::string>> out;
        for (const check_row& row : rows)
            out.push_back({row.name, row.pass ? "1" : "0",
                           row.measured ? fmt(*row.measured) : "",
                           row.threshold ? fmt(*row.threshold) : ""});
        return out;
    }
};

std::tuple<op_matrix, op_matrix, op_matrix> scenario_generators(const scenario& sc,
                                                                const hilbert_space& space) {
    if (sc.spins.size() == 2) return coupled_pair_generators(sc.spins[0]);
    return rotation_generators(space);
}

double doubling_ladder_or_throw(const std::vector<long>& ladder) {
    if (ladder.size() < 4)
        throw validation_error("evolution.N_ladder needs >= 4 doubling entries");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] != 2 * ladder[i - 1])
            throw validation_error("evolution.N_ladder must double at every step");
    return static_cast<double>(ladder.front());
}

// Soft/sharp projector agreement measured in the eigenbasis of X.
double soft_projector_error(const op_matrix& x, double delta_sq,
                            const gamma_projector_result& soft) {
    const eigensystem es = hermitian_eig(x.entries);
    matrix sharp = matrix::Zero(x.entries.rows(), x.entries.cols());
    for (Eigen::Index k = 0; k < es.values.size(); ++k)
        if (es.values(k) <= delta_sq) sharp(k, k) = 1.0;
    const matrix rotated = es.vectors.adjoint() * soft.mat.entries * es.vectors;
    return max_abs(rotated - sharp);
}

phase_polynomial classical_preset(const std::string& text) {
    if (text == "J3") return parse_polynomial("q1*p2 - q2*p1");
    return parse_polynomial(text);
}

std::vector<phase_polynomial> classical_constraint_polys(const std::vector<std::string>& cons) {
    std::vector<phase_polynomial> out;
    for (const std::string& entry : cons) {
        if (entry == "P-and-Q") {
            out.push_back(parse_polynomial("p1"));
            out.push_back(parse_polynomial("q1"));
        } else if (entry == "P-only-germ") {
            out.push_back(parse_polynomial("p1"));
        } else if (entry == "rotation-generators") {
            out.push_back(parse_polynomial("q2*p3 - q3*p2"));
            out.push_back(parse_polynomial("q3*p1 - q1*p3"));
            out.push_back(parse_polynomial("q1*p2 - q2*p1"));
        } else {
            out.push_back(parse_polynomial(entry));
        }
    }
    return out;
}

} // namespace

hilbert_space scenario_space(const scenario& sc) {
    if (sc.space_kind == "fock") return hilbert_space::fock(sc.cutoff);
    if (sc.spins.size() == 1) return hilbert_space::spin_sum(sc.spins);
    if (sc.spins[0] != sc.spins[1])
        throw validation_error("scenario: a coupled spin pair must use equal spins");
    const hilbert_space half = hilbert_space::spin_sum({sc.spins[0]});
    return hilbert_space::product(half, half);
}

op_matrix scenario_hamiltonian(const scenario& sc, const hilbert_space& space) {
    if (sc.hamiltonian == "J3") {
        if (space.kind == space_kind::fock)
            throw validation_error("scenario: hamiltonian preset 'J3' needs a spin space");
        return std::get<2>(scenario_generators(sc, space));
    }
    if (space.kind != space_kind::fock)
        throw validation_error("scenario: polynomial hamiltonians need a Fock space");
    return quantize_polynomial(space, parse_polynomial(sc.hamiltonian));
}

std::vector<op_matrix> scenario_constraint_ops(const scenario& sc,
                                               const hilbert_space& space) {
    std::vector<op_matrix> out;
    for (const std::string& entry : sc.constraints) {
        if (entry == "P-and-Q" || entry == "P-only-germ") {
            if (space.kind != space_kind::fock)
                throw validation_error("scenario: constraint preset '" + entry +
                                       "' needs a Fock space");
            auto [p, q] = canonical_pair(space);
            out.push_back(p);
            if (entry == "P-and-Q") out.push_back(q);
        } else if (entry == "rotation-generators") {
            if (space.kind == space_kind::fock)
                throw validation_error(
                    "scenario: constraint preset 'rotation-generators' needs a spin space");
            auto [j1, j2, j3] = scenario_generators(sc, space);
            out.push_back(j1);
            out.push_back(j2);
            out.push_back(j3);
        } else {
            if (space.kind != space_kind::fock)
                throw validation_error("scenario: polynomial constraints need a Fock space");
            out.push_back(quantize_polynomial(space, parse_polynomial(entry)));
        }
    }
    return out;
}

constraint_system scenario_classical_system(const scenario& sc) {
    return constraint_system(classical_preset(sc.hamiltonian),
                             classical_constraint_polys(sc.constraints));
}

namespace {

// ---------------------------------------------------------------- verify --

void verify_worked_examples(const tolerances& tol, check_list& checks) {
    { // rotation pair: the singlet is the whole physical subspace
        const auto gens = coupled_pair_generators(0.5);
        const op_matrix j2 = casimir(gens);
        const projector e = spectral_projector(j2, 0.5, tol);
        checks.add_flag("rotation-pair-rank-one", e.rank == 1,
                        "rank=" + std::to_string(e.rank));
        cvector singlet = cvector::Zero(4);
        singlet(1) = 1.0 / std::sqrt(2.0);
        singlet(2) = -1.0 / std::sqrt(2.0);
        const double fidelity = (singlet.dot(e.mat.entries * singlet)).real();
        checks.add("rotation-singlet-infidelity", 1.0 - fidelity, 1e-10);

        const hilbert_space one = hilbert_space::spin_sum({0.5});
        const projector e1 = spectral_projector(casimir(rotation_generators(one)), 0.5, tol);
        checks.add_flag("rotation-single-spin-rank-zero", e1.rank == 0,
                        "rank=" + std::to_string(e1.rank));
    }
    { // second-class pair (P, Q): one-dimensional physical subspace
        const hilbert_space space = hilbert_space::fock(30);
        auto [p, q] = canonical_pair(space);
        const constraint_set cs(space, {p, q});
        const op_matrix x = sum_of_squares(cs);
        const double delta_sq = choose_delta(x, delta_policy::gap_midpoint(), tol.cluster_rel_gap);
        checks.add("oscillator-midpoint-delta", std::abs(delta_sq - 2.0), 1e-9);
        const projector e = spectral_projector(x, delta_sq, tol);
        checks.add_flag("oscillator-rank-one", e.rank == 1, "rank=" + std::to_string(e.rank));
        cvector ground = cvector::Zero(space.dim);
        ground(0) = 1.0;
        const double fidelity = (ground.dot(e.mat.entries * ground)).real();
        checks.add("oscillator-ground-infidelity", 1.0 - fidelity, 1e-10);
    }
    { // germ limit of the single-P constraint
        const std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
        const germ_report center = germ_limit({1.0, 0.0}, {0.0, 0.0}, schedule);
        const double target = std::exp(-0.5);
        checks.add("germ-limit-value", std::abs(center.extrapolant - target), 1e-4);
        double spread = 0.0;
        for (double qb : {-0.5, 0.0, 0.5})
            for (double qk : {-0.5, 0.0, 0.5}) {
                const germ_report r = germ_limit({1.0, qb}, {0.0, qk}, schedule);
                spread = std::max(spread, std::abs(r.extrapolant - center.extrapolant));
            }
        checks.add("germ-q-independence", spread, 1e-4);
    }
}

void cmd_verify(const scenario& sc, const run_options& opts, output_sink& sink,
                json& outputs, check_list& checks) {
    const tolerances& tol = sc.tol;
    verify_worked_examples(tol, checks);

    const hilbert_space space = scenario_space(sc);
    outputs["space"] = space.describe();

    if (space.kind == space_kind::fock) {
        auto [p, q] = canonical_pair(space);
        const int window = space.cutoff - 2; // rows 0 .. D-3 are truncation-free
        const matrix comm = q.entries * p.entries - p.entries * q.entries;
        const matrix target =
            imag_unit * matrix::Identity(space.dim, space.dim).topLeftCorner(window, window);
        checks.add("canonical-commutator-window",
                   max_abs(comm.topLeftCorner(window, window) - target), 1e-12);

        const double rmax = trust_radius(space.cutoff, tol.trust_tail);
        const double scale = std::min(1.0, 0.9 * rmax / 2.0);
        const std::vector<std::pair<coherent_label, coherent_label>> pairs = {
            {{0.0, 0.0}, {1.0, 1.0}},
            {{1.0, -1.0}, {-1.0, 1.0}},
            {{2.0, 0.0}, {0.0, 2.0}},
            {{0.5, 1.5}, {-1.0, -0.5}},
        };
        double overlap_err = 0.0;
        for (const auto& [bra_raw, ket_raw] : pairs) {
            const coherent_label bra{scale * bra_raw.p, scale * bra_raw.q};
            const coherent_label ket{scale * ket_raw.p, scale * ket_raw.q};
            const state_vector a = coherent_state(space, bra, tol);
            const state_vector b = coherent_state(space, ket, tol);
            overlap_err = std::max(
                overlap_err, std::abs(overlap(a, b) - coherent_overlap_formula(bra, ket)));
        }
        checks.add("coherent-overlap-formula", overlap_err, tol.overlap_formula);

        double metric_err = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                const coherent_label label{scale * (-1.0 + 0.5 * i), scale * (-1.0 + 0.5 * j)};
                const Eigen::Matrix2d g =
                    fubini_study_metric(space, label, tol.metric_step, tol);
                metric_err = std::max(metric_err,
                                      (g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
            }
        checks.add("fubini-study-identity", metric_err, tol.metric_identity);

        if (space.cutoff >= 40)
            checks.add("weyl-relation-window", weyl_residual(space, 0.6, 0.8, 24), 1e-6);
    }

    const std::vector<op_matrix> cons = scenario_constraint_ops(sc, space);
    std::optional<projector> sharp;
    if (!cons.empty()) {
        const constraint_set cs(space, cons);
        const op_matrix x = sum_of_squares(cs);
        const double delta_sq = choose_delta(x, sc.delta, tol.cluster_rel_gap);
        outputs["delta_sq"] = delta_sq;
        sharp = spectral_projector(x, delta_sq, tol);
        outputs["projector_rank"] = sharp->rank;
        checks.add("projector-idempotence",
                   spectral_norm(sharp->mat.entries * sharp->mat.entries - sharp->mat.entries),
                   tol.projector);
        checks.add("projector-rank-trace",
                   std::abs(sharp->mat.entries.trace().real() - sharp->rank), tol.rank_trace);

        const eigensystem es = hermitian_eig(x.entries);
        double gap_min = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < es.values.size(); ++k)
            gap_min = std::min(gap_min, std::abs(es.values(k) - delta_sq));
        const double gamma_needed = 400.0 / gap_min;
        if (gamma_needed <= 1e5) {
            const gamma_quadrature quad{gamma_needed, 32, quad_kind::tanh_sinh};
            const gamma_projector_result soft =
                gamma_integral_projector(x, delta_sq, quad, 1.0, opts.threads);
            checks.add("soft-projector-agreement", soft_projector_error(x, delta_sq, soft),
                       tol.gamma_entry);
        } else {
            checks.add_flag("soft-projector-agreement", true,
                            "skipped: spectral gap too narrow for a tractable strength");
        }
    } else {
        // With nothing to constrain, the multiplier average must integrate to
        // the identity: 1 = int dR(lambda).
        const op_matrix none(space, matrix::Zero(space.dim, space.dim), true);
        const gamma_quadrature quad{200.0, 32, quad_kind::tanh_sinh};
        const gamma_projector_result soft =
            gamma_integral_projector(none, 1.0, quad, 1.0, opts.threads);
        checks.add("weak-measure-identity",
                   max_abs(soft.mat.entries - matrix::Identity(space.dim, space.dim)),
                   tol.gamma_entry, "1 = int dR(lambda) on the empty constraint set");
    }

    if (sc.evolution && sharp) {
        doubling_ladder_or_throw(sc.evolution->n_ladder);
        const op_matrix h = scenario_hamiltonian(sc, space);
        const evolution_report rep =
            chernoff_convergence(h, *sharp, sc.evolution->t, sc.evolution->n_ladder);
        const auto [commutes, residual] = is_observable(h, *sharp, tol.observable);
        outputs["observable_hamiltonian"] = commutes;
        if (commutes) {
            double worst = 0.0;
            for (double err : rep.errors) worst = std::max(worst, err);
            checks.add("chernoff-observable-errors", worst, 1e-10);
        } else if (rep.order_defined) {
            checks.add("chernoff-order-gap", std::abs(rep.fitted_order - 1.0), 0.3,
                       "fitted order " + fmt(rep.fitted_order));
        } else {
            checks.add_flag("chernoff-order-gap", true, "errors at round-off");
        }
    }

    if (sc.lattice && space.kind == space_kind::fock) {
        const lattice_block& block = *sc.lattice;
        const phase_grid grid = phase_grid::square(block.radius, block.spacing);
        const double res = resolution_residual(space, grid, block.probe_level, tol);
        checks.add("grid-resolution", res, tol.resolution);

        const op_matrix h0(space, matrix::Zero(space.dim, space.dim), true);
        const long n_tel = std::min<long>(8, block.n);
        const lattice_result lat =
            lattice_propagator(h0, block.to, block.from, block.t, n_tel, grid, tol);
        checks.add("zero-generator-telescope", lat.deviation,
                   10.0 * static_cast<double>(n_tel) * res + 1e-13);
    }

    if (sc.germ) {
        const germ_block& gb = *sc.germ;
        const germ_report rep = germ_limit({gb.p_bra, 0.0}, {gb.p_ket, 0.0}, gb.schedule);
        const double target = std::exp(-(gb.p_bra * gb.p_bra + gb.p_ket * gb.p_ket) / 2.0);
        checks.add("germ-scenario-limit", std::abs(rep.extrapolant - target), 1e-4);
    }

    if (sc.classical) {
        std::mt19937_64 rng(opts.seed);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const phase_polynomial f = random_sparse_polynomial(rng, 3, 4, 4);
            const phase_polynomial g = random_sparse_polynomial(rng, 3, 4, 4);
            const phase_polynomial h = random_sparse_polynomial(rng, 3, 4, 4);
            worst = std::max(worst, bracket_identity_residual(f, g, h));
        }
        checks.add("bracket-identities", worst, 1e-12);

        const constraint_system system = scenario_classical_system(sc);
        const classification_report crep =
            classify(system, std::max(24, sc.classical->seeds), tol.classify_first,
                     tol.classify_second, tol, opts.seed);
        outputs["classical_verdict"] = verdict_name(crep.verdict);
        if (crep.verdict == constraint_verdict::second_class) {
            const std::vector<phase_point> pts =
                surface_samples(system.phis, 5, tol.surface, opts.seed + 1);
            solve_multipliers(system, pts.front(), tol); // throws beyond tolerance
            checks.add_flag("multiplier-residual", true,
                            "solved and verified at a surface sample");
        }
    }

    sink.write("verify.csv", csv_table({"check", "pass", "measured", "threshold"},
                                       checks.to_rows()));
}

// --------------------------------------------------------------- project --

void cmd_project(const scenario& sc, const run_options& opts, output_sink& sink,
                 json& outputs, check_list& checks) {
    const tolerances& tol = sc.tol;
    const hilbert_space space = scenario_space(sc);
    const std::vector<op_matrix> cons = scenario_constraint_ops(sc, space);
    if (cons.empty()) throw validation_error("project: scenario has no constraints");
    const constraint_set cs(space, cons);
    const op_matrix x = sum_of_squares(cs);
    const double delta_sq = choose_delta(x, sc.delta, tol.cluster_rel_gap);
    const projector e = spectral_projector(x, delta_sq, tol);

    const double idem = spectral_norm(e.mat.entries * e.mat.entries - e.mat.entries);
    const double herm = max_abs(e.mat.entries - e.mat.entries.adjoint());
    const double trace_gap = std::abs(e.mat.entries.trace().real() - e.rank);
    checks.add("projector-idempotence", idem, tol.projector);
    checks.add("projector-hermiticity", herm, tol.projector);
    checks.add("projector-rank-trace", trace_gap, tol.rank_trace);

    const eigensystem xes = hermitian_eig(x.entries);
    double boundary_margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < xes.values.size(); ++k)
        boundary_margin = std::min(boundary_margin, std::abs(xes.values(k) - delta_sq));

    const op_matrix h = scenario_hamiltonian(sc, space);
    const eigensystem hes = hermitian_eig(h.entries);
    const cvector ground = hes.vectors.col(0);
    const double fidelity = (ground.dot(e.mat.entries * ground)).real();
    const auto [commutes, obs_residual] = is_observable(h, e, tol.observable);

    // Strength-doubling ladder for the multiplier-integral projector; the
    // base strength is resonant for half-integer-spaced spectra.
    std::vector<double> gammas{32.0 * pi, 64.0 * pi, 128.0 * pi};
    std::vector<double> entry_errors;
    gamma_projector_result last{op_matrix(), {}, 0.0};
    for (double g : gammas) {
        const gamma_quadrature quad{g, sc.lattice ? sc.lattice->gamma_nodes : 32,
                                    sc.lattice ? sc.lattice->rule : quad_kind::tanh_sinh};
        last = gamma_integral_projector(x, delta_sq, quad, 1.0, opts.threads);
        entry_errors.push_back(soft_projector_error(x, delta_sq, last));
    }

    std::vector<std::vector<std::string>> kv = {
        {"delta_sq", fmt(delta_sq)},
        {"rank", std::to_string(e.rank)},
        {"trace_real", fmt(e.mat.entries.trace().real())},
        {"idempotence_residual", fmt(idem)},
        {"hermiticity_residual", fmt(herm)},
        {"boundary_margin", fmt(boundary_margin)},
        {"ground_state_fidelity", fmt(fidelity)},
        {"observable_h", commutes ? "1" : "0"},
        {"observable_residual", fmt(obs_residual)},
        {"gamma_resolution_band", fmt(last.resolution_band)},
    };
    sink.write("project.csv", csv_table({"quantity", "value"}, kv));

    std::vector<std::vector<std::string>> spectrum_rows;
    json spectrum_records = json::array();
    const matrix rotated = xes.vectors.adjoint() * last.mat.entries * xes.vectors;
    for (Eigen::Index k = 0; k < xes.values.size(); ++k) {
        const double lambda = xes.values(k);
        const double sharp_val = lambda <= delta_sq ? 1.0 : 0.0;
        const double soft_val = rotated(k, k).real();
        const bool banded = std::abs(lambda - delta_sq) <= last.resolution_band;
        spectrum_rows.push_back({std::to_string(k), fmt(lambda), fmt(sharp_val),
                                 fmt(soft_val), fmt(std::abs(soft_val - sharp_val)),
                                 banded ? "1" : "0"});
        spectrum_records.push_back(json{{"index", k},
                                        {"lambda", lambda},
                                        {"sharp", sharp_val},
                                        {"soft", soft_val},
                                        {"band_flag", banded}});
    }
    sink.write("gamma.csv",
               csv_table({"index", "eigenvalue", "sharp", "soft_diag", "abs_error",
                          "band_flag"},
                         spectrum_rows));

    std::vector<std::vector<std::string>> doubling_rows;
    json doubling_records = json::array();
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const std::string ratio =
            i == 0 ? "" : fmt(entry_errors[i - 1] / entry_errors[i]);
        doubling_rows.push_back({fmt(gammas[i]), fmt(entry_errors[i]), ratio});
        json rec = {{"gamma_eps", gammas[i]}, {"max_entry_error", entry_errors[i]}};
        if (i > 0) rec["ratio_vs_previous"] = entry_errors[i - 1] / entry_errors[i];
        doubling_records.push_back(rec);
    }
    sink.write("gamma_doubling.csv",
               csv_table({"gamma_eps", "max_entry_error", "ratio_vs_previous"},
                         doubling_rows));
    sink.write("plotdata_gamma.json",
               json{{"doubling", doubling_records}, {"spectrum", spectrum_records}}.dump(2) +
                   "\n");

    outputs["delta_sq"] = delta_sq;
    outputs["rank"] = e.rank;
    outputs["ground_state_fidelity"] = fidelity;
    outputs["observable_hamiltonian"] = commutes;
    outputs["gamma_entry_errors"] = entry_errors;
}

// ---------------------------------------------------------------- evolve --

void cmd_evolve(const scenario& sc, const run_options& opts, output_sink& sink,
                json& outputs, check_list& checks) {
    (void)opts;
    const tolerances& tol = sc.tol;
    if (!sc.evolution) throw validation_error("evolve: scenario has no evolution block");
    const hilbert_space space = scenario_space(sc);
    const std::vector<op_matrix> cons = scenario_constraint_ops(sc, space);
    if (cons.empty()) throw validation_error("evolve: scenario has no constraints");
    doubling_ladder_or_throw(sc.evolution->n_ladder);

    const constraint_set cs(space, cons);
    const op_matrix x = sum_of_squares(cs);
    const double delta_sq = choose_delta(x, sc.delta, tol.cluster_rel_gap);
    const projector e = spectral_projector(x, delta_sq, tol);
    const op_matrix h = scenario_hamiltonian(sc, space);

    const evolution_report rep =
        chernoff_convergence(h, e, sc.evolution->t, sc.evolution->n_ladder);
    const auto [commutes, obs_residual] = is_observable(h, e, tol.observable);

    std::vector<std::vector<std::string>> rows;
    json records = json::array();
    std::vector<double> inv_n, errs;
    for (std::size_t i = 0; i < rep.n_values.size(); ++i) {
        inv_n.push_back(1.0 / static_cast<double>(rep.n_values[i]));
        errs.push_back(rep.errors[i]);
        std::string order_cell;
        if (i >= 1) {
            try {
                order_cell = fmt(loglog_slope(
                    std::vector<double>(inv_n.begin(), inv_n.end()),
                    std::vector<double>(errs.begin(), errs.end())));
            } catch (const error&) {
                order_cell = "";
            }
        }
        rows.push_back({std::to_string(rep.n_values[i]), fmt(rep.errors[i]), order_cell});
        records.push_back(json{{"N", rep.n_values[i]}, {"error", rep.errors[i]}});
    }
    sink.write("chernoff.csv", csv_table({"N", "error", "fitted_order_so_far"}, rows));
    sink.write("plotdata_chernoff.json",
               json{{"records", records},
                    {"fitted_order", rep.fitted_order},
                    {"order_defined", rep.order_defined},
                    {"observable", commutes}}
                       .dump(2) +
                   "\n");

    outputs["observable_hamiltonian"] = commutes;
    outputs["observable_residual"] = obs_residual;
    outputs["fitted_order"] = rep.fitted_order;
    outputs["order_defined"] = rep.order_defined;
    outputs["errors"] = rep.errors;

    if (commutes) {
        double worst = 0.0;
        for (double err : rep.errors) worst = std::max(worst, err);
        checks.add("chernoff-observable-errors", worst, 1e-10);
    } else if (rep.order_defined) {
        checks.add("chernoff-order-gap", std::abs(rep.fitted_order - 1.0), 0.3,
                   "fitted order " + fmt(rep.fitted_order));
    } else {
        checks.add_flag("chernoff-order-gap", true, "errors at round-off");
    }
}

// --------------------------------------------------------------- pathint --

void cmd_pathint(const scenario& sc, const run_options& opts, output_sink& sink,
                 json& outputs, check_list& checks) {
    const tolerances& tol = sc.tol;
    if (!sc.lattice) throw validation_error("pathint: scenario has no lattice block");
    const hilbert_space space = scenario_space(sc);
    if (space.kind != space_kind::fock)
        throw validation_error("pathint: scenario needs a Fock space");
    const lattice_block& block = *sc.lattice;
    const op_matrix h = scenario_hamiltonian(sc, space);
    const std::vector<op_matrix> cons = scenario_constraint_ops(sc, space);

    { // resolution ladder for the base grid
        const phase_grid grid = phase_grid::square(block.radius, block.spacing);
        std::vector<std::vector<std::string>> rows;
        double final_res = 0.0;
        for (int level = 0; level <= block.probe_level; ++level) {
            final_res = resolution_residual(space, grid, level, tol);
            rows.push_back({std::to_string(level), fmt(final_res)});
        }
        sink.write("resolution.csv", csv_table({"probe_level", "residual"}, rows));
        checks.add("grid-resolution", final_res, tol.resolution);
        outputs["resolution_residual"] = final_res;
    }

    if (cons.empty()) {
        const phase_grid grid = phase_grid::square(block.radius, block.spacing);
        std::vector<long> ladder;
        for (long n : {block.n / 4, block.n / 2, block.n})
            if (n >= 1 && (ladder.empty() || n > ladder.back())) ladder.push_back(n);
        std::vector<std::vector<std::string>> rows;
        json records = json::array();
        std::vector<double> inv_n, devs;
        lattice_result final_result;
        for (long n : ladder) {
            final_result =
                lattice_propagator(h, block.to, block.from, block.t, n, grid, tol);
            rows.push_back({std::to_string(n), fmt(block.t / static_cast<double>(n)),
                            fmt(final_result.value.real()), fmt(final_result.value.imag()),
                            fmt(final_result.reference.real()),
                            fmt(final_result.reference.imag()), fmt(final_result.deviation),
                            final_result.quadrature_limited ? "1" : "0"});
            records.push_back(json{{"N", n}, {"deviation", final_result.deviation}});
            inv_n.push_back(1.0 / static_cast<double>(n));
            devs.push_back(final_result.deviation);
        }
        sink.write("lattice.csv",
                   csv_table({"N", "eps", "value_re", "value_im", "reference_re",
                              "reference_im", "deviation", "quadrature_limited"},
                             rows));
        double rate = 0.0;
        bool rate_defined = false;
        if (devs.size() >= 2) {
            bool positive = true;
            for (double d : devs) positive = positive && d > 1e-14;
            if (positive) {
                rate = loglog_slope(inv_n, devs);
                rate_defined = true;
            }
        }
        sink.write("plotdata_lattice.json",
                   json{{"records", records}, {"rate", rate}, {"rate_defined", rate_defined}}
                           .dump(2) +
                       "\n");
        checks.add("lattice-deviation", final_result.deviation, tol.lattice_deviation);
        outputs["lattice_deviation"] = final_result.deviation;
        outputs["lattice_rate"] = rate;
    } else {
        if (block.schedule.empty())
            throw validation_error("pathint: constrained scenario needs lattice.schedule");
        const constraint_set cs(space, cons);
        const op_matrix x = sum_of_squares(cs);
        const double delta_sq = choose_delta(x, sc.delta, tol.cluster_rel_gap);
        outputs["delta_sq"] = delta_sq;

        std::vector<std::vector<std::string>> rows;
        json records = json::array();
        lattice_result final_result;
        int rung_index = 0;
        for (const lattice_rung& rung : block.schedule) {
            const double eps = block.t / static_cast<double>(rung.n);
            const double gamma_max = rung.gamma_eps_over_pi
                                         ? (*rung.gamma_eps_over_pi * pi / eps)
                                         : *rung.gamma_max;
            const gamma_quadrature quad{gamma_max, block.gamma_nodes, block.rule};
            const phase_grid grid = phase_grid::square(block.radius, rung.h);
            final_result = constrained_lattice_propagator(
                h, cs, delta_sq, block.to, block.from, block.t, rung.n, grid, quad, tol,
                opts.threads);
            rows.push_back({std::to_string(rung_index), fmt(rung.h),
                            std::to_string(rung.n), fmt(gamma_max * eps),
                            fmt(final_result.value.real()), fmt(final_result.value.imag()),
                            fmt(final_result.reference.real()),
                            fmt(final_result.reference.imag()), fmt(final_result.deviation),
                            final_result.quadrature_limited ? "1" : "0"});
            records.push_back(json{{"rung", rung_index},
                                   {"grid_h", rung.h},
                                   {"N", rung.n},
                                   {"deviation", final_result.deviation}});
            ++rung_index;
        }
        sink.write("constrained.csv",
                   csv_table({"rung", "grid_h", "N", "gamma_eps", "value_re", "value_im",
                              "reference_re", "reference_im", "deviation",
                              "quadrature_limited"},
                             rows));
        sink.write("plotdata_lattice.json", json{{"records", records}}.dump(2) + "\n");
        checks.add("constrained-lattice-deviation", final_result.deviation,
                   tol.lattice_deviation);
        outputs["constrained_deviation"] = final_result.deviation;

        // Why the linear multiplier expansion cannot replace the quadratic
        // one: defect slopes in the slice width.
        const std::vector<double> eps_ladder{0.32, 0.16, 0.08, 0.04, 0.02};
        const insufficiency_report insuff =
            first_order_insufficiency_demo(cs, delta_sq, eps_ladder);
        std::vector<std::vector<std::string>> irows;
        json irecords = json::array();
        for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
            irows.push_back({fmt(insuff.eps_ladder[i]), fmt(insuff.first_order_defect[i]),
                             fmt(insuff.second_order_defect[i])});
            irecords.push_back(json{{"eps", insuff.eps_ladder[i]},
                                    {"first_order_defect", insuff.first_order_defect[i]},
                                    {"second_order_defect", insuff.second_order_defect[i]}});
        }
        sink.write("insufficiency.csv",
                   csv_table({"eps", "first_order_defect", "second_order_defect"}, irows));
        sink.write("plotdata_insufficiency.json",
                   json{{"records", irecords},
                        {"first_order_slope", insuff.first_order_slope},
                        {"second_order_slope", insuff.second_order_slope},
                        {"exact", insuff.exact}}
                           .dump(2) +
                       "\n");
        outputs["first_order_slope"] = insuff.first_order_slope;
        outputs["second_order_slope"] = insuff.second_order_slope;
        if (!insuff.exact) {
            checks.add("insufficiency-first-slope", std::abs(insuff.first_order_slope - 1.0),
                       0.3);
            checks.add("insufficiency-second-slope",
                       std::abs(insuff.second_order_slope - 2.0), 0.3);
        }
    }

    { // multiplier average: regularization ladder and its limit
        const double gamma = 0.7, a = 1e-3;
        std::vector<std::vector<std::string>> rows;
        json records = json::array();
        double flat_err = 0.0;
        cx extrapolant_one{};
        for (double phi : {0.0, 1.0}) {
            const lambda_average_report rep = lambda_average_extrapolated(phi, gamma, a);
            for (std::size_t i = 0; i < rep.eta_ladder.size(); ++i) {
                rows.push_back({fmt(phi), fmt(rep.eta_ladder[i]), fmt(rep.values[i].real()),
                                fmt(rep.values[i].imag())});
                records.push_back(json{{"phi", phi},
                                       {"eta_tilde", rep.eta_ladder[i]},
                                       {"re", rep.values[i].real()},
                                       {"im", rep.values[i].imag()}});
            }
            rows.push_back({fmt(phi), fmt(0.0), fmt(rep.extrapolant.real()),
                            fmt(rep.extrapolant.imag())});
            if (phi == 0.0)
                for (const cx& v : rep.values)
                    flat_err = std::max(flat_err, std::abs(v - 1.0));
            else
                extrapolant_one = rep.extrapolant;
        }
        sink.write("lambda.csv",
                   csv_table({"phi", "eta_tilde", "value_re", "value_im"}, rows));
        sink.write("plotdata_lambda.json", json{{"records", records}}.dump(2) + "\n");
        checks.add("lambda-average-normalization", flat_err, 1e-12);
        checks.add("lambda-average-linear-limit",
                   std::abs(extrapolant_one - cx(1.0, a * gamma)), 1e-8);
        outputs["lambda_extrapolant_re"] = extrapolant_one.real();
        outputs["lambda_extrapolant_im"] = extrapolant_one.imag();
    }

    if (sc.germ) {
        const germ_block& gb = *sc.germ;
        std::vector<std::vector<std::string>> rows;
        json records = json::array();
        cx center{};
        double spread = 0.0;
        const double target = std::exp(-(gb.p_bra * gb.p_bra + gb.p_ket * gb.p_ket) / 2.0);
        bool first = true;
        for (double qb : gb.q_grid)
            for (double qk : gb.q_grid) {
                const germ_report rep = germ_limit({gb.p_bra, qb}, {gb.p_ket, qk}, gb.schedule);
                for (std::size_t i = 0; i < rep.schedule.size(); ++i)
                    rows.push_back({fmt(qb), fmt(qk), fmt(rep.schedule[i]),
                                    fmt(rep.values[i].real()), fmt(rep.values[i].imag())});
                rows.push_back({fmt(qb), fmt(qk), fmt(0.0), fmt(rep.extrapolant.real()),
                                fmt(rep.extrapolant.imag())});
                records.push_back(json{{"q_bra", qb},
                                       {"q_ket", qk},
                                       {"re", rep.extrapolant.real()},
                                       {"im", rep.extrapolant.imag()}});
                if (first) {
                    center = rep.extrapolant;
                    first = false;
                }
                spread = std::max(spread, std::abs(rep.extrapolant - center));
            }
        sink.write("germ.csv",
                   csv_table({"q_bra", "q_ket", "delta", "value_re", "value_im"}, rows));
        sink.write("plotdata_germ.json",
                   json{{"records", records}, {"target", target}}.dump(2) + "\n");
        checks.add("germ-limit-value", std::abs(center - target), 1e-4);
        checks.add("germ-q-independence", spread, 1e-4);
    }
}

// -------------------------------------------------------------- classify --

void cmd_classify(const scenario& sc, const run_options& opts, output_sink& sink,
                  json& outputs, check_list& checks) {
    const tolerances& tol = sc.tol;
    if (!sc.classical) throw validation_error("classify: scenario has no classical block");
    if (sc.constraints.empty())
        throw validation_error("classify: scenario has no constraints");
    const classical_block& cls = *sc.classical;
    if (cls.seeds < 20)
        throw validation_error("classify: classical.seeds must be at least 20");

    const constraint_system system = scenario_classical_system(sc);
    const classification_report rep = classify(system, cls.seeds, tol.classify_first,
                                               tol.classify_second, tol, opts.seed);

    double max_phi_res = 0.0;
    if (system.count > 0)
        max_phi_res = rep.on_surface_bracket_residuals.cwiseAbs().maxCoeff();
    double max_h_res = 0.0;
    for (double r : rep.h_bracket_residuals) max_h_res = std::max(max_h_res, r);

    sink.write("classify.csv",
               csv_table({"quantity", "value"},
                         {{"verdict", verdict_name(rep.verdict)},
                          {"sample_count", std::to_string(rep.sample_count)},
                          {"bracket_min_singular_value",
                           fmt(rep.bracket_matrix_min_singular_value)},
                          {"max_phi_bracket_residual", fmt(max_phi_res)},
                          {"max_h_bracket_residual", fmt(max_h_res)},
                          {"secondary_constraint_suspected",
                           rep.secondary_constraint_suspected ? "1" : "0"},
                          {"tol_first", fmt(rep.tol_first)},
                          {"tol_second", fmt(rep.tol_second)}}));
    outputs["verdict"] = verdict_name(rep.verdict);
    outputs["sample_count"] = rep.sample_count;
    outputs["bracket_min_singular_value"] = rep.bracket_matrix_min_singular_value;
    outputs["secondary_constraint_suspected"] = rep.secondary_constraint_suspected;

    const std::vector<phase_point> pts =
        surface_samples(system.phis, std::max(5, std::min(cls.seeds, 10)), tol.surface,
                        opts.seed + 1);
    const phase_point& x0 = pts.front();

    multiplier_source source = multiplier_source::auto_second_class();
    if (rep.verdict == constraint_verdict::second_class) {
        const std::vector<double> lambda = solve_multipliers(system, x0, tol);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < lambda.size(); ++i)
            rows.push_back({std::to_string(i), fmt(lambda[i])});
        sink.write("multipliers.csv", csv_table({"constraint_index", "lambda"}, rows));
        checks.add_flag("multiplier-residual", true, "solved and verified at a surface sample");
    } else {
        const std::size_t count = system.phis.size();
        source = multiplier_source::scheduled(
            [count](double) { return std::vector<double>(count, 0.0); });
    }

    const trajectory traj = integrate_constrained(system, source, x0, cls.dt, cls.steps, tol);
    std::vector<std::vector<std::string>> drift_rows;
    json drift_records = json::array();
    double max_drift = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, traj.drift.size() / 2000);
    for (std::size_t k = 0; k < traj.drift.size(); ++k) {
        drift_rows.push_back({std::to_string(k + 1), fmt(traj.drift[k])});
        max_drift = std::max(max_drift, traj.drift[k]);
        if (k % stride == 0)
            drift_records.push_back(json{{"step", k + 1}, {"drift", traj.drift[k]}});
    }
    sink.write("drift.csv", csv_table({"step", "drift"}, drift_rows));
    sink.write("plotdata_drift.json",
               json{{"records", drift_records}, {"max_drift", max_drift}}.dump(2) + "\n");
    outputs["max_drift"] = max_drift;
}

} // namespace

int run_command(const std::string& command, const std::string& scenario_path,
                const std::string& out_dir, std::optional<std::uint64_t> seed_override,
                std::optional<int> threads_override) {
    const auto started = std::chrono::steady_clock::now();
    try {
        scenario sc = load_scenario(scenario_path);

        run_options opts;
        opts.seed = seed_override.value_or(sc.seed);
        if (threads_override) {
            opts.threads = *threads_override;
        } else if (const char* env = std::getenv("PROJQ_THREADS")) {
            opts.threads = std::atoi(env);
        }
        if (opts.threads < 1 || opts.threads > 256)
            throw validation_error("threads must lie in [1, 256]");

        output_sink sink(out_dir);
        json outputs = json::object();
        check_list checks;
        try {
            if (command == "verify")
                cmd_verify(sc, opts, sink, outputs, checks);
            else if (command == "project")
                cmd_project(sc, opts, sink, outputs, checks);
            else if (command == "evolve")
                cmd_evolve(sc, opts, sink, outputs, checks);
            else if (command == "pathint")
                cmd_pathint(sc, opts, sink, outputs, checks);
            else if (command == "classify")
                cmd_classify(sc, opts, sink, outputs, checks);
            else
                throw input_error("unknown command '" + command + "'");

            json report;
            report["artifact_version"] = version_string;
            report["command"] = command;
            report["scenario"] = json{{"name", sc.name}, {"hash", sc.hash}};
            report["seed"] = opts.seed;
            report["outputs"] = outputs;
            report["checks"] = checks.to_json();
            report["pass"] = checks.all_pass();
            sink.write("report.json", report.dump(2) + "\n");
        } catch (...) {
            sink.discard_all();
            throw;
        }

        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        // Timings drift run to run, so they live outside the deterministic set.
        std::ofstream timing(std::filesystem::path(out_dir) / "timings.json",
                             std::ios::binary | std::ios::trunc);
        timing << json{{"command", command}, {"total_seconds", seconds}}.dump(2) << "\n";

        if (!checks.all_pass()) {
            std::cerr << "projq " << command << ": " << scenario_path
                      << ": one or more checks failed (see report.json)\n";
            return 2;
        }
        return 0;
    } catch (const error& e) {
        std::cerr << "projq " << command << ": " << scenario_path << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "projq " << command << ": " << scenario_path << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace projq

// Acceptance gate: one line per criterion, exit status = number of failures.
// Every threshold is written out literally next to the measurement.
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "projq/classical.hpp"
#include "projq/dynamics.hpp"
#include "projq/fock.hpp"
#include "projq/germ.hpp"
#include "projq/lattice.hpp"
#include "projq/linalg.hpp"
#include "projq/projection.hpp"
#include "projq/spin.hpp"

using namespace projq;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d (%s): %s  [%s]\n", index, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double soft_entry_error(const op_matrix& x, double delta_sq, double gamma_max) {
    const gamma_quadrature quad{gamma_max, 32, quad_kind::tanh_sinh};
    const gamma_projector_result soft = gamma_integral_projector(x, delta_sq, quad, 1.0);
    const eigensystem es = hermitian_eig(x.entries);
    const matrix rotated = es.vectors.adjoint() * soft.mat.entries * es.vectors;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        const double sharp = es.values(k) <= delta_sq ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(rotated(k, k).real() - sharp));
    }
    return worst;
}

void criterion_1_rotation_pair() {
    const auto gens = coupled_pair_generators(0.5);
    const projector e = spectral_projector(casimir(gens), 0.5);
    cvector singlet = cvector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const double fidelity = (singlet.dot(e.mat.entries * singlet)).real();
    const hilbert_space one = hilbert_space::spin_sum({0.5});
    const projector e1 = spectral_projector(casimir(rotation_generators(one)), 0.5);
    const bool pass = e.rank == 1 && fidelity >= 1.0 - 1e-10 && e1.rank == 0;
    report(1, "rotation pair singlet", pass,
           "rank=" + std::to_string(e.rank) + " fidelity=" + fmt(fidelity) +
               " single-spin rank=" + std::to_string(e1.rank) + " thresholds: rank 1, 1-1e-10, rank 0");
}

void criterion_2_oscillator_kernel() {
    const hilbert_space space = hilbert_space::fock(30);
    auto [p, q] = canonical_pair(space);
    const op_matrix x = sum_of_squares(constraint_set(space, {p, q}));
    const double delta_sq = choose_delta(x, delta_policy::gap_midpoint());
    const projector e = spectral_projector(x, delta_sq);
    cvector ground = cvector::Zero(30);
    ground(0) = 1.0;
    const double fidelity = (ground.dot(e.mat.entries * ground)).real();
    const bool pass =
        std::abs(delta_sq - 2.0) <= 1e-9 && e.rank == 1 && fidelity >= 1.0 - 1e-10;
    report(2, "second-class pair kernel", pass,
           "delta_sq=" + fmt(delta_sq) + " rank=" + std::to_string(e.rank) +
               " fidelity=" + fmt(fidelity) + " thresholds: 2+-1e-9, rank 1, 1-1e-10");
}

void criterion_3_germ_limit() {
    const std::vector<double> schedule{1.6e-3, 8e-4, 4e-4, 2e-4, 1e-4};
    const germ_report center = germ_limit({1.0, 0.0}, {0.0, 0.0}, schedule);
    const double gap = std::abs(center.extrapolant - std::exp(-0.5));
    double spread = 0.0;
    for (double qb : {-0.5, 0.0, 0.5})
        for (double qk : {-0.5, 0.0, 0.5})
            spread = std::max(spread,
                              std::abs(germ_limit({1.0, qb}, {0.0, qk}, schedule).extrapolant -
                                       center.extrapolant));
    const bool pass = gap <= 1e-4 && spread <= 1e-4;
    report(3, "constraint germ limit", pass,
           "gap=" + fmt(gap) + " q-spread=" + fmt(spread) + " thresholds: 1e-4, 1e-4");
}

void criterion_4_projected_product() {
    const hilbert_space space = hilbert_space::fock(30);
    auto [p, q] = canonical_pair(space);
    const op_matrix x = sum_of_squares(constraint_set(space, {p, q}));
    const projector e = spectral_projector(x, 2.0);
    const op_matrix h_sq(space, q.entries * q.entries, true);
    const evolution_report rep =
        chernoff_convergence(h_sq, e, 1.0, {64, 128, 256, 512, 1024, 2048, 4096});
    const op_matrix h_osc(space, 0.5 * x.entries, true);
    const evolution_report obs = chernoff_convergence(h_osc, e, 1.0, {64, 128, 256, 512});
    double worst_obs = 0.0;
    for (double err : obs.errors) worst_obs = std::max(worst_obs, err);
    const bool pass = rep.order_defined && std::abs(rep.fitted_order - 1.0) <= 0.3 &&
                      worst_obs <= 1e-10;
    report(4, "projected product convergence", pass,
           "order=" + fmt(rep.fitted_order) + " observable-max=" + fmt(worst_obs) +
               " thresholds: 1+-0.3, 1e-10");
}

void criterion_5_strength_resolution() {
    const hilbert_space space = hilbert_space::fock(30);
    auto [p, q] = canonical_pair(space);
    const op_matrix x = sum_of_squares(constraint_set(space, {p, q}));
    const double r_osc =
        soft_entry_error(x, 2.0, 32.0 * pi) / soft_entry_error(x, 2.0, 64.0 * pi);
    const op_matrix j2 = casimir(coupled_pair_generators(0.5));
    const double r_spin =
        soft_entry_error(j2, 0.5, 32.0 * pi) / soft_entry_error(j2, 0.5, 64.0 * pi);
    const op_matrix none(space, matrix::Zero(30, 30), true);
    const gamma_quadrature quad{200.0, 32, quad_kind::tanh_sinh};
    const gamma_projector_result soft = gamma_integral_projector(none, 1.0, quad, 1.0);
    const double identity_gap = max_abs(soft.mat.entries - matrix::Identity(30, 30));
    const bool pass = r_osc >= 1.8 && r_spin >= 1.8 && identity_gap <= 2e-3;
    report(5, "strength doubling and weak-measure identity", pass,
           "ratios=" + fmt(r_osc) + "," + fmt(r_spin) + " identity-gap=" + fmt(identity_gap) +
               " thresholds: >=1.8, <=2e-3");
}

void criterion_6_coherent_toolkit() {
    const hilbert_space space = hilbert_space::fock(40);
    const std::vector<std::pair<coherent_label, coherent_label>> pairs = {
        {{0.0, 0.0}, {1.0, 1.0}},
        {{1.0, -1.0}, {-1.0, 1.0}},
        {{2.0, 0.0}, {0.0, 2.0}},
        {{0.5, 1.5}, {-1.0, -0.5}}};
    double overlap_err = 0.0;
    for (const auto& [bra, ket] : pairs) {
        const state_vector a = coherent_state(space, bra);
        const state_vector b = coherent_state(space, ket);
        overlap_err =
            std::max(overlap_err, std::abs(overlap(a, b) - coherent_overlap_formula(bra, ket)));
    }
    double metric_err = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const Eigen::Matrix2d g =
                fubini_study_metric(space, {-1.0 + 0.5 * i, -1.0 + 0.5 * j});
            metric_err =
                std::max(metric_err, (g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
        }
    // Documented production grid: probe level 0, half-width 6, spacing 0.2,
    // cutoff 50.
    const double res =
        resolution_residual(hilbert_space::fock(50), phase_grid::square(6.0, 0.2), 0);
    const bool pass = overlap_err <= 1e-7 && metric_err <= 1e-5 && res <= 1e-6;
    report(6, "coherent-state toolkit", pass,
           "overlap=" + fmt(overlap_err) + " metric=" + fmt(metric_err) + " resolution=" +
               fmt(res) + " thresholds: 1e-7, 1e-5, 1e-6");
}

void criterion_7_lattice_propagator() {
    const hilbert_space d40 = hilbert_space::fock(40);
    const phase_grid grid40 = phase_grid::square(6.0, 0.25);
    const double res = resolution_residual(d40, grid40, 0);
    const op_matrix zero(d40, matrix::Zero(40, 40), true);
    const lattice_result tele = lattice_propagator(zero, {0, 0}, {0, 0}, 0.5, 8, grid40);
    const bool telescope_ok = tele.deviation <= 10.0 * 8.0 * res + 1e-13;

    auto [p40, q40] = canonical_pair(d40);
    const op_matrix h40(d40, 0.5 * (p40.entries * p40.entries + q40.entries * q40.entries),
                        true);
    const lattice_result a = lattice_propagator(h40, {0, 0}, {0, 0}, 0.5, 32, grid40);
    const lattice_result b = lattice_propagator(h40, {0, 0}, {0, 0}, 0.5, 64, grid40);
    const double rate = std::log2(a.deviation / b.deviation);
    const bool harmonic_ok = b.deviation <= 5e-3 && std::abs(rate - 1.0) <= 0.3;

    const hilbert_space d30 = hilbert_space::fock(30);
    auto [p30, q30] = canonical_pair(d30);
    const constraint_set cs(d30, {p30, q30});
    const op_matrix h30(d30, 0.5 * (p30.entries * p30.entries + q30.entries * q30.entries),
                        true);
    double final_dev = 0.0;
    const struct {
        double h;
        long n;
        double v;
    } rungs[] = {{1.0, 8, 32.5}, {0.5, 16, 64.5}, {0.25, 32, 128.5}};
    for (const auto& rung : rungs) {
        const double eps = 0.5 / double(rung.n);
        const gamma_quadrature quad{rung.v * pi / eps, 32, quad_kind::tanh_sinh};
        final_dev = constrained_lattice_propagator(h30, cs, 2.0, {1.0, 0.0}, {0.0, 1.0}, 0.5,
                                                   rung.n, phase_grid::square(5.0, rung.h),
                                                   quad)
                        .deviation;
    }
    const bool constrained_ok = final_dev <= 5e-3;
    const bool pass = telescope_ok && harmonic_ok && constrained_ok;
    report(7, "phase-space lattice propagator", pass,
           "telescope=" + fmt(tele.deviation) + " harmonic=" + fmt(b.deviation) + " rate=" +
               fmt(rate) + " constrained=" + fmt(final_dev) +
               " thresholds: 10*N*res, 5e-3, 1+-0.3, 5e-3");
}

void criterion_8_first_order_insufficiency() {
    const hilbert_space space = hilbert_space::fock(30);
    auto [p, q] = canonical_pair(space);
    const constraint_set cs(space, {p, q});
    const insufficiency_report rep =
        first_order_insufficiency_demo(cs, 2.0, {0.32, 0.16, 0.08, 0.04, 0.02});
    const bool pass = !rep.exact && std::abs(rep.first_order_slope - 1.0) <= 0.3 &&
                      std::abs(rep.second_order_slope - 2.0) <= 0.3;
    report(8, "first-order multiplier insufficiency", pass,
           "slopes=" + fmt(rep.first_order_slope) + "," + fmt(rep.second_order_slope) +
               " thresholds: 1+-0.3, 2+-0.3");
}

void criterion_9_classical_analysis() {
    std::mt19937_64 rng(987654321);
    double worst_identity = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const phase_polynomial f = random_sparse_polynomial(rng, 3, 4, 4);
        const phase_polynomial g = random_sparse_polynomial(rng, 3, 4, 4);
        const phase_polynomial h = random_sparse_polynomial(rng, 3, 4, 4);
        worst_identity = std::max(worst_identity, bracket_identity_residual(f, g, h));
    }

    const constraint_system circle(parse_polynomial("0.5*p1^2 + 0.5*p2^2"),
                                   {parse_polynomial("0.5*q1^2 + 0.5*q2^2 - 0.5"),
                                    parse_polynomial("q1*p1 + q2*p2")});
    const constraint_system rotations(parse_polynomial("q1*p2 - q2*p1"),
                                      {parse_polynomial("q2*p3 - q3*p2"),
                                       parse_polynomial("q3*p1 - q1*p3"),
                                       parse_polynomial("q1*p2 - q2*p1")});
    const constraint_system mixed(phase_polynomial::zero(2),
                                  {parse_polynomial("p1"), parse_polynomial("p2"),
                                   parse_polynomial("q2")});
    const bool verdicts_ok =
        classify(circle, 40).verdict == constraint_verdict::second_class &&
        classify(rotations, 40).verdict == constraint_verdict::first_class_closed &&
        classify(mixed, 40).verdict == constraint_verdict::mixed;

    phase_point x0;
    x0.q = (rvector(2) << 1.0, 0.0).finished();
    x0.p = (rvector(2) << 0.0, 1.0).finished();
    const std::vector<double> lambda = solve_multipliers(circle, x0);
    double residual = 0.0;
    for (int a = 0; a < 2; ++a) {
        double dot = poisson_bracket(circle.phis[a], circle.h).eval(x0);
        for (int b = 0; b < 2; ++b)
            dot += lambda[b] * poisson_bracket(circle.phis[a], circle.phis[b]).eval(x0);
        residual = std::max(residual, std::abs(dot));
    }

    std::vector<double> dts{0.1, 0.05, 0.025};
    std::vector<double> drifts;
    for (double dt : dts) {
        const trajectory t = integrate_constrained(
            circle, multiplier_source::auto_second_class(), x0, dt, std::lround(2.5 / dt));
        double m = 0.0;
        for (double d : t.drift) m = std::max(m, d);
        drifts.push_back(m);
    }
    const double order = loglog_slope(dts, drifts);

    const bool pass = worst_identity <= 1e-12 && verdicts_ok && residual <= 1e-9 &&
                      order >= 3.5;
    report(9, "classical constraint analysis", pass,
           "identities=" + fmt(worst_identity) + " verdicts=" +
               (verdicts_ok ? "ok" : "WRONG") + " multiplier-residual=" + fmt(residual) +
               " drift-order=" + fmt(order) +
               " thresholds: 1e-12, exact verdicts, 1e-9, >=3.5");
}

} // namespace

int main() {
    criterion_1_rotation_pair();
    criterion_2_oscillator_kernel();
    criterion_3_germ_limit();
    criterion_4_projected_product();
    criterion_5_strength_resolution();
    criterion_6_coherent_toolkit();
    criterion_7_lattice_propagator();
    criterion_8_first_order_insufficiency();
    criterion_9_classical_analysis();
    if (failures == 0)
        std::printf("all 9 acceptance criteria PASS\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}

#include "projq/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "projq/errors.hpp"
#include "projq/fock.hpp"
#include "projq/quadrature.hpp"

namespace projq {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_grid_trust(const hilbert_space& space, const phase_grid& grid,
                      const tolerances& tol) {
    // Grids use the relaxed policy: every node's Poisson mean must stay below
    // grid_mean_fraction * D, otherwise corner states overrun the cutoff and
    // the quadrature silently degrades.
    const double corner = grid.radius * grid.radius; // max (p^2+q^2)/2 on the square
    if (corner > tol.grid_mean_fraction * space.cutoff) {
        std::ostringstream msg;
        msg << "grid radius " << grid.radius << " puts corner nodes at Poisson mean "
            << corner << " > " << tol.grid_mean_fraction << " * " << space.cutoff
            << "; enlarge the cutoff or shrink the grid";
        throw trust_error(msg.str());
    }
}

struct lattice_core {
    matrix s;            // coherent states on the grid, one column per node
    cvector endpoint_to; // |z_to>
    cvector endpoint_from;
    rvector scaled_weights; // w_i / (2 pi)
};

lattice_core build_core(const hilbert_space& space, const phase_grid& grid,
                        coherent_label to, coherent_label from, const tolerances& tol) {
    check_grid_trust(space, grid, tol);
    lattice_core core;
    core.s = coherent_batch(space, grid.nodes, false, tol);
    core.endpoint_to = coherent_state(space, to, tol).amplitudes;
    core.endpoint_from = coherent_state(space, from, tol).amplitudes;
    core.scaled_weights.resize(static_cast<Eigen::Index>(grid.weights.size()));
    for (std::size_t i = 0; i < grid.weights.size(); ++i)
        core.scaled_weights(static_cast<Eigen::Index>(i)) = grid.weights[i] / two_pi;
    return core;
}

// Value of the N-slice lattice sum with per-step operator A:
//   <z_to| A S W S^dag A ... A |z_from>   (N factors of A, N-1 grid sums).
// Associativity collapses each grid sum into S (W (S^dag u)). `links` counts
// the one-step kernels applied; links-1 grid resolutions sit between them.
cx lattice_value(const lattice_core& core, const matrix& a, long links) {
    cvector u = a * core.endpoint_from;
    for (long k = 1; k < links; ++k) {
        cvector coeff = core.s.adjoint() * u;
        coeff.array() *= core.scaled_weights.cast<cx>().array();
        u = a * (core.s * coeff);
    }
    return core.endpoint_to.dot(u);
}

} // namespace

phase_grid phase_grid::square(double radius, double spacing) {
    if (radius <= 0.0 || spacing <= 0.0)
        throw validation_error("phase_grid: radius and spacing must be positive");
    const int n = static_cast<int>(std::round(2.0 * radius / spacing));
    if (n < 1 || std::abs(n * spacing - 2.0 * radius) > 1e-9)
        throw validation_error("phase_grid: spacing must divide 2*radius");
    phase_grid grid;
    grid.radius = radius;
    grid.spacing = spacing;
    grid.nodes.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    grid.weights.reserve(grid.nodes.capacity());
    const double cell = spacing * spacing;
    for (int i = 0; i <= n; ++i) {
        const double p = -radius + i * spacing;
        const double cp = (i == 0 || i == n) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            const double q = -radius + j * spacing;
            const double cq = (j == 0 || j == n) ? 0.5 : 1.0;
            grid.nodes.push_back({p, q});
            grid.weights.push_back(cell * cp * cq);
        }
    }
    double total = 0.0;
    for (double w : grid.weights) total += w;
    const double area = 4.0 * radius * radius;
    if (std::abs(total - area) > 1e-12 * area)
        throw error("phase_grid: trapezoidal weights failed to sum to the covered area");
    return grid;
}

double resolution_residual(const hilbert_space& space, const phase_grid& grid,
                           int probe_level, const tolerances& tol) {
    if (space.kind != space_kind::fock)
        throw kind_error("resolution_residual requires a Fock space");
    if (probe_level < 0 || probe_level > space.cutoff - 5)
        throw input_error("resolution_residual: probe_level must lie in [0, D-5]");
    check_grid_trust(space, grid, tol);
    const matrix s = coherent_batch(space, grid.nodes, false, tol);
    const matrix probe = s.topRows(probe_level + 1);
    cvector w(static_cast<Eigen::Index>(grid.weights.size()));
    for (std::size_t i = 0; i < grid.weights.size(); ++i)
        w(static_cast<Eigen::Index>(i)) = grid.weights[i] / two_pi;
    const matrix m = probe * w.asDiagonal() * probe.adjoint() -
                     matrix::Identity(probe_level + 1, probe_level + 1);
    return spectral_norm(m);
}

lattice_result lattice_propagator(const op_matrix& h, coherent_label to, coherent_label from,
                                  double t, long n, const phase_grid& grid,
                                  const tolerances& tol) {
    if (n < 1) throw input_error("lattice_propagator: need n >= 1");
    if (!h.hermitian)
        throw validation_error("lattice_propagator requires a hermitian generator");
    const lattice_core core = build_core(h.space, grid, to, from, tol);
    const double eps = t / static_cast<double>(n);
    const matrix a = matrix::Identity(h.dim(), h.dim()) - imag_unit * eps * h.entries;

    lattice_result result;
    // Endpoint links carry one-step kernels of their own: n+1 kernels wrap
    // the n interior grid resolutions.
    result.value = lattice_value(core, a, n + 1);
    result.slices = n;
    result.grid_radius = grid.radius;
    result.grid_spacing = grid.spacing;
    result.reference =
        core.endpoint_to.dot(exact_evolution(h, t).entries * core.endpoint_from);
    result.deviation = std::abs(result.value - result.reference);
    result.quadrature_limited =
        resolution_residual(h.space, grid, 0, tol) > tol.lattice_deviation;
    return result;
}

lattice_result constrained_lattice_propagator(const op_matrix& h, const constraint_set& c,
                                              double delta_sq, coherent_label to,
                                              coherent_label from, double t, long n,
                                              const phase_grid& grid,
                                              const gamma_quadrature& quad,
                                              const tolerances& tol, int threads) {
    if (n < 1) throw input_error("constrained_lattice_propagator: need n >= 1");
    require_same_space(h.space, c.space, "constrained_lattice_propagator");
    if (!h.hermitian)
        throw validation_error("constrained_lattice_propagator requires a hermitian generator");
    const lattice_core core = build_core(h.space, grid, to, from, tol);
    const double eps = t / static_cast<double>(n);

    // The soft projector is built once per run; every slice reuses it.
    const op_matrix x = sum_of_squares(c);
    const auto soft = gamma_integral_projector(x, delta_sq, quad, eps, threads);
    const matrix a =
        (matrix::Identity(h.dim(), h.dim()) - imag_unit * eps * h.entries) * soft.mat.entries;

    lattice_result result;
    // The reduced chain carries the soft projector at both endpoints, so the
    // lattice applies n+1 kernels around n grid resolutions; the extra slice
    // contributes the O(eps) drift that the refinement schedule must shrink.
    result.value = lattice_value(core, a, n + 1);
    result.slices = n;
    result.grid_radius = grid.radius;
    result.grid_spacing = grid.spacing;

    const projector sharp = spectral_projector(x, delta_sq, tol);
    const op_matrix reduced = reduced_evolution(h, sharp, t);
    result.reference = core.endpoint_to.dot(reduced.entries * core.endpoint_from);
    result.deviation = std::abs(result.value - result.reference);
    result.quadrature_limited =
        resolution_residual(h.space, grid, 0, tol) > tol.lattice_deviation;
    return result;
}

cx lambda_average_step(double phi_eigenvalue, double gamma, double a, double eta,
                       double lambda_max) {
    if (a <= 0.0 || gamma == 0.0)
        throw input_error("lambda_average_step: need a > 0 and gamma != 0");
    if (eta <= 0.0 || lambda_max <= 0.0)
        throw input_error("lambda_average_step: need positive eta and lambda_max");
    const double b = a / (4.0 * gamma); // Fresnel phase rate
    // Panels sized by the total phase swept over [0, lambda_max]; the
    // integrand is even, so the odd linear term vanishes identically and the
    // half-range integral is doubled.
    const double phase_budget = std::abs(b) * lambda_max * lambda_max;
    const int panels = std::max(8, static_cast<int>(std::ceil(phase_budget / 1.5)));
    static const quad_rule rule = gauss_legendre_rule(8);
    const double width = lambda_max / panels;
    const double phi_sq = phi_eigenvalue * phi_eigenvalue;
    cx num = 0.0, den = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        cx num_acc = 0.0, den_acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double l = mid + 0.5 * width * rule.x[i];
            const double l2 = l * l;
            const cx g = std::exp(cx(-eta * l2, -b * l2));
            den_acc += rule.w[i] * g;
            num_acc += rule.w[i] * g * (1.0 - 0.5 * a * a * l2 * phi_sq);
        }
        num += 0.5 * width * num_acc;
        den += 0.5 * width * den_acc;
    }
    return num / den;
}

lambda_average_report lambda_average_extrapolated(double phi_eigenvalue, double gamma,
                                                  double a, std::vector<double> eta_ladder) {
    if (eta_ladder.size() < 3)
        throw input_error("lambda_average_extrapolated: ladder needs >= 3 rungs");
    const double b = std::abs(a / (4.0 * gamma));
    constexpr double tail_log = 24.0; // e^{-24} tail of the Gaussian damping
    lambda_average_report report;
    report.eta_ladder = eta_ladder;
    for (double eta_tilde : eta_ladder) {
        if (eta_tilde <= 0.0)
            throw input_error("lambda_average_extrapolated: eta ladder must be positive");
        const double eta = eta_tilde * b;
        const double lambda_max = std::sqrt(tail_log / eta);
        report.values.push_back(
            lambda_average_step(phi_eigenvalue, gamma, a, eta, lambda_max));
    }
    // Quadratic Lagrange extrapolation of the last three rungs to eta = 0.
    const std::size_t m = report.values.size();
    const double e1 = eta_ladder[m - 3], e2 = eta_ladder[m - 2], e3 = eta_ladder[m - 1];
    const cx v1 = report.values[m - 3], v2 = report.values[m - 2], v3 = report.values[m - 1];
    const double c1 = (e2 * e3) / ((e1 - e2) * (e1 - e3));
    const double c2 = (e1 * e3) / ((e2 - e1) * (e2 - e3));
    const double c3 = (e1 * e2) / ((e3 - e1) * (e3 - e2));
    report.extrapolant = c1 * v1 + c2 * v2 + c3 * v3;
    return report;
}

insufficiency_report first_order_insufficiency_demo(const constraint_set& c, double delta_sq,
                                                    const std::vector<double>& eps_ladder,
                                                    double gamma) {
    if (eps_ladder.size() < 2)
        throw input_error("first_order_insufficiency_demo: ladder needs >= 2 points");
    for (double eps : eps_ladder)
        if (eps <= 0.0)
            throw input_error("first_order_insufficiency_demo: eps must be positive");
    if (delta_sq <= 0.0)
        throw input_error("first_order_insufficiency_demo: delta_sq must be positive");

    const op_matrix x = sum_of_squares(c);
    const rvector lam = hermitian_eig(x.entries).values;
    std::vector<double> physical;
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        if (lam(k) < delta_sq) physical.push_back(lam(k));
    if (physical.empty())
        throw input_error("first_order_insufficiency_demo: no spectrum below delta_sq");

    insufficiency_report report;
    report.eps_ladder = eps_ladder;
    report.gamma = gamma;
    for (double eps : eps_ladder) {
        double first = 0.0, second = 0.0;
        for (double l : physical) {
            const double phase = eps * gamma * l;
            const cx target = std::exp(imag_unit * phase);
            first = std::max(first, std::abs(cx(1.0, 0.0) - target));
            second = std::max(second, std::abs(cx(1.0, phase) - target));
        }
        report.first_order_defect.push_back(first);
        report.second_order_defect.push_back(second);
    }
    report.exact = true;
    for (double d : report.first_order_defect)
        if (d > 1e-12) report.exact = false;
    if (!report.exact) {
        report.first_order_slope = loglog_slope(eps_ladder, report.first_order_defect);
        report.second_order_slope = loglog_slope(eps_ladder, report.second_order_defect);
    }
    return report;
}

} // namespace projq

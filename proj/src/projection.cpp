#include "projq/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "projq/errors.hpp"
#include "projq/parallel.hpp"

namespace projq {

namespace {
constexpr double pi = std::numbers::pi;
}

constraint_set::constraint_set(hilbert_space sp, std::vector<op_matrix> ops,
                               double hermiticity_tol)
    : space(std::move(sp)), phis(std::move(ops)) {
    for (const auto& phi : phis) {
        require_same_space(space, phi.space, "constraint_set");
        if (!hermitian_within(phi.entries, hermiticity_tol))
            throw validation_error("constraint operator is not hermitian within tolerance");
    }
}

op_matrix sum_of_squares(const constraint_set& c) {
    if (c.phis.empty()) throw input_error("sum_of_squares: empty constraint set");
    matrix total = matrix::Zero(c.space.dim, c.space.dim);
    for (const auto& phi : c.phis) total += phi.entries * phi.entries;
    op_matrix out(c.space, std::move(total), true);
    const double lowest = hermitian_eig(out.entries).values(0);
    if (lowest < -1e-10) {
        std::ostringstream msg;
        msg << "sum_of_squares lost positivity: lowest eigenvalue " << lowest;
        throw error(msg.str());
    }
    return out;
}

double choose_delta(const op_matrix& x, delta_policy policy, double cluster_rel_gap) {
    if (policy.mode == delta_policy::kind::fixed) {
        if (policy.value <= 0.0) throw validation_error("fixed delta^2 must be positive");
        return policy.value;
    }
    if (!x.hermitian) throw validation_error("choose_delta requires a hermitian operator");
    const rvector vals = hermitian_eig(x.entries).values;
    const double scale = std::max(1.0, vals(vals.size() - 1) - vals(0));
    // Walk off the minimum cluster, then take the midpoint to the next one.
    double cluster_top = vals(0);
    for (Eigen::Index i = 1; i < vals.size(); ++i) {
        if (vals(i) - cluster_top <= cluster_rel_gap * scale) {
            cluster_top = vals(i);
            continue;
        }
        return (cluster_top + vals(i)) / 2.0;
    }
    throw degenerate_gap_error(
        "choose_delta: spectrum has no gap above its minimum cluster");
}

projector spectral_projector(const op_matrix& x, double delta_sq, const tolerances& tol) {
    if (!x.hermitian)
        throw validation_error("spectral_projector requires a hermitian operator");
    const eigensystem es = hermitian_eig(x.entries);
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        if (std::abs(es.values(i) - delta_sq) <= tol.boundary_exclusion) {
            std::ostringstream msg;
            msg << "delta^2 = " << delta_sq << " collides with eigenvalue " << es.values(i)
                << " (separation below " << tol.boundary_exclusion
                << "); move delta^2 off the spectrum";
            throw boundary_error(msg.str());
        }
    }
    projector out;
    out.delta_sq = delta_sq;
    matrix e = matrix::Zero(x.dim(), x.dim());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        if (es.values(i) > delta_sq) continue;
        const cvector v = es.vectors.col(i);
        e += v * v.adjoint();
        out.retained.push_back({es.values(i), state_vector{x.space, v}});
        ++out.rank;
    }
    out.mat = op_matrix(x.space, std::move(e), true);
    const double idem = spectral_norm(out.mat.entries * out.mat.entries - out.mat.entries);
    if (idem > tol.projector) {
        std::ostringstream msg;
        msg << "projector lost idempotence: residual " << idem;
        throw error(msg.str());
    }
    const double trace_gap = std::abs(out.mat.entries.trace().real() - out.rank);
    if (trace_gap > tol.rank_trace) {
        std::ostringstream msg;
        msg << "projector trace differs from rank by " << trace_gap;
        throw error(msg.str());
    }
    return out;
}

gamma_projector_result gamma_integral_projector(const op_matrix& x, double delta_sq,
                                                const gamma_quadrature& quad, double eps_eff,
                                                int threads) {
    if (!x.hermitian)
        throw validation_error("gamma_integral_projector requires a hermitian operator");
    if (quad.gamma_max <= 0.0 || eps_eff <= 0.0)
        throw validation_error("gamma_integral_projector needs positive gamma_max and eps");
    const eigensystem es = hermitian_eig(x.entries);
    const double lam_max = std::max(std::abs(es.values(0)),
                                    std::abs(es.values(es.values.size() - 1)));
    // Panels sized to keep the per-panel phase of the fastest oscillation small.
    const double phase_budget = quad.gamma_max * eps_eff * (lam_max + std::abs(delta_sq));
    const int panels = std::max(4, static_cast<int>(std::ceil(phase_budget / 2.0)));
    const quad_rule rule = make_rule(quad.rule, std::max(quad.nodes, 4));

    // The integrand is even in gamma, so the symmetric integral is twice the
    // half-line one; nodes are mirrored pairs by construction. The removable
    // singularity at gamma = 0 is evaluated by its limit eps*delta^2/pi.
    const double width = quad.gamma_max / panels;
    std::vector<double> diag(static_cast<std::size_t>(es.values.size()), 0.0);
    parallel_for(diag.size(), threads, [&](std::size_t k) {
        const double lam = es.values(static_cast<Eigen::Index>(k));
        double acc = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * width;
            double panel_acc = 0.0;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                const double g = mid + 0.5 * width * rule.x[i];
                double f;
                if (std::abs(g * eps_eff * delta_sq) < 1e-12)
                    f = eps_eff * delta_sq / pi;
                else
                    f = std::sin(g * eps_eff * delta_sq) / (pi * g);
                panel_acc += rule.w[i] * f * std::cos(g * eps_eff * lam);
            }
            acc += 0.5 * width * panel_acc;
        }
        diag[k] = 2.0 * acc;
    });

    gamma_projector_result out;
    out.resolution_band = pi / (quad.gamma_max * eps_eff);
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double lam = es.values(static_cast<Eigen::Index>(k));
        if (std::abs(lam - delta_sq) <= out.resolution_band)
            out.boundary_flags.push_back(lam);
    }
    cvector d(static_cast<Eigen::Index>(diag.size()));
    for (std::size_t k = 0; k < diag.size(); ++k)
        d(static_cast<Eigen::Index>(k)) = diag[k];
    matrix m = es.vectors * d.asDiagonal() * es.vectors.adjoint();
    out.mat = op_matrix(x.space, std::move(m), true, 1e-10);
    return out;
}

std::pair<bool, double> is_observable(const op_matrix& o, const projector& e, double tol) {
    require_same_space(o.space, e.mat.space, "is_observable");
    const double residual = spectral_norm(o.entries * e.mat.entries - e.mat.entries * o.entries);
    return {residual <= tol, residual};
}

std::vector<state_vector> physical_basis(const projector& e) {
    if (e.rank < 1)
        throw empty_space_error("physical_basis: projector has rank zero");
    // Retained eigenvectors are orthonormal already; a QR pass keeps the
    // basis Gram-stable even for tightly clustered eigenvalues.
    matrix cols(e.mat.space.dim, e.rank);
    for (int k = 0; k < e.rank; ++k) cols.col(k) = e.retained[k].vec.amplitudes;
    Eigen::HouseholderQR<matrix> qr(cols);
    matrix qfull = qr.householderQ() * matrix::Identity(e.mat.space.dim, e.rank);
    std::vector<state_vector> out;
    out.reserve(e.rank);
    for (int k = 0; k < e.rank; ++k)
        out.push_back({e.mat.space, qfull.col(k)});
    return out;
}

} // namespace projq

#include "projq/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "projq/errors.hpp"

namespace projq {

namespace {

double max_constraint(const std::vector<phase_polynomial>& phis, const phase_point& x) {
    double m = 0.0;
    for (const phase_polynomial& phi : phis) m = std::max(m, std::abs(phi.eval(x)));
    return m;
}

rmatrix surface_jacobian(const std::vector<phase_polynomial>& phis, int dof,
                         const phase_point& x) {
    // Columns ordered as the state vector (q_1..q_J, p_1..p_J).
    rmatrix jac(static_cast<Eigen::Index>(phis.size()), 2 * dof);
    for (std::size_t a = 0; a < phis.size(); ++a)
        for (int j = 1; j <= dof; ++j) {
            jac(static_cast<Eigen::Index>(a), j - 1) = d_dq(phis[a], j).eval(x);
            jac(static_cast<Eigen::Index>(a), dof + j - 1) = d_dp(phis[a], j).eval(x);
        }
    return jac;
}

} // namespace

constraint_system::constraint_system(phase_polynomial hamiltonian,
                                     std::vector<phase_polynomial> constraints)
    : h(std::move(hamiltonian)), phis(std::move(constraints)) {
    dof = h.dof;
    for (const phase_polynomial& phi : phis) dof = std::max(dof, phi.dof);
    if (dof < 1) throw input_error("constraint_system: need at least one degree of freedom");
    h = h.promoted(dof);
    for (phase_polynomial& phi : phis) phi = phi.promoted(dof);
    count = static_cast<int>(phis.size());
    if (count > 2 * dof)
        throw input_error("constraint_system: more constraints than phase-space dimensions");
}

std::vector<phase_point> surface_samples(const std::vector<phase_polynomial>& phis, int seeds,
                                         double tol, std::uint64_t rng_seed) {
    if (seeds < 1) throw input_error("surface_samples: need at least one seed");
    int dof = 1;
    for (const phase_polynomial& phi : phis) dof = std::max(dof, phi.dof);
    std::vector<phase_polynomial> work;
    work.reserve(phis.size());
    for (const phase_polynomial& phi : phis) work.push_back(phi.promoted(dof));

    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> box(-2.0, 2.0);

    std::vector<phase_point> points;
    points.reserve(static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) {
        phase_point x;
        x.q = rvector::NullaryExpr(dof, [&](Eigen::Index) { return box(rng); });
        x.p = rvector::NullaryExpr(dof, [&](Eigen::Index) { return box(rng); });
        bool converged = work.empty() || max_constraint(work, x) <= tol;
        for (int it = 0; it < 50 && !converged; ++it) {
            rvector f(static_cast<Eigen::Index>(work.size()));
            for (std::size_t a = 0; a < work.size(); ++a)
                f(static_cast<Eigen::Index>(a)) = work[a].eval(x);
            const rmatrix jac = surface_jacobian(work, dof, x);
            // Minimum-norm Gauss-Newton step.
            const rvector step = jac.completeOrthogonalDecomposition().solve(f);
            for (int j = 0; j < dof; ++j) {
                x.q(j) -= step(j);
                x.p(j) -= step(dof + j);
            }
            if (!x.q.allFinite() || !x.p.allFinite() || x.q.norm() + x.p.norm() > 1e8) break;
            converged = max_constraint(work, x) <= tol;
        }
        if (converged) points.push_back(std::move(x));
    }
    if (2 * points.size() < static_cast<std::size_t>(seeds))
        throw surface_error("surface_samples: more than half the seeds failed to converge");
    return points;
}

rmatrix bracket_matrix(const std::vector<phase_polynomial>& phis, const phase_point& x) {
    const Eigen::Index a = static_cast<Eigen::Index>(phis.size());
    rmatrix b = rmatrix::Zero(a, a);
    for (Eigen::Index i = 0; i < a; ++i)
        for (Eigen::Index j = i + 1; j < a; ++j) {
            const double value =
                poisson_bracket(phis[static_cast<std::size_t>(i)],
                                phis[static_cast<std::size_t>(j)])
                    .eval(x);
            b(i, j) = value;
            b(j, i) = -value;
        }
    return b;
}

const char* verdict_name(constraint_verdict v) {
    switch (v) {
    case constraint_verdict::first_class_closed: return "first-class-closed";
    case constraint_verdict::first_class_open: return "first-class-open";
    case constraint_verdict::second_class: return "second-class";
    case constraint_verdict::mixed: return "mixed";
    case constraint_verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Best constant-coefficient fit of target ~ sum_g c^g phi_g over the monomial
// basis, then an exact polynomial residual; `closed` means residual below tol.
bool closes_on_constraints(const phase_polynomial& target,
                           const std::vector<phase_polynomial>& phis, double fit_tol) {
    std::vector<std::vector<int>> keys;
    auto collect = [&keys](const phase_polynomial& poly) {
        for (const auto& [key, coeff] : poly.terms) keys.push_back(key);
    };
    collect(target);
    for (const phase_polynomial& phi : phis) collect(phi);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    const Eigen::Index rows = static_cast<Eigen::Index>(keys.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(phis.size());
    rmatrix m = rmatrix::Zero(rows, cols);
    rvector rhs = rvector::Zero(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::vector<int>& key = keys[static_cast<std::size_t>(r)];
        if (auto it = target.terms.find(key); it != target.terms.end()) rhs(r) = it->second;
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& terms = phis[static_cast<std::size_t>(c)].terms;
            if (auto it = terms.find(key); it != terms.end()) m(r, c) = it->second;
        }
    }
    const rvector fit = m.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    phase_polynomial residual = target;
    for (Eigen::Index c = 0; c < cols; ++c)
        residual = residual - fit(c) * phis[static_cast<std::size_t>(c)];
    return max_coeff(residual) <= fit_tol;
}

} // namespace

classification_report classify(const constraint_system& system, int samples, double tol_first,
                               double tol_second, const tolerances& tol,
                               std::uint64_t rng_seed) {
    const int a = system.count;
    if (a == 0) throw input_error("classify: no constraints to classify");
    if (samples < 20) throw input_error("classify: need at least 20 surface samples");

    // Unit max coefficient per constraint, so rescaling any phi cannot move
    // the verdict.
    std::vector<phase_polynomial> hat;
    hat.reserve(static_cast<std::size_t>(a));
    for (const phase_polynomial& phi : system.phis) {
        const double scale = max_coeff(phi);
        if (scale == 0.0) throw input_error("classify: a constraint is identically zero");
        hat.push_back((1.0 / scale) * phi);
    }

    const std::vector<phase_point> points =
        surface_samples(hat, samples, tol.surface, rng_seed);
    if (points.size() < 20)
        throw surface_error("classify: fewer than 20 usable surface samples");

    std::vector<std::vector<phase_polynomial>> brackets(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        brackets[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(a),
                                                     phase_polynomial::zero(system.dof));
        for (int j = i + 1; j < a; ++j)
            brackets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                poisson_bracket(hat[static_cast<std::size_t>(i)],
                                hat[static_cast<std::size_t>(j)]);
    }
    std::vector<phase_polynomial> h_brackets;
    h_brackets.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i)
        h_brackets.push_back(poisson_bracket(hat[static_cast<std::size_t>(i)], system.h));

    classification_report report;
    report.on_surface_bracket_residuals = rmatrix::Zero(a, a);
    report.h_bracket_residuals.assign(static_cast<std::size_t>(a), 0.0);
    report.sample_count = static_cast<int>(points.size());
    report.tol_first = tol_first;
    report.tol_second = tol_second;
    report.bracket_matrix_min_singular_value = std::numeric_limits<double>::infinity();

    bool all_invertible = true; // sigma_min >= tol_second everywhere
    bool all_split = true;      // sigma_max >= tol_second and sigma_min <= tol_first everywhere
    for (const phase_point& x : points) {
        rmatrix b = rmatrix::Zero(a, a);
        for (int i = 0; i < a; ++i)
            for (int j = i + 1; j < a; ++j) {
                const double value =
                    brackets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
                b(i, j) = value;
                b(j, i) = -value;
                const double mag = std::abs(value);
                report.on_surface_bracket_residuals(i, j) =
                    std::max(report.on_surface_bracket_residuals(i, j), mag);
                report.on_surface_bracket_residuals(j, i) =
                    report.on_surface_bracket_residuals(i, j);
            }
        const auto svd = b.jacobiSvd();
        const double sigma_min = svd.singularValues().minCoeff();
        const double sigma_max = svd.singularValues().maxCoeff();
        report.bracket_matrix_min_singular_value =
            std::min(report.bracket_matrix_min_singular_value, sigma_min);
        all_invertible = all_invertible && sigma_min >= tol_second;
        all_split = all_split && sigma_max >= tol_second && sigma_min <= tol_first;
        for (int i = 0; i < a; ++i)
            report.h_bracket_residuals[static_cast<std::size_t>(i)] =
                std::max(report.h_bracket_residuals[static_cast<std::size_t>(i)],
                         std::abs(h_brackets[static_cast<std::size_t>(i)].eval(x)));
    }

    double max_phi_res = 0.0;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j)
            max_phi_res = std::max(max_phi_res, report.on_surface_bracket_residuals(i, j));
    double max_h_res = 0.0;
    for (double r : report.h_bracket_residuals) max_h_res = std::max(max_h_res, r);

    if (max_phi_res <= tol_first && max_h_res <= tol_first) {
        bool closed = true;
        for (int i = 0; i < a && closed; ++i)
            for (int j = i + 1; j < a && closed; ++j)
                closed = closes_on_constraints(
                    brackets[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], hat,
                    tol.structure_fit);
        report.verdict = closed ? constraint_verdict::first_class_closed
                                : constraint_verdict::first_class_open;
    } else if (max_phi_res <= tol_first && max_h_res > tol_first) {
        report.secondary_constraint_suspected = true;
        report.verdict = all_invertible ? constraint_verdict::second_class
                                        : constraint_verdict::inconclusive;
    } else if (all_invertible) {
        report.verdict = constraint_verdict::second_class;
    } else if (all_split) {
        report.verdict = constraint_verdict::mixed;
    } else {
        report.verdict = constraint_verdict::inconclusive;
    }
    return report;
}

std::vector<double> solve_multipliers(const constraint_system& system, const phase_point& x,
                                      const tolerances& tol) {
    const int a = system.count;
    if (a == 0) return {};
    const rmatrix b = bracket_matrix(system.phis, x);
    const auto svd = b.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues().minCoeff() < 1e-10)
        throw not_second_class_error(
            "solve_multipliers: bracket matrix is singular at the point");
    rvector rhs(a);
    for (int i = 0; i < a; ++i)
        rhs(i) = poisson_bracket(system.phis[static_cast<std::size_t>(i)], system.h).eval(x);
    const rvector lambda = -svd.solve(rhs);
    const double residual = (rhs + b * lambda).cwiseAbs().maxCoeff();
    if (residual > tol.multiplier_residual)
        throw error("solve_multipliers: phi-dot residual " + std::to_string(residual) +
                    " exceeds tolerance");
    return std::vector<double>(lambda.data(), lambda.data() + a);
}

multiplier_source multiplier_source::auto_second_class() {
    return {};
}

multiplier_source multiplier_source::scheduled(std::function<std::vector<double>(double)> fn) {
    multiplier_source out;
    out.mode = kind::scheduled;
    out.schedule = std::move(fn);
    return out;
}

namespace {

struct velocity {
    rvector qdot;
    rvector pdot;
};

phase_point advance(const phase_point& x, double s, const velocity& v) {
    return {x.q + s * v.qdot, x.p + s * v.pdot};
}

} // namespace

trajectory integrate_constrained(const constraint_system& system,
                                 const multiplier_source& source, const phase_point& x0,
                                 double dt, long steps, const tolerances& tol) {
    if (dt <= 0.0 || steps < 1)
        throw input_error("integrate_constrained: need dt > 0 and steps >= 1");
    if (x0.q.size() != system.dof || x0.p.size() != system.dof)
        throw input_error("integrate_constrained: start point has wrong dof");
    if (max_constraint(system.phis, x0) > 1e-8)
        throw input_error("integrate_constrained: start point is off the surface");

    const int dof = system.dof;
    const int a = system.count;
    std::vector<phase_polynomial> dh_dp, dh_dq;
    std::vector<std::vector<phase_polynomial>> dphi_dp(static_cast<std::size_t>(a)),
        dphi_dq(static_cast<std::size_t>(a));
    for (int j = 1; j <= dof; ++j) {
        dh_dp.push_back(d_dp(system.h, j));
        dh_dq.push_back(d_dq(system.h, j));
    }
    for (int i = 0; i < a; ++i)
        for (int j = 1; j <= dof; ++j) {
            dphi_dp[static_cast<std::size_t>(i)].push_back(
                d_dp(system.phis[static_cast<std::size_t>(i)], j));
            dphi_dq[static_cast<std::size_t>(i)].push_back(
                d_dq(system.phis[static_cast<std::size_t>(i)], j));
        }

    auto lambda_at = [&](const phase_point& x, double t) -> std::vector<double> {
        if (a == 0) return {};
        if (source.mode == multiplier_source::kind::automatic)
            return solve_multipliers(system, x, tol);
        std::vector<double> lam = source.schedule(t);
        if (static_cast<int>(lam.size()) != a)
            throw input_error("integrate_constrained: multiplier schedule has wrong length");
        return lam;
    };

    auto field = [&](const phase_point& x, double t) -> velocity {
        const std::vector<double> lam = lambda_at(x, t);
        velocity v{rvector::Zero(dof), rvector::Zero(dof)};
        for (int j = 0; j < dof; ++j) {
            double qd = dh_dp[static_cast<std::size_t>(j)].eval(x);
            double pd = -dh_dq[static_cast<std::size_t>(j)].eval(x);
            for (int i = 0; i < a; ++i) {
                qd += lam[static_cast<std::size_t>(i)] *
                      dphi_dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
                pd -= lam[static_cast<std::size_t>(i)] *
                      dphi_dq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(x);
            }
            v.qdot(j) = qd;
            v.pdot(j) = pd;
        }
        return v;
    };

    trajectory out;
    out.points.reserve(static_cast<std::size_t>(steps) + 1);
    out.drift.reserve(static_cast<std::size_t>(steps));
    out.points.push_back(x0);
    phase_point x = x0;
    for (long k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const velocity k1 = field(x, t);
        const velocity k2 = field(advance(x, 0.5 * dt, k1), t + 0.5 * dt);
        const velocity k3 = field(advance(x, 0.5 * dt, k2), t + 0.5 * dt);
        const velocity k4 = field(advance(x, dt, k3), t + dt);
        x.q += (dt / 6.0) * (k1.qdot + 2.0 * k2.qdot + 2.0 * k3.qdot + k4.qdot);
        x.p += (dt / 6.0) * (k1.pdot + 2.0 * k2.pdot + 2.0 * k3.pdot + k4.pdot);
        const double drift = max_constraint(system.phis, x);
        if (drift > tol.drift_explosion)
            throw step_size_error("integrate_constrained: constraint drift " +
                                  std::to_string(drift) + " after step " + std::to_string(k + 1));
        out.points.push_back(x);
        out.drift.push_back(drift);
    }
    return out;
}

double bracket_identity_residual(const phase_polynomial& f, const phase_polynomial& g,
                                 const phase_polynomial& h) {
    const phase_polynomial zero = phase_polynomial::zero(1);
    const double anti = max_coeff_diff(poisson_bracket(f, g) + poisson_bracket(g, f), zero);
    const double leibniz = max_coeff_diff(
        poisson_bracket(f, g * h),
        poisson_bracket(f, g) * h + g * poisson_bracket(f, h));
    const double jacobi = max_coeff_diff(
        poisson_bracket(f, poisson_bracket(g, h)) +
            poisson_bracket(g, poisson_bracket(h, f)) +
            poisson_bracket(h, poisson_bracket(f, g)),
        zero);
    return std::max({anti, leibniz, jacobi});
}

phase_polynomial random_sparse_polynomial(std::mt19937_64& rng, int dof, int degree,
                                          int monomials) {
    if (dof < 1 || degree < 0 || monomials < 1)
        throw input_error("random_sparse_polynomial: bad shape parameters");
    std::uniform_int_distribution<int> quarter(-8, 8); // dyadic coefficients k/4
    std::uniform_int_distribution<int> exponent(0, degree);
    phase_polynomial out = phase_polynomial::zero(dof);
    std::vector<int> key(static_cast<std::size_t>(2 * dof));
    while (out.terms.empty()) {
        for (int m = 0; m < monomials; ++m) {
            int budget = degree;
            for (std::size_t slot = 0; slot < key.size(); ++slot) {
                const int e = std::min(budget, exponent(rng));
                key[slot] = e;
                budget -= e;
            }
            out.add_term(key, 0.25 * quarter(rng));
        }
    }
    return out;
}

} // namespace projq

#include "projq/fock.hpp"

#include <cmath>
#include <sstream>

#include "projq/errors.hpp"

namespace projq {

namespace {

void require_fock(const hilbert_space& space, const char* what) {
    if (space.kind != space_kind::fock) {
        std::ostringstream msg;
        msg << what << " requires a Fock space, got " << space.describe();
        throw kind_error(msg.str());
    }
}

struct canonical_eigs {
    eigensystem q;
    eigensystem p;
};

canonical_eigs canonical_eigensystems(const hilbert_space& space) {
    auto [p, q] = canonical_pair(space);
    return {hermitian_eig(q.entries), hermitian_eig(p.entries)};
}

cvector coherent_from_eigs(const canonical_eigs& es, coherent_label label, int dim) {
    // e^{ipQ} |0> then e^{-iqP} on the result, each via the eigenbasis.
    cvector v = cvector::Zero(dim);
    v(0) = 1.0;
    cvector in_q = es.q.vectors.adjoint() * v;
    in_q.array() *= (imag_unit * label.p * es.q.values.cast<cx>().array()).exp();
    v = es.q.vectors * in_q;
    cvector in_p = es.p.vectors.adjoint() * v;
    in_p.array() *= (-imag_unit * label.q * es.p.values.cast<cx>().array()).exp();
    return es.p.vectors * in_p;
}

void check_point_trust(const hilbert_space& space, coherent_label label,
                       const tolerances& tol, const char* what) {
    const double mu = (label.p * label.p + label.q * label.q) / 2.0;
    const double deficit = coherent_tail(space.cutoff, mu);
    if (deficit > tol.trust_tail) {
        std::ostringstream msg;
        msg << what << ": label (" << label.p << ", " << label.q
            << ") outside the trust radius " << trust_radius(space.cutoff, tol.trust_tail)
            << " at cutoff " << space.cutoff << "; truncated norm deficit " << deficit;
        throw trust_error(msg.str());
    }
}

} // namespace

std::pair<op_matrix, op_matrix> ladder_pair(const hilbert_space& space) {
    require_fock(space, "ladder_pair");
    const int d = space.cutoff;
    matrix a = matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    matrix adag = a.adjoint();
    return {op_matrix(space, std::move(a)), op_matrix(space, std::move(adag))};
}

std::pair<op_matrix, op_matrix> canonical_pair(const hilbert_space& space) {
    auto [a, adag] = ladder_pair(space);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    matrix q = (a.entries + adag.entries) * inv_sqrt2;
    matrix p = (a.entries - adag.entries) * (-imag_unit * inv_sqrt2);
    return {op_matrix(space, std::move(p), true), op_matrix(space, std::move(q), true)};
}

double coherent_tail(int cutoff, double mu) {
    if (mu <= 0.0) return 0.0;
    // Tail P(X >= D) of Poisson(mu). The series converges fast for mu < D;
    // beyond that the tail is order one, which is all the callers need.
    if (mu >= cutoff) return 1.0;
    const double log_pmf = -mu + cutoff * std::log(mu) - std::lgamma(cutoff + 1.0);
    double term = 1.0, sum = 1.0;
    for (int k = cutoff + 1; k < cutoff + 2000; ++k) {
        term *= mu / k;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(log_pmf) * sum;
}

double trust_radius(int cutoff, double tail) {
    double lo = 0.0, hi = std::sqrt(2.0 * cutoff);
    if (coherent_tail(cutoff, hi * hi / 2.0) <= tail) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2.0;
        if (coherent_tail(cutoff, mid * mid / 2.0) <= tail)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

state_vector coherent_state(const hilbert_space& space, coherent_label label,
                            const tolerances& tol) {
    require_fock(space, "coherent_state");
    check_point_trust(space, label, tol, "coherent_state");
    const canonical_eigs es = canonical_eigensystems(space);
    cvector v = coherent_from_eigs(es, label, space.dim);
    const double norm_dev = std::abs(v.norm() - 1.0);
    if (norm_dev > tol.state_norm) {
        std::ostringstream msg;
        msg << "coherent_state norm deviates by " << norm_dev;
        throw error(msg.str());
    }
    return {space, std::move(v)};
}

matrix coherent_batch(const hilbert_space& space, const std::vector<coherent_label>& labels,
                      bool enforce_point_trust, const tolerances& tol) {
    require_fock(space, "coherent_batch");
    const canonical_eigs es = canonical_eigensystems(space);
    matrix out(space.dim, static_cast<Eigen::Index>(labels.size()));
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (enforce_point_trust)
            check_point_trust(space, labels[k], tol, "coherent_batch");
        out.col(static_cast<Eigen::Index>(k)) = coherent_from_eigs(es, labels[k], space.dim);
    }
    return out;
}

cx overlap(const state_vector& a, const state_vector& b) {
    require_same_space(a.space, b.space, "overlap");
    return a.amplitudes.dot(b.amplitudes);
}

cx coherent_overlap_formula(coherent_label bra, coherent_label ket) {
    const double dp = bra.p - ket.p;
    const double dq = bra.q - ket.q;
    const double phase = 0.5 * (bra.p + ket.p) * (bra.q - ket.q);
    return std::exp(cx(-0.25 * (dp * dp + dq * dq), phase));
}

cx lower_symbol(const op_matrix& h, coherent_label label, const tolerances& tol) {
    const state_vector z = coherent_state(h.space, label, tol);
    const cx value = z.amplitudes.dot(h.entries * z.amplitudes);
    if (h.hermitian && std::abs(value.imag()) > 1e-10) {
        std::ostringstream msg;
        msg << "lower_symbol of a hermitian operator came out complex: imag "
            << value.imag();
        throw error(msg.str());
    }
    return value;
}

double weyl_residual(const hilbert_space& space, double p, double q,
                     std::optional<int> window) {
    require_fock(space, "weyl_residual");
    const int d = space.dim;
    int top = window.value_or(d - static_cast<int>(std::ceil(4.0 * (p * p + q * q))));
    if (top > d - 1) top = d - 1;
    if (top < 0)
        throw trust_error("weyl_residual: diagnostic window is empty at this cutoff");
    const canonical_eigs es = canonical_eigensystems(space);
    const matrix uq = es.q.vectors *
                      (imag_unit * p * es.q.values.cast<cx>().array()).exp().matrix().asDiagonal() *
                      es.q.vectors.adjoint();
    const matrix up = es.p.vectors *
                      (-imag_unit * q * es.p.values.cast<cx>().array()).exp().matrix().asDiagonal() *
                      es.p.vectors.adjoint();
    const matrix lhs = uq * up;
    const matrix rhs = std::exp(imag_unit * p * q) * (up * uq);
    const matrix diff = lhs - rhs;
    return spectral_norm(diff.topLeftCorner(top + 1, top + 1));
}

Eigen::Matrix2d fubini_study_metric(const hilbert_space& space, coherent_label label,
                                    double step, const tolerances& tol) {
    require_fock(space, "fubini_study_metric");
    // All five stencil points must individually sit inside the trust radius.
    const canonical_eigs es = canonical_eigensystems(space);
    auto build = [&](double p, double q) {
        check_point_trust(space, {p, q}, tol, "fubini_study_metric");
        return coherent_from_eigs(es, {p, q}, space.dim);
    };
    const cvector center = build(label.p, label.q);
    const cvector dp = (build(label.p + step, label.q) - build(label.p - step, label.q)) /
                       (2.0 * step);
    const cvector dq = (build(label.p, label.q + step) - build(label.p, label.q - step)) /
                       (2.0 * step);
    const cx cp = center.dot(dp);
    const cx cq = center.dot(dq);
    Eigen::Matrix2d g;
    g(0, 0) = 2.0 * (dp.dot(dp).real() - std::norm(cp));
    g(1, 1) = 2.0 * (dq.dot(dq).real() - std::norm(cq));
    const double off = 2.0 * (dp.dot(dq).real() - (std::conj(cp) * cq).real());
    g(0, 1) = off;
    g(1, 0) = off;
    return g;
}

} // namespace projq

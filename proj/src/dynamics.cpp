#include "projq/dynamics.hpp"

#include <sstream>

#include "projq/errors.hpp"

namespace projq {

namespace {

matrix matrix_power(matrix base, long n) {
    matrix acc = matrix::Identity(base.rows(), base.cols());
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

} // namespace

op_matrix exact_evolution(const op_matrix& h, double t) {
    if (!h.hermitian)
        throw validation_error("exact_evolution requires a hermitian generator");
    matrix u = unitary_exp(h.entries, t);
    const double unit_dev =
        spectral_norm(u.adjoint() * u - matrix::Identity(u.rows(), u.cols()));
    if (unit_dev > 1e-10) {
        std::ostringstream msg;
        msg << "exact_evolution lost unitarity: deviation " << unit_dev;
        throw error(msg.str());
    }
    return {h.space, std::move(u)};
}

op_matrix trotter_product(const std::vector<op_matrix>& h_list, double eps) {
    if (h_list.empty()) throw input_error("trotter_product: empty generator list");
    const hilbert_space& space = h_list.front().space;
    matrix acc = matrix::Identity(space.dim, space.dim);
    for (const auto& h : h_list) {
        require_same_space(space, h.space, "trotter_product");
        if (!h.hermitian)
            throw validation_error("trotter_product requires hermitian generators");
        acc = unitary_exp(h.entries, eps) * acc;
    }
    return {space, std::move(acc)};
}

op_matrix reduced_evolution(const op_matrix& h, const projector& e, double t) {
    require_same_space(h.space, e.mat.space, "reduced_evolution");
    if (!h.hermitian)
        throw validation_error("reduced_evolution requires a hermitian generator");
    const matrix ehe = e.mat.entries * h.entries * e.mat.entries;
    matrix k = e.mat.entries * unitary_exp(ehe, t) * e.mat.entries;
    return {h.space, std::move(k)};
}

op_matrix chernoff_product(const op_matrix& h, const projector& e, double t, long n) {
    require_same_space(h.space, e.mat.space, "chernoff_product");
    if (n < 1) throw input_error("chernoff_product: need n >= 1");
    if (!h.hermitian)
        throw validation_error("chernoff_product requires a hermitian generator");
    const double eps = t / static_cast<double>(n);
    const matrix step = unitary_exp(h.entries, eps) * e.mat.entries;
    return {h.space, matrix_power(step, n)};
}

evolution_report chernoff_convergence(const op_matrix& h, const projector& e, double t,
                                      const std::vector<long>& ladder) {
    if (ladder.size() < 4)
        throw input_error("chernoff_convergence: need >= 4 doubling ladder points");
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
        if (ladder[i + 1] != 2 * ladder[i])
            throw input_error("chernoff_convergence: ladder must double at each step");

    const op_matrix reference = reduced_evolution(h, e, t);
    evolution_report report;
    report.n_values = ladder;
    for (long n : ladder)
        report.errors.push_back(
            spectral_norm(chernoff_product(h, e, t, n).entries - reference.entries));

    report.order_defined = false;
    for (double err : report.errors)
        if (err > 1e-10) report.order_defined = true;
    if (report.order_defined) {
        std::vector<double> inv_n;
        inv_n.reserve(ladder.size());
        for (long n : ladder) inv_n.push_back(1.0 / static_cast<double>(n));
        report.fitted_order = loglog_slope(inv_n, report.errors);
    }
    return report;
}

} // namespace projq

#include "projq/germ.hpp"

#include <cmath>
#include <limits>

#include "projq/errors.hpp"
#include "projq/quadrature.hpp"

namespace projq {

cx germ_quotient(coherent_label bra, coherent_label ket, double delta) {
    if (delta <= 0.0) throw input_error("germ_quotient: delta must be positive");
    const double dq = bra.q - ket.q;
    auto numerator = [&](double k) {
        const double a = k - bra.p;
        const double b = k - ket.p;
        return std::exp(cx(-0.5 * (a * a + b * b), k * dq));
    };
    auto denominator = [](double k) { return cx(std::exp(-k * k), 0.0); };
    const cx num = adaptive_simpson(numerator, -delta, delta, 1e-15 * delta);
    const cx den = adaptive_simpson(denominator, -delta, delta, 1e-15 * delta);
    return num / den;
}

germ_report germ_limit(coherent_label bra, coherent_label ket,
                       const std::vector<double>& schedule) {
    if (schedule.empty()) throw input_error("germ_limit: empty schedule");
    for (std::size_t i = 0; i + 1 < schedule.size(); ++i)
        if (schedule[i + 1] >= schedule[i])
            throw input_error("germ_limit: schedule must be strictly decreasing");
    if (schedule.back() > 1e-4 * (1.0 + 1e-12))
        throw input_error("germ_limit: schedule must end at or below 1e-4");

    germ_report report;
    report.schedule = schedule;
    for (double d : schedule) report.values.push_back(germ_quotient(bra, ket, d));

    if (schedule.size() == 1) {
        report.extrapolant = report.values[0];
        report.error_estimate = std::numeric_limits<double>::infinity();
        return report;
    }

    // Neville tableau in x = delta^2 evaluated at x = 0.
    std::vector<cx> row = report.values;
    std::vector<double> x(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) x[i] = schedule[i] * schedule[i];
    cx previous = row.back();
    for (std::size_t level = 1; level < x.size(); ++level) {
        for (std::size_t i = 0; i + level < x.size(); ++i) {
            const double xi = x[i], xk = x[i + level];
            row[i] = ((0.0 - xk) * row[i] - (0.0 - xi) * row[i + 1]) / (xi - xk);
        }
        if (level + 1 == x.size()) break;
        previous = row[0];
    }
    report.extrapolant = row[0];
    report.error_estimate = std::abs(report.extrapolant - previous);
    report.extrapolated = true;
    return report;
}

} // namespace projq

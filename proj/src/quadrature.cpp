#include "projq/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "projq/errors.hpp"

namespace projq {

namespace {

constexpr double pi = std::numbers::pi;

// Legendre P_n and derivative at x via the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace

quad_rule gauss_legendre_rule(int n) {
    if (n < 1) throw input_error("gauss_legendre_rule: need n >= 1");
    quad_rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p = 0, dp = 1;
        for (int it = 0; it < 100; ++it) {
            std::tie(p, dp) = legendre_pair(n, x);
            const double dx = -p / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        std::tie(p, dp) = legendre_pair(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return rule;
}

quad_rule tanh_sinh_rule(int n) {
    if (n < 3) throw input_error("tanh_sinh_rule: need n >= 3");
    // Symmetric nodes t_k = k*h, k = -K..K, with h sized so the outermost
    // weight has decayed to ~1e-17 (argument pi/2*sinh(K h) ~ 40).
    const int K = (n - 1) / 2;
    const double h = std::asinh(2.0 * 40.0 / pi) / K;
    quad_rule rule;
    for (int k = -K; k <= K; ++k) {
        const double t = k * h;
        const double s = pi / 2.0 * std::sinh(t);
        const double x = std::tanh(s);
        const double w = h * (pi / 2.0) * std::cosh(t) / (std::cosh(s) * std::cosh(s));
        if (w < 1e-300) continue;
        rule.x.push_back(x);
        rule.w.push_back(w);
    }
    return rule;
}

quad_rule make_rule(quad_kind kind, int n) {
    return kind == quad_kind::tanh_sinh ? tanh_sinh_rule(n) : gauss_legendre_rule(n);
}

namespace {

template <class T>
T integrate_panels_impl(const std::function<T(double)>& f, double a, double b, int panels,
                        const quad_rule& rule) {
    if (panels < 1) throw input_error("integrate_panels: need panels >= 1");
    const double width = (b - a) / panels;
    T total{};
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + width / 2.0;
        const double half = width / 2.0;
        T acc{};
        for (std::size_t k = 0; k < rule.x.size(); ++k)
            acc += rule.w[k] * f(mid + half * rule.x[k]);
        total += half * acc;
    }
    return total;
}

using cxd = std::complex<double>;

cxd adaptive_step(const std::function<cxd(double)>& f, double a, double b, cxd fa, cxd fm,
                  cxd fb, cxd whole, double tol, int depth) {
    const double m = (a + b) / 2.0;
    const double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
    const cxd flm = f(lm), frm = f(rm);
    const cxd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cxd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cxd delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

} // namespace

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        const quad_rule& rule) {
    return integrate_panels_impl<double>(f, a, b, panels, rule);
}

cxd integrate_panels(const std::function<cxd(double)>& f, double a, double b, int panels,
                     const quad_rule& rule) {
    return integrate_panels_impl<cxd>(f, a, b, panels, rule);
}

cxd adaptive_simpson(const std::function<cxd(double)>& f, double a, double b, double tol,
                     int max_depth) {
    const double m = (a + b) / 2.0;
    const cxd fa = f(a), fm = f(m), fb = f(b);
    const cxd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace projq

#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace projq {

// Nodes and weights on the reference interval [-1, 1].
struct quad_rule {
    std::vector<double> x;
    std::vector<double> w;
};

enum class quad_kind { tanh_sinh, gauss_legendre };

quad_rule gauss_legendre_rule(int n);
quad_rule tanh_sinh_rule(int n);
quad_rule make_rule(quad_kind kind, int n);

// Fixed-order panel quadrature of f over [a, b] split into `panels` equal panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels, const quad_rule& rule);
std::complex<double> integrate_panels(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, int panels, const quad_rule& rule);

// Classic adaptive Simpson with Richardson acceptance |S2-S1|/15 <= tol.
std::complex<double> adaptive_simpson(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double tol, int max_depth = 40);

} // namespace projq

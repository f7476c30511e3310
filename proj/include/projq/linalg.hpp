#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace projq {

using cx = std::complex<double>;
using matrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using rvector = Eigen::VectorXd;
using rmatrix = Eigen::MatrixXd;

inline constexpr cx imag_unit{0.0, 1.0};

double spectral_norm(const matrix& m);
double max_abs(const matrix& m);
bool hermitian_within(const matrix& m, double tol);

// Ascending eigenvalues; columns of `vectors` are the orthonormal eigenbasis.
struct eigensystem {
    rvector values;
    matrix vectors;
};

eigensystem hermitian_eig(const matrix& m);

// exp(-i t H) for hermitian H via its eigensystem; exactly unitary up to round-off.
matrix unitary_exp(const matrix& hermitian_generator, double t);
matrix unitary_exp(const eigensystem& es, double t);

// General matrix exponential (scaling-and-squaring Pade) for non-hermitian input.
matrix expm(const matrix& m);

// Least-squares slope of log(y) vs log(x); used for convergence-order fits.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace projq

#include "projq/linalg.hpp"

#include <cmath>
#include <vector>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "projq/errors.hpp"

namespace projq {

double spectral_norm(const matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<matrix> svd(m);
    return svd.singularValues()(0);
}

double max_abs(const matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool hermitian_within(const matrix& m, double tol) {
    return max_abs(m - m.adjoint()) <= tol;
}

eigensystem hermitian_eig(const matrix& m) {
    Eigen::SelfAdjointEigenSolver<matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw error("hermitian eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

matrix unitary_exp(const eigensystem& es, double t) {
    cvector phases = (-imag_unit * t * es.values.cast<cx>().array()).exp();
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

matrix unitary_exp(const matrix& hermitian_generator, double t) {
    return unitary_exp(hermitian_eig(hermitian_generator), t);
}

matrix expm(const matrix& m) {
    return m.exp();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw input_error("loglog_slope needs two aligned samples at least");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw input_error("loglog_slope needs positive samples");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw input_error("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

} // namespace projq

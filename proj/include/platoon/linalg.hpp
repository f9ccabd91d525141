#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace platoon {

using cd = std::complex<double>;

// Coefficients highest power first.
std::vector<cd> poly_roots(const std::vector<double>& coeffs);
cd poly_eval(const std::vector<double>& coeffs, cd s);

// One classical RK4 step of x' = M x, written as a matrix: x_{k+1} = P x_k.
Eigen::MatrixXd rk4_step_matrix(const Eigen::MatrixXd& M, double h);

}  // namespace platoon

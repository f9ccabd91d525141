#include "platoon/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace platoon {

std::vector<cd> poly_roots(const std::vector<double>& coeffs) {
    std::size_t lead = 0;
    while (lead < coeffs.size() && coeffs[lead] == 0.0) ++lead;
    if (coeffs.size() - lead < 2) return {};
    const int deg = static_cast<int>(coeffs.size() - lead) - 1;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int j = 0; j < deg; ++j) comp(0, j) = -coeffs[lead + 1 + static_cast<std::size_t>(j)] / coeffs[lead];
    for (int j = 1; j < deg; ++j) comp(j, j - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<cd> out;
    for (int j = 0; j < deg; ++j) out.push_back(es.eigenvalues()(j));
    return out;
}

cd poly_eval(const std::vector<double>& coeffs, cd s) {
    cd acc = 0.0;
    for (double c : coeffs) acc = acc * s + c;
    return acc;
}

Eigen::MatrixXd rk4_step_matrix(const Eigen::MatrixXd& M, double h) {
    const Eigen::MatrixXd hM = h * M;
    const Eigen::MatrixXd hM2 = hM * hM;
    const Eigen::MatrixXd hM3 = hM2 * hM;
    const Eigen::MatrixXd hM4 = hM3 * hM;
    return Eigen::MatrixXd::Identity(M.rows(), M.cols()) + hM + hM2 / 2.0 + hM3 / 6.0 + hM4 / 24.0;
}

}  // namespace platoon

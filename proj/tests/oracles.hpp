#pragma once

// Reference constructions built straight from the per-vehicle model, used to
// check the pair-coordinate assembly without sharing any of its code paths.

#include "platoon/topology.hpp"
#include "platoon/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace oracle {

// Followers in leader-relative coordinates X~_m = X_m - X_0 + offsets, stacked
// (x, v, a) per vehicle. With the leader removed the controller is
// u_i = -sum_{j in I_i} K (X~_i - X~_j), X~_0 = 0, and da~/dt = (u - a~)/tau - a0/tau - da0/dt.
inline Eigen::MatrixXd vehicle_matrix(const platoon::Topology& t, const std::vector<double>& tau, const platoon::GainVector& K) {
    const int n = t.n();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    const Eigen::RowVector3d k = K.row();
    for (int i = 1; i <= n; ++i) {
        const int r = 3 * (i - 1);
        const double ti = tau[static_cast<std::size_t>(i - 1)];
        M(r, r + 1) = 1.0;
        M(r + 1, r + 2) = 1.0;
        M(r + 2, r + 2) = -1.0 / ti;
        for (int j : t.hears(i)) {
            M.block(r + 2, r, 1, 3) -= k / ti;
            if (j > 0) M.block(r + 2, 3 * (j - 1), 1, 3) += k / ti;
        }
    }
    return M;
}

// e_1 = -X~_1, e_i = X~_{i-1} - X~_i.
inline Eigen::MatrixXd pair_transform(int n) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 1; i <= n; ++i) {
        T.block(3 * (i - 1), 3 * (i - 1), 3, 3) = -Eigen::Matrix3d::Identity();
        if (i >= 2) T.block(3 * (i - 1), 3 * (i - 2), 3, 3) = Eigen::Matrix3d::Identity();
    }
    return T;
}

inline Eigen::MatrixXd closed_loop(const platoon::Topology& t, const std::vector<double>& tau, const platoon::GainVector& K) {
    const Eigen::MatrixXd T = pair_transform(t.n());
    return T * vehicle_matrix(t, tau, K) * T.inverse();
}

inline Eigen::VectorXd forcing(const std::vector<double>& tau, double a0, double a0dot) {
    const int n = static_cast<int>(tau.size());
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * n);
    for (int i = 0; i < n; ++i) f(3 * i + 2) = -a0 / tau[static_cast<std::size_t>(i)] - a0dot;
    return pair_transform(n) * f;
}

}  // namespace oracle

#include "platoon/system.hpp"

#include "platoon/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace platoon {

namespace {

double tau_of(const std::vector<double>& tau, int m) { return tau.at(static_cast<std::size_t>(m - 1)); }

// 1/tau_{i-1}; pair (0,1) has no follower i-1, and every set attached to it is empty.
double inv_tau_prev(const std::vector<double>& tau, int i) { return i >= 2 ? 1.0 / tau_of(tau, i - 1) : 0.0; }

// [0, 0, (tau_{i-1} - tau_i) / tau_i] scaled by 1/tau_{i-1}; zero for the first pair.
Eigen::RowVector3d heterogeneity(const std::vector<double>& tau, int i) {
    if (i < 2) return Eigen::RowVector3d::Zero();
    const double tp = tau_of(tau, i - 1), ti = tau_of(tau, i);
    return {0.0, 0.0, (tp - ti) / (ti * tp)};
}

void check(const Topology& t, const std::vector<double>& tau, int i) {
    if (static_cast<int>(tau.size()) != t.n()) throw std::invalid_argument("tau length must equal n");
    if (i < 1 || i > t.n()) throw std::out_of_range("pair index out of range");
}

}  // namespace

AccumulativeGains accumulative_gains(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i) {
    check(t, tau, i);
    const Cardinalities c = cardinalities(t, i, i);
    const double w = c.I_i_le_im1 / tau_of(tau, i) + c.I_im1_ge_i * inv_tau_prev(tau, i);
    return {w * K.k, w * K.b, w * K.h + 1.0 / tau_of(tau, i)};
}

CoupledPairSystem coupled_pair(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i) {
    const AccumulativeGains g = accumulative_gains(t, tau, K, i);
    CoupledPairSystem s;
    s.A << 0, 1, 0, 0, 0, 1, -g.k, -g.b, -g.h;
    s.B << 0, 0, 1;
    s.C << 0, 0, 1;
    return s;
}

Eigen::RowVector3d gain_before(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i, int kappa) {
    check(t, tau, i);
    const Cardinalities c = cardinalities(t, i, kappa);
    const double w = c.R_im1_le_km1 * inv_tau_prev(tau, i) - c.R_i_le_km1 / tau_of(tau, i);
    return w * K.row() - heterogeneity(tau, i);
}

Eigen::RowVector3d gain_after(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i, int kappa) {
    check(t, tau, i);
    const Cardinalities c = cardinalities(t, i, kappa);
    const double w = c.R_i_ge_k / tau_of(tau, i) - c.R_im1_ge_k * inv_tau_prev(tau, i);
    return w * K.row();
}

double coupled_input(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i,
                     const std::vector<Eigen::Vector3d>& X, double a0, double a0dot) {
    check(t, tau, i);
    const Eigen::RowVector3d Kr = K.row();
    auto KX = [&](int kappa) { return Kr.dot(X.at(static_cast<std::size_t>(kappa - 1))); };
    // Sum of K X_kappa for kappa in [lo, hi].
    auto run = [&](int lo, int hi) {
        double s = 0.0;
        for (int kappa = lo; kappa <= hi; ++kappa) s += KX(kappa);
        return s;
    };
    const PairSets p = neighbor_sets(t, i);
    const double ti = tau_of(tau, i);
    const double itp = inv_tau_prev(tau, i);
    double u = 0.0;
    for (int j : p.R_im1) {
        if (j < i - 1) u += itp * run(j + 1, i - 1);
        if (j > i) u -= itp * run(i + 1, j);
    }
    for (int j : p.R_i) {
        if (j > i) u += run(i + 1, j) / ti;
        if (j < i - 1) u -= run(j + 1, i - 1) / ti;
    }
    if (i == 1) {
        const double eps1 = -a0 / ti - a0dot;
        u -= eps1;
    } else {
        const double tp = tau_of(tau, i - 1);
        double acc = 0.0;
        for (int kappa = 1; kappa <= i - 1; ++kappa) acc += X.at(static_cast<std::size_t>(kappa - 1))(2);
        u -= itp * ((tp - ti) / ti) * acc;
        u += (tp - ti) / (tp * ti) * a0;
    }
    return u;
}

Eigen::VectorXd PlatoonClosedLoop::forcing(double a0, double a0dot) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * n);
    f(2) = a0 / tau[0] + a0dot;
    for (int i = 2; i <= n; ++i)
        f(3 * (i - 1) + 2) = a0 * (1.0 / tau[static_cast<std::size_t>(i - 1)] - 1.0 / tau[static_cast<std::size_t>(i - 2)]);
    return f;
}

PlatoonClosedLoop closed_loop(const Topology& t, const std::vector<double>& tau, const GainVector& K) {
    const int n = t.n();
    PlatoonClosedLoop cl;
    cl.n = n;
    cl.tau = tau;
    cl.A = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 1; i <= n; ++i) {
        const int r = 3 * (i - 1);
        const CoupledPairSystem pair = coupled_pair(t, tau, K, i);
        cl.A.block<3, 3>(r, r) = pair.A;
        for (int kappa = 1; kappa <= n; ++kappa) {
            if (kappa == i) continue;
            const Eigen::RowVector3d g = kappa < i ? gain_before(t, tau, K, i, kappa) : gain_after(t, tau, K, i, kappa);
            cl.A.block<1, 3>(r + 2, 3 * (kappa - 1)) = g;
        }
        // Diagonal block must equal B * [k, b, h] accumulated plus the fixed chain rows.
        const AccumulativeGains g = accumulative_gains(t, tau, K, i);
        if (cl.A(r + 2, r) != -g.k || cl.A(r + 2, r + 1) != -g.b || cl.A(r + 2, r + 2) != -g.h)
            throw std::logic_error("closed_loop: diagonal block does not match the coupled pair");
    }
    return cl;
}

Eigen::MatrixXi homogeneous_coupling(const Topology& t) {
    const int n = t.n();
    Eigen::MatrixXi P = Eigen::MatrixXi::Zero(n, n);
    for (int i = 1; i <= n; ++i) {
        for (int kappa = 1; kappa <= n; ++kappa) {
            const Cardinalities c = cardinalities(t, i, kappa);
            int v = 0;
            if (kappa == i)
                v = c.I_i_le_im1 + c.I_im1_ge_i;
            else if (kappa < i)
                v = c.R_i_le_km1 - c.R_im1_le_km1;
            else
                v = c.R_im1_ge_k - c.R_i_ge_k;
            P(i - 1, kappa - 1) = v;
        }
    }
    return P;
}

PlatoonClosedLoop homogeneous_closed_loop(const Topology& t, double tau, const GainVector& K) {
    const int n = t.n();
    const LinearThirdOrder m = linear_model(tau);
    const Eigen::Matrix3d BK = m.B * K.row();
    const Eigen::MatrixXi P = homogeneous_coupling(t);
    PlatoonClosedLoop cl;
    cl.n = n;
    cl.tau.assign(static_cast<std::size_t>(n), tau);
    cl.A = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
        for (int kappa = 0; kappa < n; ++kappa) {
            Eigen::Matrix3d blk = -static_cast<double>(P(i, kappa)) * BK;
            if (i == kappa) blk += m.A;
            cl.A.block<3, 3>(3 * i, 3 * kappa) = blk;
        }
    }
    return cl;
}

}  // namespace platoon

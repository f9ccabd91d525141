#pragma once

#include "platoon/topology.hpp"

#include <Eigen/Dense>

#include <vector>

namespace platoon {

struct GainVector {
    double k = 0.0;
    double b = 0.0;
    double h = 0.0;
    Eigen::RowVector3d row() const { return {k, b, h}; }
};

struct AccumulativeGains {
    double k = 0.0;
    double b = 0.0;
    double h = 0.0;
};

// Pair index i in 1..n; tau holds followers 1..n at positions 0..n-1.
AccumulativeGains accumulative_gains(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i);

struct CoupledPairSystem {
    Eigen::Matrix3d A;
    Eigen::Vector3d B;
    Eigen::RowVector3d C;
};

CoupledPairSystem coupled_pair(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i);

// Weights applied to pair kappa's state in the input of pair i (kappa < i and kappa > i).
Eigen::RowVector3d gain_before(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i, int kappa);
Eigen::RowVector3d gain_after(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i, int kappa);

// Input of pair i from the other pairs' states (index kappa-1 holds pair kappa),
// the leader acceleration a0 and its derivative a0dot, evaluated term by term.
double coupled_input(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i,
                     const std::vector<Eigen::Vector3d>& pair_states, double a0, double a0dot);

struct PlatoonClosedLoop {
    int n = 0;
    std::vector<double> tau;
    Eigen::MatrixXd A;  // 3n x 3n, pair states stacked as (p, v, a)

    // Forcing vector for given leader acceleration and jerk.
    Eigen::VectorXd forcing(double a0, double a0dot) const;
};

PlatoonClosedLoop closed_loop(const Topology& t, const std::vector<double>& tau, const GainVector& K);

// Identical time constants only; builds I (x) A - P (x) BK.
PlatoonClosedLoop homogeneous_closed_loop(const Topology& t, double tau, const GainVector& K);
Eigen::MatrixXi homogeneous_coupling(const Topology& t);

}  // namespace platoon

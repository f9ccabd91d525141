#pragma once

#include "platoon/linalg.hpp"
#include "platoon/scenario.hpp"
#include "platoon/system.hpp"
#include "platoon/topology.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace platoon {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct RationalFunction {
    std::vector<double> num;  // highest power first
    std::vector<double> den;
    cd operator()(cd s) const;
};

// 1 / (s^3 + h s^2 + b s + k) of pair i.
RationalFunction upsilon(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i);
// s^2 * upsilon: relative-acceleration output over coupled input.
RationalFunction pair_transfer(const Topology& t, const std::vector<double>& tau, const GainVector& K, int i);

struct TMatrices {
    Eigen::Vector3cd T1;
    Eigen::Matrix3cd T2;
    Eigen::Vector3cd T3;
};
TMatrices t_matrices(cd s);  // throws for s = 0

struct InitTerms {
    double theta_t = 0.0, nu_t = 0.0;
    double Theta = 0.0, Gamma = 0.0;
    double L2 = 0.0, L1 = 0.0, L0 = 0.0;
};

// pairs: initial (theta, nu, phi) of every pair, index i-1 for pair i.
InitTerms init_terms(const Topology& t, const std::vector<double>& tau, const GainVector& K,
                     const std::vector<PairInitials>& pairs, int i);

CMat mapping_matrix(const Topology& t, const std::vector<double>& tau, const GainVector& K, cd s);

struct DecoupledSignals {
    CVec a, v, p;  // per pair
    double condition = 0.0;  // 2-norm condition estimate of Q(s)
};

// Frequency-domain relative acceleration, velocity and distance error of every pair.
DecoupledSignals decoupled_signals(const Topology& t, const GainVector& K, const ScenarioSpec& spec, cd s);

// The same quantities from the resolvent of the assembled closed loop.
DecoupledSignals resolvent_signals(const Topology& t, const GainVector& K, const ScenarioSpec& spec, cd s);

// Composite Simpson integral of exp(-s t) f(t) over a uniform grid with an even interval count.
cd numerical_laplace(const std::vector<double>& t, const std::vector<double>& f, cd s);

struct CrossCheck {
    cd s;
    double transfer_error = 0.0;  // relative, Q route vs resolvent
    double laplace_error = 0.0;   // relative, Q route vs transform of the simulation
    int worst_pair = 0;
};

struct CrossReport {
    std::vector<CrossCheck> checks;
    bool pass = true;
    std::string diagnostic;
};

CrossReport cross_validate(const Topology& t, const GainVector& K, const ScenarioSpec& spec,
                           const std::vector<cd>& samples, double tol = 1e-4);

// Default evaluation points, all with real part >= 0.75.
std::vector<cd> default_samples();

}  // namespace platoon

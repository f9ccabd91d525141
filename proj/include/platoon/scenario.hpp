#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace platoon {

struct VehicleParams {
    double mass = 1.0;           // kg
    double cross_section = 1.0;  // m^2
    double drag_coeff = 1.0;
    double mech_drag = 1.0;      // kg m/s^2
    double length = 4.0;         // m
    double engine_tc = 1.0;      // s
};

struct InitialState {
    double position = 0.0;
    double velocity = 0.0;
    double acceleration = 0.0;
};

// How the leader acceleration profile a0(t) is switched on at t = 0.
//  Step:       the profile is superposed on the tabulated state as a step, so the
//              first pair starts with relative acceleration phi_1 + a0(0+).
//  Continuous: tabulated accelerations are used as they are.
enum class LeaderOnset { Step, Continuous };

struct LeaderTrajectory {
    std::vector<double> numerator;    // highest power first
    std::vector<double> denominator;  // highest power first
    double initial_velocity = 0.0;
};

struct ScenarioSpec {
    std::string name;
    int n_followers = 0;
    std::vector<VehicleParams> vehicles;    // followers 1..n
    double leader_length = 4.0;
    std::vector<InitialState> initials;     // leader first, n+1 entries
    LeaderTrajectory leader_traj;
    std::vector<double> desired_gap;        // per pair, n entries
    std::vector<double> safe_gap;           // per pair, n entries
    double horizon = 25.0;
    double step = 0.01;
    double air_density = 1.204;
    LeaderOnset onset = LeaderOnset::Step;

    std::vector<double> taus() const;
    double vehicle_length(int m) const;  // m = 0 is the leader
    double omega(int i) const;           // L_{i-1} + d_{i-1}^i
    int n_steps() const;                 // samples after t = 0
};

struct GainGrid {
    std::vector<double> k_values;
    std::vector<double> b_values;
    std::vector<double> h_values;
    std::size_t size() const { return k_values.size() * b_values.size() * h_values.size(); }
};

struct PairInitials {
    double rho = 0.0;    // x_{i-1}(0) - x_i(0)
    double nu = 0.0;
    double phi = 0.0;
    double theta = 0.0;  // rho - omega
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws ConfigError naming the violated invariant.
void validate(const ScenarioSpec& spec);

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text);
std::string serialize_scenario(const ScenarioSpec& spec);

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b);

// case_no in 1..3 selects the engine time constant set, acc_no in 1..3 the leader profile.
ScenarioSpec preset(int case_no, int acc_no);
// Accepts "caseN-accM".
ScenarioSpec preset_by_name(const std::string& name);
std::vector<std::string> preset_names();
GainGrid standard_grid();

std::vector<PairInitials> pairwise_initials(const ScenarioSpec& spec);

// Controllable canonical realization of a strictly proper a0(s).
// State starts at B so that C x(t) is the impulse response.
struct LeaderModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    int order() const { return static_cast<int>(A.rows()); }
    double accel(const Eigen::VectorXd& w) const { return C.dot(w); }
    double jerk(const Eigen::VectorXd& w) const { return (C * A).dot(w); }
    double initial_accel() const { return C.dot(B); }
};

LeaderModel realize_leader(const LeaderTrajectory& traj);

struct LeaderSamples {
    std::vector<double> a, adot, v;
};

// t_grid must be ascending, start at 0 and be uniformly spaced.
LeaderSamples leader_signals(const LeaderTrajectory& traj, const std::vector<double>& t_grid);

}  // namespace platoon

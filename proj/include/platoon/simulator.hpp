#pragma once

#include "platoon/scenario.hpp"
#include "platoon/system.hpp"
#include "platoon/topology.hpp"

#include <optional>
#include <vector>

namespace platoon {

enum class Plant {
    Linear,     // tau da/dt + a = u
    Nonlinear,  // drag model driven by the feedback-linearizing engine input
};

struct SimOptions {
    Plant plant = Plant::Linear;
    double guard = 1e9;  // any |state| above this marks the run diverged
};

// Signals on the sample grid. Follower rows are indexed 0..n-1 for vehicles 1..n,
// pair rows 0..n-1 for pairs (0,1)..(n-1,n).
struct TrajectoryBundle {
    std::vector<double> t;
    std::vector<std::vector<double>> u, a, j, v, x, c;
    std::vector<std::vector<double>> p, vrel, arel, D;
    bool diverged = false;

    int n() const { return static_cast<int>(p.size()); }
    std::size_t samples() const { return t.size(); }
};

// Absolute initial states actually used by both simulators (n+1 entries, leader
// first). The leader acceleration comes from its trajectory model; follower
// accelerations follow the scenario's onset convention.
std::vector<InitialState> simulation_start(const ScenarioSpec& spec);
std::vector<PairInitials> simulation_pair_initials(const ScenarioSpec& spec);

TrajectoryBundle simulate_vehicles(const ScenarioSpec& spec, const Topology& topo, const GainVector& K,
                                   const SimOptions& opt = {});

// Integrates the 3n pair system together with the leader model. Reusable across
// gain vectors of one scenario.
class CoupledRunner {
public:
    explicit CoupledRunner(const ScenarioSpec& spec, double guard = 1e9);

    TrajectoryBundle run(const PlatoonClosedLoop& cl, const Topology& topo, const GainVector& K) const;

    // Smallest distance error of each pair over all samples; nullopt if the run diverges.
    std::optional<std::vector<double>> min_distance_errors(const PlatoonClosedLoop& cl) const;

    const ScenarioSpec& spec() const { return spec_; }

private:
    Eigen::MatrixXd augmented(const PlatoonClosedLoop& cl) const;

    ScenarioSpec spec_;
    LeaderModel leader_;
    Eigen::VectorXd z0_;
    double guard_;
};

TrajectoryBundle simulate_coupled(const ScenarioSpec& spec, const Topology& topo, const GainVector& K);

}  // namespace platoon

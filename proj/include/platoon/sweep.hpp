#pragma once

#include "platoon/metrics.hpp"
#include "platoon/scenario.hpp"
#include "platoon/stability.hpp"
#include "platoon/stats.hpp"
#include "platoon/topology.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace platoon {

struct SweepPlan {
    std::vector<ScenarioSpec> scenarios;
    std::vector<TopologyKind> kinds = standard_kinds();
    int mpf_depth = 3;
    std::vector<Topology> custom;  // appended after the named kinds; sizes must match
    GainGrid grid = standard_grid();
    IntersectionMode metric_mode = IntersectionMode::Safe;
    MetricConfig metrics;
    bool compute_metrics = true;
    int jobs = 1;  // <= 0 uses every hardware thread
};

// The nine preset scenarios on the 1600-cell grid, with table-scaled metrics.
SweepPlan paper_plan();

GainVector grid_gain(const GainGrid& g, std::size_t cell);

struct CellResult {
    CgvClass cls = CgvClass::Unstable;
    double max_real = 0.0;    // largest eigenvalue real part
    double min_p = 0.0;       // smallest distance error over pairs and samples (stable runs)
    bool failed = false;      // an exception was caught; classified Unstable
};

struct TopologyResult {
    std::string name;
    std::vector<CellResult> cells;
    std::array<std::size_t, 4> counts{};  // indexed by CgvClass
    double sacgdi = 0.0;
    bool excluded = false;  // no cell in the metric set class, left out of the intersection
    bool has_metrics = false;
    std::array<MetricSeries, kMetricCount> metrics;
};

struct ScenarioResult {
    std::string name;
    std::vector<TopologyResult> topologies;
    SharedSet safe_set, noncolliding_set;
    std::size_t weight = 0;  // size of the metric averaging set
    double step = 0.01;      // sample spacing of the metric series
};

struct SweepResult {
    std::vector<std::string> topology_names;
    GainGrid grid;
    IntersectionMode metric_mode = IntersectionMode::Safe;
    std::vector<ScenarioResult> scenarios;
    std::uint64_t config_hash = 0;
};

SweepResult run_sweep(const SweepPlan& plan);

// Tables built from a sweep. Index order: [scenario][topology] or [topology].
struct Summary {
    std::vector<std::string> topologies, scenarios;
    std::vector<std::size_t> weights;

    std::vector<std::vector<double>> sacgdi;
    std::vector<MaybeValue> sac_pm, sac_sd, sac_cv, sac_pi;
    std::vector<int> sac_rank;

    std::array<std::vector<std::vector<MaybeValue>>, kMetricCount> acc_mean, acc_sd;
    std::array<std::vector<MaybeValue>, kMetricCount> pm, psd, cv, pi;

    std::vector<MaybeValue> safety_api, energy_pi, comfort_api;
    std::vector<int> safety_rank, energy_rank, comfort_rank;

    RankTable overall;  // criteria: SaCGDI PI, safety API, energy PI, comfort API
};

Summary summarize(const SweepResult& r);

struct Delta {
    std::string criterion;
    MaybeValue from, to, percent;
};

// Signed percentage change of every index going from topology `from` to `to`.
std::vector<Delta> compare_topologies(const Summary& s, const std::string& from, const std::string& to);

}  // namespace platoon

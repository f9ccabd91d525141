#pragma once

#include "platoon/simulator.hpp"
#include "platoon/stability.hpp"

#include <array>
#include <string>
#include <vector>

namespace platoon {

// Minimum time for the follower to close gap D under frozen relative velocity and
// acceleration; +inf if it never does. D <= 0 returns 0.
double mttc(double D, double v_rel, double a_rel);
double pmttc(double mttc_value);                    // 100 exp(-0.1 mttc), 0 at +inf
double mdrac(double D, double v_rel, double a_rel);  // >= 0

enum class MetricId { PMTTC = 0, MDRAC = 1, EEI = 2, EA = 3, EJ = 4 };
constexpr int kMetricCount = 5;
std::string metric_name(MetricId id);  // accumulative name, e.g. "AAPMTTC"
std::vector<MetricId> all_metrics();

enum class EnergySignal { Command, EngineForce };  // u_i or c_i
enum class MetricScale {
    Sum,    // sum over vehicles, plain sum over samples
    Table,  // per-vehicle mean; PMTTC and energies weighted by dt (energies also / 10)
};

struct MetricConfig {
    EnergySignal eei = EnergySignal::Command;
    MetricScale scale = MetricScale::Sum;
};

// Per-sample momentary value of each metric for one run (already scaled).
using MomentarySet = std::array<std::vector<double>, kMetricCount>;
MomentarySet momentary(const TrajectoryBundle& b, const MetricConfig& cfg, double dt);

std::vector<double> accumulate(const std::vector<double>& momentary_values);

struct MetricSeries {
    MetricId id = MetricId::PMTTC;
    std::size_t count = 0;
    std::vector<double> mom_mean, mom_sd;  // across runs, per sample
    std::vector<double> acc_mean, acc_sd;
    double final_mean() const { return acc_mean.empty() ? 0.0 : acc_mean.back(); }
    double final_sd() const { return acc_sd.empty() ? 0.0 : acc_sd.back(); }
};

// Folds runs one at a time; the result depends only on the order of add() calls.
class MetricAggregator {
public:
    MetricAggregator(MetricConfig cfg, double dt) : cfg_(cfg), dt_(dt) {}
    void add(const TrajectoryBundle& b);
    std::size_t count() const { return count_; }
    std::array<MetricSeries, kMetricCount> finish() const;

private:
    struct Welford {
        std::vector<double> mean, m2;
    };
    MetricConfig cfg_;
    double dt_;
    std::size_t count_ = 0;
    std::array<Welford, kMetricCount> mom_, acc_;
};

// Percentage of cells that are not StableSafe.
double sacgdi(const std::vector<CgvClass>& classes);

}  // namespace platoon

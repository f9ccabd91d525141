#pragma once

#include "platoon/scenario.hpp"
#include "platoon/simulator.hpp"
#include "platoon/system.hpp"

#include <complex>
#include <string>
#include <vector>

namespace platoon {

enum class CgvClass { Unstable = 0, StableColliding = 1, StableUnsafe = 2, StableSafe = 3 };

std::string class_name(CgvClass c);

struct StabilityResult {
    bool stable = false;
    double max_real = 0.0;
    std::vector<std::complex<double>> spectrum;
};

// Stable iff every eigenvalue has real part < -tol. Throws if the eigensolver fails.
StabilityResult is_internally_stable(const PlatoonClosedLoop& sys, double tol = 1e-9);

// Routh-Hurwitz test for s^3 + a2 s^2 + a1 s + a0.
bool routh_stable_cubic(double a2, double a1, double a0);

// Classification from the smallest distance error seen over all pairs and samples.
CgvClass classify_min_error(double min_p, double desired_gap, double safe_gap);
CgvClass classify_cgv(const TrajectoryBundle& bundle, const ScenarioSpec& spec, bool stable);
// Same decision from per-pair minima of a stable run.
CgvClass classify_pair_minima(const std::vector<double>& min_p, const ScenarioSpec& spec);

enum class IntersectionMode {
    Safe,          // StableSafe in every topology
    NonColliding,  // StableSafe or StableUnsafe in every topology
};

bool in_class_set(CgvClass c, IntersectionMode mode);

struct SharedSet {
    std::vector<bool> member;        // per grid cell
    std::vector<bool> excluded;      // per topology: its own set was empty
    std::size_t count() const;
};

// classes[t][g] for topology t and grid cell g.
SharedSet shared_cgvs(const std::vector<std::vector<CgvClass>>& classes, IntersectionMode mode);

}  // namespace platoon

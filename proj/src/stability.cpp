#include "platoon/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace platoon {

std::string class_name(CgvClass c) {
    switch (c) {
        case CgvClass::Unstable: return "unstable";
        case CgvClass::StableColliding: return "colliding";
        case CgvClass::StableUnsafe: return "unsafe";
        case CgvClass::StableSafe: return "safe";
    }
    return "?";
}

StabilityResult is_internally_stable(const PlatoonClosedLoop& sys, double tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
    StabilityResult r;
    r.max_real = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        r.spectrum.push_back(es.eigenvalues()(k));
        r.max_real = std::max(r.max_real, es.eigenvalues()(k).real());
    }
    r.stable = r.max_real < -tol;
    return r;
}

bool routh_stable_cubic(double a2, double a1, double a0) { return a2 > 0 && a1 > 0 && a0 > 0 && a2 * a1 > a0; }

CgvClass classify_min_error(double min_p, double desired_gap, double safe_gap) {
    if (min_p <= -desired_gap) return CgvClass::StableColliding;
    if (min_p < safe_gap - desired_gap) return CgvClass::StableUnsafe;
    return CgvClass::StableSafe;
}

CgvClass classify_pair_minima(const std::vector<double>& min_p, const ScenarioSpec& spec) {
    // Per-pair thresholds; the worst pair decides.
    CgvClass worst = CgvClass::StableSafe;
    for (std::size_t r = 0; r < min_p.size(); ++r)
        worst = std::min(worst, classify_min_error(min_p[r], spec.desired_gap.at(r), spec.safe_gap.at(r)));
    return worst;
}

CgvClass classify_cgv(const TrajectoryBundle& b, const ScenarioSpec& spec, bool stable) {
    if (!stable || b.diverged) return CgvClass::Unstable;
    std::vector<double> lo;
    for (const auto& row : b.p) lo.push_back(row.empty() ? 0.0 : *std::min_element(row.begin(), row.end()));
    return classify_pair_minima(lo, spec);
}

bool in_class_set(CgvClass c, IntersectionMode mode) {
    return mode == IntersectionMode::Safe ? c == CgvClass::StableSafe
                                          : (c == CgvClass::StableSafe || c == CgvClass::StableUnsafe);
}

std::size_t SharedSet::count() const { return static_cast<std::size_t>(std::count(member.begin(), member.end(), true)); }

SharedSet shared_cgvs(const std::vector<std::vector<CgvClass>>& classes, IntersectionMode mode) {
    SharedSet out;
    if (classes.empty()) return out;
    const std::size_t g = classes.front().size();
    out.member.assign(g, true);
    out.excluded.assign(classes.size(), false);
    for (std::size_t t = 0; t < classes.size(); ++t) {
        if (classes[t].size() != g) throw std::invalid_argument("shared_cgvs: grids differ in size");
        const bool any = std::any_of(classes[t].begin(), classes[t].end(), [&](CgvClass c) { return in_class_set(c, mode); });
        if (!any) {
            out.excluded[t] = true;
            continue;
        }
        for (std::size_t k = 0; k < g; ++k)
            if (!in_class_set(classes[t][k], mode)) out.member[k] = false;
    }
    // Nothing left to intersect: every topology was excluded.
    if (std::all_of(out.excluded.begin(), out.excluded.end(), [](bool e) { return e; })) out.member.assign(g, false);
    return out;
}

}  // namespace platoon

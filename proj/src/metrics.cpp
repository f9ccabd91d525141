#include "platoon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace platoon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double mttc(double D, double v, double a) {
    if (D <= 0) return 0.0;
    if (std::abs(a) < 1e-9) return v < 0 ? D / -v : kInf;
    // Roots of D + v t + a t^2 / 2 = 0.
    const double disc = v * v - 2.0 * a * D;
    if (disc < 0) return kInf;
    const double r = std::sqrt(disc);
    // Stable form avoids cancellation when one root is tiny.
    const double q = -(v + std::copysign(r, v));
    double best = kInf;
    for (double t : {q / a, q != 0.0 ? 2.0 * D / q : kInf})
        if (t > 0 && t < best) best = t;
    return best;
}

double pmttc(double m) { return std::isinf(m) ? 0.0 : 100.0 * std::exp(-0.1 * m); }

double mdrac(double D, double v, double a) {
    if (v < 0) return v * v / (2.0 * D);
    if (v > 0 && a < 0) return -a;
    return 0.0;
}

std::string metric_name(MetricId id) {
    switch (id) {
        case MetricId::PMTTC: return "AAPMTTC";
        case MetricId::MDRAC: return "AAMDRAC";
        case MetricId::EEI: return "AAMEEI";
        case MetricId::EA: return "AAMEA";
        case MetricId::EJ: return "AAMEJ";
    }
    return "?";
}

std::vector<MetricId> all_metrics() { return {MetricId::PMTTC, MetricId::MDRAC, MetricId::EEI, MetricId::EA, MetricId::EJ}; }

MomentarySet momentary(const TrajectoryBundle& b, const MetricConfig& cfg, double dt) {
    const int n = b.n();
    const std::size_t T = b.samples();
    MomentarySet out;
    for (auto& v : out) v.assign(T, 0.0);
    const bool table = cfg.scale == MetricScale::Table;
    const double per = table ? 1.0 / n : 1.0;
    const double w_pm = table ? per * dt : 1.0;
    const double w_md = per;
    const double w_en = table ? per * dt / 10.0 : 1.0;
    for (int i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(i);
        const auto& eei = cfg.eei == EnergySignal::Command ? b.u[r] : b.c[r];
        for (std::size_t k = 0; k < T; ++k) {
            const double D = b.D[r][k], v = b.vrel[r][k], a = b.arel[r][k];
            out[0][k] += w_pm * pmttc(mttc(D, v, a));
            out[1][k] += w_md * mdrac(D, v, a);
            out[2][k] += w_en * eei[k] * eei[k];
            out[3][k] += w_en * b.a[r][k] * b.a[r][k];
            out[4][k] += w_en * b.j[r][k] * b.j[r][k];
        }
    }
    return out;
}

std::vector<double> accumulate(const std::vector<double>& m) {
    std::vector<double> out(m.size());
    double s = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) out[k] = (s += m[k]);
    return out;
}

void MetricAggregator::add(const TrajectoryBundle& b) {
    if (b.diverged) throw std::invalid_argument("MetricAggregator: diverged run");
    const MomentarySet m = momentary(b, cfg_, dt_);
    ++count_;
    const double c = static_cast<double>(count_);
    auto update = [&](Welford& w, const std::vector<double>& x) {
        if (w.mean.empty()) {
            w.mean.assign(x.size(), 0.0);
            w.m2.assign(x.size(), 0.0);
        }
        if (w.mean.size() != x.size()) throw std::invalid_argument("MetricAggregator: runs differ in length");
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double d = x[k] - w.mean[k];
            w.mean[k] += d / c;
            w.m2[k] += d * (x[k] - w.mean[k]);
        }
    };
    for (std::size_t id = 0; id < kMetricCount; ++id) {
        update(mom_[id], m[id]);
        update(acc_[id], accumulate(m[id]));
    }
}

std::array<MetricSeries, kMetricCount> MetricAggregator::finish() const {
    std::array<MetricSeries, kMetricCount> out;
    auto sd = [&](const Welford& w) {
        std::vector<double> s(w.m2.size(), 0.0);
        if (count_ > 1)
            for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::sqrt(std::max(0.0, w.m2[k] / static_cast<double>(count_ - 1)));
        return s;
    };
    for (int id = 0; id < kMetricCount; ++id) {
        const auto u = static_cast<std::size_t>(id);
        out[u].id = static_cast<MetricId>(id);
        out[u].count = count_;
        out[u].mom_mean = mom_[u].mean;
        out[u].mom_sd = sd(mom_[u]);
        out[u].acc_mean = acc_[u].mean;
        out[u].acc_sd = sd(acc_[u]);
    }
    return out;
}

double sacgdi(const std::vector<CgvClass>& classes) {
    if (classes.empty()) throw std::invalid_argument("sacgdi: no gain vectors");
    const auto safe = std::count(classes.begin(), classes.end(), CgvClass::StableSafe);
    return 100.0 * (1.0 - static_cast<double>(safe) / static_cast<double>(classes.size()));
}

}  // namespace platoon

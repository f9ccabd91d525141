#include "platoon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace platoon {

Pooled pooled(const std::vector<GroupStat>& g) {
    if (g.empty()) throw std::invalid_argument("pooled: no groups");
    double sw = 0.0, swm = 0.0, dof = 0.0, ss = 0.0;
    for (const auto& x : g) {
        if (x.weight < 1) throw std::invalid_argument("pooled: weight must be >= 1");
        sw += x.weight;
        swm += x.weight * x.mean;
        dof += x.weight - 1.0;
        ss += (x.weight - 1.0) * x.sd * x.sd;
    }
    if (dof <= 0) throw std::invalid_argument("pooled: no degrees of freedom for the pooled SD");
    return {swm / sw, std::sqrt(ss / dof)};
}

Pooled mean_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("mean_sd: need at least two values");
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

PerfIndex perf_index(double pm, double psd) {
    if (pm == 0.0) throw std::invalid_argument("perf_index: PM = 0 leaves CV undefined");
    const double cv = psd / pm;
    return {cv, pm + cv};
}

MaybeValue average_pi(const std::vector<MaybeValue>& pis) {
    if (pis.empty()) return std::nullopt;
    double s = 0.0;
    for (const auto& p : pis) {
        if (!p) return std::nullopt;
        s += *p;
    }
    return s / static_cast<double>(pis.size());
}

MaybeValue percent_change(MaybeValue from, MaybeValue to) {
    if (!from || !to || *from == 0.0) return std::nullopt;
    return (*to - *from) / *from * 100.0;
}

std::vector<int> rank_ascending(const std::vector<std::string>& names, const std::vector<MaybeValue>& values) {
    if (names.size() != values.size()) throw std::invalid_argument("rank_ascending: size mismatch");
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto &va = values[a], &vb = values[b];
        if (va.has_value() != vb.has_value()) return va.has_value();
        if (va && vb && *va != *vb) return *va < *vb;
        return names[a] < names[b];
    });
    std::vector<int> rank(values.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<int>(r + 1);
    return rank;
}

std::vector<MaybeValue> min_max(const std::vector<MaybeValue>& v) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& x : v)
        if (x) {
            lo = std::min(lo, *x);
            hi = std::max(hi, *x);
        }
    std::vector<MaybeValue> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) out[i] = hi > lo ? (*v[i] - lo) / (hi - lo) : 0.0;
    return out;
}

RankTable normalize_and_rank(const std::vector<std::string>& names, const std::vector<std::vector<MaybeValue>>& criteria) {
    const std::size_t T = names.size();
    std::vector<bool> eligible(T, true);
    for (const auto& row : criteria) {
        if (row.size() != T) throw std::invalid_argument("normalize_and_rank: row size mismatch");
        for (std::size_t t = 0; t < T; ++t)
            if (!row[t]) eligible[t] = false;
    }
    RankTable out;
    out.names = names;
    for (const auto& row : criteria) {
        std::vector<MaybeValue> masked(T);
        for (std::size_t t = 0; t < T; ++t)
            if (eligible[t]) masked[t] = row[t];
        out.normalized.push_back(min_max(masked));
    }
    out.anv.assign(T, std::nullopt);
    for (std::size_t t = 0; t < T; ++t) {
        if (!eligible[t] || criteria.empty()) continue;
        double s = 0.0;
        for (const auto& row : out.normalized) s += *row[t];
        out.anv[t] = s / static_cast<double>(criteria.size());
    }
    out.rank = rank_ascending(names, out.anv);
    return out;
}

}  // namespace platoon

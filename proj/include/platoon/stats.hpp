#pragma once

#include <optional>
#include <string>
#include <vector>

namespace platoon {

using MaybeValue = std::optional<double>;  // nullopt renders as N.A.

struct GroupStat {
    double mean = 0.0;
    double sd = 0.0;
    double weight = 1.0;
};

struct Pooled {
    double pm = 0.0;
    double psd = 0.0;
};

// Weighted mean and pooled SD: sqrt(sum (s-1) sd^2 / sum (s-1)).
Pooled pooled(const std::vector<GroupStat>& groups);

// Mean and sample standard deviation of plain scalars.
Pooled mean_sd(const std::vector<double>& values);

struct PerfIndex {
    double cv = 0.0;
    double pi = 0.0;
};
PerfIndex perf_index(double pm, double psd);  // throws if pm == 0

MaybeValue average_pi(const std::vector<MaybeValue>& pis);

// Signed percentage change from `from` to `to`.
MaybeValue percent_change(MaybeValue from, MaybeValue to);

// Ascending ranks 1..n; N.A. last; ties broken by name.
std::vector<int> rank_ascending(const std::vector<std::string>& names, const std::vector<MaybeValue>& values);

// Min-max normalization over the present entries; a constant row maps to zeros.
std::vector<MaybeValue> min_max(const std::vector<MaybeValue>& values);

struct RankTable {
    std::vector<std::string> names;
    std::vector<std::vector<MaybeValue>> normalized;  // one row per criterion
    std::vector<MaybeValue> anv;
    std::vector<int> rank;
};

// criteria[c][t]: value of criterion c for topology t (lower is better). A topology
// missing any criterion is N.A. throughout and excluded from the normalization.
RankTable normalize_and_rank(const std::vector<std::string>& names, const std::vector<std::vector<MaybeValue>>& criteria);

}  // namespace platoon

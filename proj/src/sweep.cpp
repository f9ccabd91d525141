#include "platoon/sweep.hpp"

#include "platoon/simulator.hpp"
#include "platoon/system.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace platoon {

namespace {

template <class F>
void parallel_for(std::size_t count, int jobs, F&& body) {
    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) body(i);
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void add(const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    }
    void add(double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        add(std::string(buf));
    }
};

std::vector<Topology> plan_topologies(const SweepPlan& plan, int n) {
    std::vector<Topology> out;
    for (auto k : plan.kinds) out.push_back(build(k, n, plan.mpf_depth));
    for (const auto& t : plan.custom) {
        if (t.n() != n) throw std::invalid_argument("sweep: custom topology '" + t.name() + "' has the wrong size");
        out.push_back(t);
    }
    return out;
}

}  // namespace

SweepPlan paper_plan() {
    SweepPlan p;
    for (const auto& name : preset_names()) p.scenarios.push_back(preset_by_name(name));
    // Per-vehicle, time-weighted accumulation lands on the published magnitudes; PI = PM + CV
    // is not scale invariant, so rankings are computed on this scale.
    p.metrics.scale = MetricScale::Table;
    return p;
}

GainVector grid_gain(const GainGrid& g, std::size_t cell) {
    const std::size_t nb = g.b_values.size(), nh = g.h_values.size();
    const std::size_t ih = cell % nh, ib = (cell / nh) % nb, ik = cell / (nh * nb);
    return {g.k_values.at(ik), g.b_values.at(ib), g.h_values.at(ih)};
}

SweepResult run_sweep(const SweepPlan& plan) {
    if (plan.scenarios.empty()) throw std::invalid_argument("sweep: no scenarios");
    const std::size_t G = plan.grid.size();
    if (G == 0) throw std::invalid_argument("sweep: empty gain grid");

    SweepResult res;
    res.grid = plan.grid;
    res.metric_mode = plan.metric_mode;

    std::vector<std::vector<Topology>> topos;
    std::vector<CoupledRunner> runners;
    for (const auto& s : plan.scenarios) {
        validate(s);
        topos.push_back(plan_topologies(plan, s.n_followers));
        runners.emplace_back(s);
    }
    for (const auto& t : topos.front()) res.topology_names.push_back(t.name());
    const std::size_t S = plan.scenarios.size(), T = res.topology_names.size();
    for (const auto& ts : topos)
        if (ts.size() != T) throw std::invalid_argument("sweep: topology count differs between scenarios");

    res.scenarios.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        res.scenarios[s].name = plan.scenarios[s].name;
        res.scenarios[s].step = plan.scenarios[s].step;
        res.scenarios[s].topologies.resize(T);
        for (std::size_t t = 0; t < T; ++t) {
            res.scenarios[s].topologies[t].name = res.topology_names[t];
            res.scenarios[s].topologies[t].cells.resize(G);
        }
    }

    // Pass 1: stability and class of every cell. Each task owns one k row.
    const std::size_t nk = plan.grid.k_values.size();
    const std::size_t row = G / nk;
    parallel_for(S * T * nk, plan.jobs, [&](std::size_t task) {
        const std::size_t s = task / (T * nk), t = (task / nk) % T, ik = task % nk;
        const ScenarioSpec& spec = plan.scenarios[s];
        const Topology& topo = topos[s][t];
        const std::vector<double> tau = spec.taus();
        auto& cells = res.scenarios[s].topologies[t].cells;
        for (std::size_t g = ik * row; g < (ik + 1) * row; ++g) {
            CellResult& c = cells[g];
            try {
                const PlatoonClosedLoop cl = closed_loop(topo, tau, grid_gain(plan.grid, g));
                const StabilityResult st = is_internally_stable(cl);
                c.max_real = st.max_real;
                if (!st.stable) continue;
                const auto mins = runners[s].min_distance_errors(cl);
                if (!mins) continue;
                c.min_p = *std::min_element(mins->begin(), mins->end());
                c.cls = classify_pair_minima(*mins, spec);
            } catch (const std::exception&) {
                c.cls = CgvClass::Unstable;
                c.failed = true;
            }
        }
    });

    for (auto& sr : res.scenarios) {
        std::vector<std::vector<CgvClass>> classes;
        for (auto& tr : sr.topologies) {
            tr.counts = {};
            std::vector<CgvClass> cl;
            for (const auto& c : tr.cells) {
                ++tr.counts[static_cast<std::size_t>(c.cls)];
                cl.push_back(c.cls);
            }
            tr.sacgdi = sacgdi(cl);
            classes.push_back(std::move(cl));
        }
        sr.safe_set = shared_cgvs(classes, IntersectionMode::Safe);
        sr.noncolliding_set = shared_cgvs(classes, IntersectionMode::NonColliding);
        const SharedSet& m = plan.metric_mode == IntersectionMode::Safe ? sr.safe_set : sr.noncolliding_set;
        sr.weight = m.count();
        for (std::size_t t = 0; t < T; ++t) sr.topologies[t].excluded = m.excluded[t];
    }

    // Pass 2: metrics over the shared set, one task per (scenario, topology), cells in grid order.
    if (plan.compute_metrics) {
        parallel_for(S * T, plan.jobs, [&](std::size_t task) {
            const std::size_t s = task / T, t = task % T;
            ScenarioResult& sr = res.scenarios[s];
            TopologyResult& tr = sr.topologies[t];
            if (tr.excluded || sr.weight == 0) return;
            const SharedSet& m = plan.metric_mode == IntersectionMode::Safe ? sr.safe_set : sr.noncolliding_set;
            const ScenarioSpec& spec = plan.scenarios[s];
            MetricAggregator agg(plan.metrics, spec.step);
            for (std::size_t g = 0; g < G; ++g) {
                if (!m.member[g]) continue;
                const GainVector K = grid_gain(plan.grid, g);
                agg.add(runners[s].run(closed_loop(topos[s][t], spec.taus(), K), topos[s][t], K));
            }
            tr.metrics = agg.finish();
            tr.has_metrics = true;
        });
    }

    Fnv h;
    for (const auto& s : plan.scenarios) h.add(serialize_scenario(s));
    for (const auto& n : res.topology_names) h.add(n);
    for (const auto* v : {&plan.grid.k_values, &plan.grid.b_values, &plan.grid.h_values})
        for (double x : *v) h.add(x);
    h.add(std::to_string(plan.mpf_depth) + "/" + std::to_string(static_cast<int>(plan.metric_mode)) + "/" +
          std::to_string(static_cast<int>(plan.metrics.eei)) + "/" + std::to_string(static_cast<int>(plan.metrics.scale)) +
          "/" + std::to_string(plan.compute_metrics));
    res.config_hash = h.h;
    return res;
}

Summary summarize(const SweepResult& r) {
    Summary out;
    out.topologies = r.topology_names;
    const std::size_t S = r.scenarios.size(), T = out.topologies.size();
    for (const auto& sr : r.scenarios) {
        out.scenarios.push_back(sr.name);
        out.weights.push_back(sr.weight);
        std::vector<double> row;
        for (const auto& tr : sr.topologies) row.push_back(tr.sacgdi);
        out.sacgdi.push_back(row);
    }

    auto index = [](double pm, double psd, MaybeValue& cv, MaybeValue& pi) {
        if (pm == 0.0) return;
        const PerfIndex p = perf_index(pm, psd);
        cv = p.cv;
        pi = p.pi;
    };

    out.sac_pm.assign(T, std::nullopt);
    out.sac_sd = out.sac_cv = out.sac_pi = out.sac_pm;
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> col;
        for (std::size_t s = 0; s < S; ++s) col.push_back(out.sacgdi[s][t]);
        if (col.empty()) continue;
        const Pooled p = col.size() >= 2 ? mean_sd(col) : Pooled{col.front(), 0.0};
        out.sac_pm[t] = p.pm;
        out.sac_sd[t] = p.psd;
        index(p.pm, p.psd, out.sac_cv[t], out.sac_pi[t]);
    }
    out.sac_rank = rank_ascending(out.topologies, out.sac_pi);

    for (std::size_t m = 0; m < kMetricCount; ++m) {
        out.acc_mean[m].assign(S, std::vector<MaybeValue>(T));
        out.acc_sd[m].assign(S, std::vector<MaybeValue>(T));
        out.pm[m].assign(T, std::nullopt);
        out.psd[m] = out.cv[m] = out.pi[m] = out.pm[m];
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t t = 0; t < T; ++t) {
                const TopologyResult& tr = r.scenarios[s].topologies[t];
                if (!tr.has_metrics || tr.metrics[m].count == 0) continue;
                out.acc_mean[m][s][t] = tr.metrics[m].final_mean();
                out.acc_sd[m][s][t] = tr.metrics[m].final_sd();
            }
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<GroupStat> groups;
            bool na = false;
            for (std::size_t s = 0; s < S; ++s) {
                if (!out.acc_mean[m][s][t]) {
                    na = true;
                    break;
                }
                groups.push_back({*out.acc_mean[m][s][t], *out.acc_sd[m][s][t], static_cast<double>(out.weights[s])});
            }
            if (na || groups.empty()) continue;
            double sw = 0.0, dof = 0.0;
            for (const auto& g : groups) {
                sw += g.weight;
                dof += g.weight - 1.0;
            }
            Pooled p;
            if (dof > 0) {
                p = pooled(groups);
            } else {
                for (const auto& g : groups) p.pm += g.weight * g.mean / sw;
            }
            out.pm[m][t] = p.pm;
            out.psd[m][t] = p.psd;
            index(p.pm, p.psd, out.cv[m][t], out.pi[m][t]);
        }
    }
    const auto P = [&](MetricId id) { return out.pi[static_cast<std::size_t>(id)]; };
    for (std::size_t t = 0; t < T; ++t) {
        out.safety_api.push_back(average_pi({P(MetricId::PMTTC)[t], P(MetricId::MDRAC)[t]}));
        out.energy_pi.push_back(P(MetricId::EEI)[t]);
        out.comfort_api.push_back(average_pi({P(MetricId::EA)[t], P(MetricId::EJ)[t]}));
    }
    out.safety_rank = rank_ascending(out.topologies, out.safety_api);
    out.energy_rank = rank_ascending(out.topologies, out.energy_pi);
    out.comfort_rank = rank_ascending(out.topologies, out.comfort_api);
    out.overall = normalize_and_rank(out.topologies, {out.sac_pi, out.safety_api, out.energy_pi, out.comfort_api});
    return out;
}

std::vector<Delta> compare_topologies(const Summary& s, const std::string& from, const std::string& to) {
    auto find = [&](const std::string& name) {
        for (std::size_t t = 0; t < s.topologies.size(); ++t)
            if (s.topologies[t] == name) return t;
        throw std::invalid_argument("compare: topology '" + name + "' not in the sweep");
    };
    const std::size_t a = find(from), b = find(to);
    std::vector<Delta> out;
    auto add = [&](const std::string& name, const std::vector<MaybeValue>& v) {
        out.push_back({name, v[a], v[b], percent_change(v[a], v[b])});
    };
    add("SaCGDI", s.sac_pi);
    for (auto id : all_metrics()) add(metric_name(id), s.pi[static_cast<std::size_t>(id)]);
    add("safety API", s.safety_api);
    add("comfort API", s.comfort_api);
    add("ANV", s.overall.anv);
    return out;
}

}  // namespace platoon

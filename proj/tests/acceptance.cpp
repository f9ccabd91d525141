// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exits nonzero if any criterion fails.

#include "platoon/laplace.hpp"
#include "platoon/metrics.hpp"
#include "platoon/report.hpp"
#include "platoon/simulator.hpp"
#include "platoon/stability.hpp"
#include "platoon/stats.hpp"
#include "platoon/sweep.hpp"
#include "platoon/system.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace platoon;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kNames = {"PF", "MPF", "TPFL", "PFL", "TPF", "BDL", "BD", "TBPF", "TPSF", "SPTF"};

// Published SaCGDI cells, scenario-major (case1-acc1 .. case3-acc3), columns in kNames order.
const double kSacgdi[9][10] = {
    {46.062, 29.875, 29.812, 30.625, 33.188, 31.188, 51.875, 43.625, 32.063, 84.625},
    {53.500, 31.000, 30.125, 30.688, 35.125, 35.000, 68.938, 51.937, 37.250, 100},
    {53.188, 31.063, 30.063, 30.688, 35.188, 35.562, 70.000, 52.875, 38.062, 100},
    {43.250, 28.062, 27.688, 30.188, 31.437, 21.188, 46.500, 39.938, 30.563, 83.000},
    {49.750, 29.375, 27.750, 30.375, 33.250, 32.000, 65.375, 48.687, 34.188, 100},
    {49.562, 29.500, 27.812, 30.437, 33.312, 32.375, 66.312, 49.187, 34.625, 100},
    {35.125, 29.250, 29.250, 29.375, 29.125, 28.125, 38.500, 33.625, 28.438, 70.375},
    {41.438, 29.312, 29.312, 29.438, 30.312, 30.688, 56.000, 42.250, 32.375, 94.750},
    {41.438, 29.312, 29.312, 29.438, 30.312, 31.250, 57.000, 42.562, 32.812, 92.688},
};
const std::size_t kWeights[9] = {245, 497, 480, 271, 554, 539, 480, 84, 100};
const std::vector<int> kSacRank = {8, 2, 1, 3, 5, 4, 9, 7, 6, 10};
const std::vector<int> kSafetyRank = {8, 3, 1, 4, 5, 2, 9, 7, 6, 10};
const std::vector<int> kEnergyRank = {8, 2, 1, 3, 5, 4, 9, 7, 6, 10};
const std::vector<int> kComfortRank = {8, 2, 1, 3, 5, 4, 9, 7, 6, 10};
const std::vector<std::string> kOverallOrder = {"TPFL", "MPF", "PFL", "BDL", "TPF", "TPSF", "TBPF", "PF", "BD", "SPTF"};

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::size_t column(const std::string& name) {
    return static_cast<std::size_t>(std::find(kNames.begin(), kNames.end(), name) - kNames.begin());
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

// Evenly spaced picks from the stable cells of one topology.
std::vector<std::size_t> stratified_stable(const TopologyResult& tr, std::size_t count) {
    std::vector<std::size_t> stable;
    for (std::size_t g = 0; g < tr.cells.size(); ++g)
        if (tr.cells[g].cls != CgvClass::Unstable && !tr.cells[g].failed) stable.push_back(g);
    if (stable.size() <= count) return stable;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(stable[(2 * k + 1) * stable.size() / (2 * count)]);
    return out;
}

double rms_rel(const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& ref) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        for (std::size_t k = 0; k < ref[i].size(); ++k) {
            const double d = got[i][k] - ref[i][k];
            num += d * d;
            den += ref[i][k] * ref[i][k];
        }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Outcome equivalence(const SweepPlan& plan, const SweepResult& r) {
    Outcome o;
    double worst = 0.0;
    std::string where;
    std::size_t runs = 0;
    for (std::size_t s = 0; s < plan.scenarios.size(); ++s)
        for (std::size_t t = 0; t < plan.kinds.size(); ++t) {
            const Topology topo = build(plan.kinds[t], 4, plan.mpf_depth);
            for (std::size_t g : stratified_stable(r.scenarios[s].topologies[t], 25)) {
                const GainVector K = grid_gain(plan.grid, g);
                const TrajectoryBundle a = simulate_vehicles(plan.scenarios[s], topo, K);
                const TrajectoryBundle b = simulate_coupled(plan.scenarios[s], topo, K);
                ++runs;
                if (a.diverged || b.diverged) {
                    o.fail(fmt("%s/%s cell %zu diverged", r.scenarios[s].name.c_str(), kNames[t].c_str(), g));
                    continue;
                }
                const double e = std::max({rms_rel(a.p, b.p), rms_rel(a.vrel, b.vrel), rms_rel(a.arel, b.arel)});
                if (e > worst) {
                    worst = e;
                    where = r.scenarios[s].name + "/" + kNames[t] + " cell " + std::to_string(g);
                }
                if (!(e < 1e-6)) o.fail(fmt("%s/%s cell %zu: %.3g", r.scenarios[s].name.c_str(), kNames[t].c_str(), g, e));
            }
        }
    o.note(fmt("%zu runs, worst RMS relative error %.3g (%s)", runs, worst, where.c_str()));
    return o;
}

Outcome laplace(const SweepPlan& plan, const SweepResult& r) {
    Outcome o;
    const auto samples = default_samples();
    double worst = 0.0;
    std::size_t runs = 0;
    for (std::size_t t = 0; t < plan.kinds.size(); ++t) {
        const Topology topo = build(plan.kinds[t], 4, plan.mpf_depth);
        for (std::size_t j = 0; j < 10; ++j) {
            // Rotate through the scenarios so every tau case and leader profile shows up.
            const std::size_t s = (t + j) % plan.scenarios.size();
            const auto picks = stratified_stable(r.scenarios[s].topologies[t], 10);
            if (picks.empty()) continue;
            const std::size_t g = picks[j % picks.size()];
            const CrossReport rep = cross_validate(topo, grid_gain(plan.grid, g), plan.scenarios[s], samples, 1e-4);
            ++runs;
            for (const auto& c : rep.checks) worst = std::max(worst, c.laplace_error);
            if (!rep.pass)
                o.fail(fmt("%s/%s cell %zu: %s", r.scenarios[s].name.c_str(), kNames[t].c_str(), g, rep.diagnostic.c_str()));
        }
    }
    if (runs != 10 * plan.kinds.size()) o.fail(fmt("only %zu of %zu cross-checks had a stable cell", runs, 10 * plan.kinds.size()));
    o.note(fmt("%zu CGVs at %zu points each, worst relative error %.3g", runs, samples.size(), worst));
    return o;
}

Outcome routh(const SweepPlan& plan, const SweepResult& r) {
    Outcome o;
    std::size_t compared = 0, banded = 0;
    std::vector<std::string> used;
    for (std::size_t s = 0; s < plan.scenarios.size(); ++s) {
        const auto tau = plan.scenarios[s].taus();
        if (std::adjacent_find(tau.begin(), tau.end(), std::not_equal_to<>()) != tau.end()) continue;
        for (std::size_t t = 0; t < plan.kinds.size(); ++t) {
            const Topology topo = build(plan.kinds[t], 4, plan.mpf_depth);
            const Eigen::MatrixXi P = homogeneous_coupling(topo);
            // Only loops whose coupling is triangular split into one cubic per pair.
            if (!P.isLowerTriangular()) continue;
            if (s == 0) used.push_back(kNames[t]);
            for (std::size_t g = 0; g < plan.grid.size(); ++g) {
                const GainVector K = grid_gain(plan.grid, g);
                bool oracle = true, near = false;
                for (int i = 0; i < P.rows(); ++i) {
                    const double d = P(i, i), T = tau[0];
                    const double a2 = (1.0 + d * K.h) / T, a1 = d * K.b / T, a0 = d * K.k / T;
                    if (std::abs(a2 * a1 - a0) < 1e-6 || std::abs(a0) < 1e-6 || std::abs(a1) < 1e-6 || std::abs(a2) < 1e-6)
                        near = true;
                    oracle = oracle && routh_stable_cubic(a2, a1, a0);
                }
                const CellResult& c = r.scenarios[s].topologies[t].cells[g];
                if (near || std::abs(c.max_real) < 1e-6) {
                    ++banded;
                    continue;
                }
                ++compared;
                if ((c.max_real < -1e-9) != oracle)
                    o.fail(fmt("%s/%s cell %zu: eigen max Re %.3g, Routh %s", r.scenarios[s].name.c_str(), kNames[t].c_str(), g,
                               c.max_real, oracle ? "stable" : "unstable"));
            }
        }
    }
    std::string names;
    for (const auto& n : used) names += (names.empty() ? "" : " ") + n;
    o.note(fmt("%zu cells compared (%s on identical lags), %zu inside the 1e-6 band", compared, names.c_str(), banded));
    if (compared == 0) o.fail("nothing compared");
    return o;
}

Outcome sacgdi_table(const SweepResult& r, const Summary& s) {
    Outcome o;
    double worst = 0.0;
    for (std::size_t sc = 0; sc < 9; ++sc)
        for (std::size_t t = 0; t < 10; ++t) {
            const double got = s.sacgdi[sc][t];
            const double d = std::abs(got - kSacgdi[sc][t]);
            worst = std::max(worst, d);
            if (d > 2.0)
                o.fail(fmt("%s/%s: %.3f vs published %.3f (off by %.3f)", r.scenarios[sc].name.c_str(), kNames[t].c_str(), got,
                           kSacgdi[sc][t], d));
        }
    o.note(fmt("largest cell deviation %.3f points", worst));
    if (s.sac_rank != kSacRank) o.fail("PI rank " + join(s.sac_rank) + ", published " + join(kSacRank));
    else o.note("PI rank " + join(s.sac_rank));
    return o;
}

Outcome weights(const SweepResult& r) {
    Outcome o;
    const std::size_t sptf = column("SPTF");
    for (std::size_t sc = 0; sc < 9; ++sc) {
        const double got = static_cast<double>(r.scenarios[sc].weight), want = static_cast<double>(kWeights[sc]);
        const double rel = (got - want) / want * 100.0;
        const std::string line = fmt("%s: %zu vs %zu (%+.1f%%)", r.scenarios[sc].name.c_str(), r.scenarios[sc].weight, kWeights[sc], rel);
        if (std::abs(rel) > 5.0) o.fail(line);
        else o.note(line);
        // The published table marks SPTF N.A. in Case 1 and 2 with Acc. 2 and 3.
        const bool want_excluded = sc == 1 || sc == 2 || sc == 4 || sc == 5;
        if (r.scenarios[sc].topologies[sptf].excluded != want_excluded)
            o.fail(fmt("%s: SPTF excluded=%d, expected %d", r.scenarios[sc].name.c_str(), int(r.scenarios[sc].topologies[sptf].excluded),
                       int(want_excluded)));
    }
    return o;
}

Outcome rankings(const Summary& s) {
    Outcome o;
    auto row = [&](const char* what, const std::vector<int>& got, const std::vector<int>& want) {
        if (got != want) o.fail(fmt("%s rank %s, published %s", what, join(got).c_str(), join(want).c_str()));
        else o.note(fmt("%s rank matches", what));
    };
    row("SaCGDI", s.sac_rank, kSacRank);
    row("safety", s.safety_rank, kSafetyRank);
    row("energy", s.energy_rank, kEnergyRank);
    row("comfort", s.comfort_rank, kComfortRank);
    std::vector<std::string> order(10);
    for (std::size_t t = 0; t < 10; ++t) order[static_cast<std::size_t>(s.overall.rank[t] - 1)] = s.topologies[t];
    std::string got, want;
    for (std::size_t k = 0; k < 10; ++k) {
        got += (k ? " " : "") + order[k];
        want += (k ? " " : "") + kOverallOrder[k];
    }
    if (order != kOverallOrder) o.fail("overall " + got + "; published " + want);
    else o.note("overall " + got);
    return o;
}

Outcome directions(const Summary& s) {
    Outcome o;
    const std::vector<std::string> measured = {"SaCGDI", "AAPMTTC", "AAMDRAC", "AAMEEI", "AAMEA", "AAMEJ"};
    struct Expect {
        std::string from, to;
        int sign;
    };
    const std::vector<Expect> cases = {
        {"BD", "BDL", -1},  {"PF", "PFL", -1},   {"TPF", "TPFL", -1}, {"PF", "TPF", -1},    {"PF", "MPF", -1},
        {"BD", "TPSF", -1}, {"PF", "BD", +1},    {"TPF", "TPSF", +1}, {"TPSF", "TBPF", +1}, {"BD", "SPTF", +1},
        {"TPF", "PFL", -1}, {"MPF", "TPFL", -1}, {"TPSF", "BDL", -1},
    };
    std::size_t checked = 0;
    for (const auto& c : cases) {
        std::map<std::string, MaybeValue> pct;
        for (const auto& d : compare_topologies(s, c.from, c.to)) pct[d.criterion] = d.percent;
        if (c.to == "SPTF") {
            // Pooled metrics are N.A. for SPTF; the quoted figures are Case 3 / Acc. 1 means.
            const std::size_t sc = 6, a = column(c.from), b = column(c.to);
            for (std::size_t m = 0; m < kMetricCount; ++m)
                pct[metric_name(all_metrics()[m])] = percent_change(s.acc_mean[m][sc][a], s.acc_mean[m][sc][b]);
        }
        for (const auto& name : measured) {
            ++checked;
            const MaybeValue p = pct[name];
            if (!p) o.fail(fmt("%s->%s %s: N.A.", c.from.c_str(), c.to.c_str(), name.c_str()));
            else if ((*p > 0 ? 1 : -1) != c.sign || *p == 0.0)
                o.fail(fmt("%s->%s %s: %+.3f%%, expected %s", c.from.c_str(), c.to.c_str(), name.c_str(), *p, c.sign > 0 ? "increase" : "decrease"));
        }
    }
    o.note(fmt("%zu signs checked", checked));
    const std::vector<std::tuple<std::string, std::string, double>> quoted = {
        {"BD", "BDL", -45.799}, {"PF", "PFL", -34.641}, {"TPF", "TPFL", -10.455}};
    for (const auto& [from, to, want] : quoted) {
        const MaybeValue p = compare_topologies(s, from, to).front().percent;
        const std::string line = fmt("%s->%s SaCGDI %+.3f%% vs %+.3f%%", from.c_str(), to.c_str(), p ? *p : NAN, want);
        if (!p || std::abs(*p - want) > 3.0) o.fail(line);
        else o.note(line);
    }
    return o;
}

double march(double D, double v, double a, double horizon) {
    auto g = [&](double t) { return D + v * t + 0.5 * a * t * t; };
    const double dt = 1e-3;
    for (double t = dt; t <= horizon; t += dt)
        if (g(t) <= 0) {
            double lo = t - dt, hi = t;
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) <= 0 ? hi : lo) = mid;
            }
            return hi;
        }
    return std::numeric_limits<double>::infinity();
}

Outcome properties() {
    Outcome o;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // pmttc falls as the time to collision grows.
    double prev = pmttc(0.0);
    for (double t = 0.01; t < 100.0; t *= 1.1) {
        const double p = pmttc(t);
        if (!(p < prev)) o.fail(fmt("pmttc not decreasing at %.3f", t));
        prev = p;
    }
    if (pmttc(0.0) != 100.0 || pmttc(inf) != 0.0) o.fail("pmttc end points");

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> Dd(0.01, 20.0), Vv(-10.0, 10.0), Aa(-5.0, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double D = Dd(rng), v = Vv(rng), a = Aa(rng), horizon = 200.0;
        const double ref = march(D, v, a, horizon), got = mttc(D, v, a);
        if (std::isinf(ref)) {
            if (!(got > horizon - 2e-4)) o.fail(fmt("mttc(%.4f, %.4f, %.4f) = %.6f, oracle none", D, v, a, got));
        } else {
            worst = std::max(worst, std::abs(got - ref));
            if (!(std::abs(got - ref) <= 2e-4)) o.fail(fmt("mttc(%.4f, %.4f, %.4f) = %.6f, oracle %.6f", D, v, a, got, ref));
        }
    }
    o.note(fmt("mttc vs march: worst %.2g s over 1000 triples", worst));

    struct Row {
        double D, v, a, want;
    };
    for (const Row& r : {Row{10, -4, 3, 0.8}, Row{10, 2, -3, 3}, Row{10, 2, 1, 0}, Row{10, 0, -1, 0}})
        if (std::abs(mdrac(r.D, r.v, r.a) - r.want) > 1e-12) o.fail(fmt("mdrac(%g, %g, %g) != %g", r.D, r.v, r.a, r.want));

    const Pooled one = pooled({{3.5, 1.25, 7.0}});
    if (std::abs(one.pm - 3.5) > 1e-12 || std::abs(one.psd - 1.25) > 1e-12) o.fail("pooled of one group is not that group");
    const Pooled same = pooled({{2.0, 0.5, 4.0}, {6.0, 0.5, 4.0}});
    if (std::abs(same.pm - 4.0) > 1e-12 || std::abs(same.psd - 0.5) > 1e-12) o.fail("pooled of equal-weight groups");

    std::uniform_real_distribution<double> X(-3.0, 3.0);
    std::vector<double> x(500);
    for (auto& v : x) v = X(rng);
    const auto acc = accumulate(x);
    double run = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        run += x[k];
        if (std::abs(acc[k] - run) > 1e-12) {
            o.fail(fmt("prefix sum differs at %zu", k));
            break;
        }
    }

    for (double gap : {2.0, 3.0, 4.0}) {
        CgvClass last = CgvClass::StableSafe;
        for (double p = 3.0; p > -8.0; p -= 0.005) {
            const CgvClass c = classify_min_error(p, 5.0, gap);
            if (c > last) o.fail(fmt("class improved as p fell to %.3f", p));
            last = c;
        }
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> render_all(const SweepResult& r, const fs::path& dir) {
    fs::remove_all(dir);
    ReportManifest m;
    m.out_dir = dir.string();
    auto files = render_tables(r, summarize(r), m);
    for (auto& f : render_grids(r, m)) files.push_back(f);
    for (auto& f : render_plots(r, m)) files.push_back(f);
    std::vector<std::string> rel;
    for (const auto& f : files) rel.push_back(fs::relative(f, dir).string());
    return rel;
}

Outcome determinism(const SweepPlan& plan, const SweepResult& first, int first_jobs) {
    Outcome o;
    SweepPlan again = plan;
    again.jobs = first_jobs == 1 ? 3 : 1;
    const SweepResult second = run_sweep(again);
    const fs::path a = fs::temp_directory_path() / "platoon_accept_a", b = fs::temp_directory_path() / "platoon_accept_b";
    const auto fa = render_all(first, a), fb = render_all(second, b);
    if (first.config_hash != second.config_hash) o.fail("configuration hashes differ");
    if (fa != fb) o.fail("different file sets");
    std::size_t bytes = 0;
    for (std::size_t k = 0; k < std::min(fa.size(), fb.size()); ++k) {
        const std::string x = slurp(a / fa[k]), y = slurp(b / fb[k]);
        bytes += x.size();
        if (x != y) o.fail(fa[k] + " differs");
    }
    o.note(fmt("jobs %d vs %d: %zu files, %zu bytes compared", first_jobs, again.jobs, fa.size(), bytes));
    fs::remove_all(a);
    fs::remove_all(b);
    return o;
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    SweepPlan plan = paper_plan();
    plan.jobs = 3;
    const SweepResult r = run_sweep(plan);
    const Summary s = summarize(r);
    if (s.topologies != kNames) {
        std::puts("FAIL: unexpected topology column order");
        return 1;
    }
    std::printf("full sweep: %.1f s\n", std::chrono::duration<double>(clock::now() - t0).count());
    std::fflush(stdout);

    bool all = true;
    auto report = [&](int id, const char* title, const Outcome& o) {
        all = all && o.pass;
        std::printf("%s %d %s\n", o.pass ? "PASS" : "FAIL", id, title);
        for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
    };
    report(1, "per-vehicle vs coupled simulation", equivalence(plan, r));
    report(2, "frequency-domain signals vs transformed simulation", laplace(plan, r));
    report(3, "eigenvalue stability vs Routh-Hurwitz", routh(plan, r));
    report(4, "SaCGDI cells and PI rank", sacgdi_table(r, s));
    report(5, "shared-set weights and SPTF exclusions", weights(r));
    report(6, "rank rows and overall order", rankings(s));
    report(7, "directional comparisons", directions(s));
    report(8, "metric property suite", properties());
    report(9, "sweep output is independent of worker count", determinism(plan, r, plan.jobs));
    std::printf("total: %.1f s\n", std::chrono::duration<double>(clock::now() - t0).count());
    return all ? 0 : 1;
}

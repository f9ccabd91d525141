// Command-line front end: single runs, grid classification, full sweeps and reports.

#include "platoon/laplace.hpp"
#include "platoon/metrics.hpp"
#include "platoon/report.hpp"
#include "platoon/scenario.hpp"
#include "platoon/simulator.hpp"
#include "platoon/stability.hpp"
#include "platoon/sweep.hpp"
#include "platoon/system.hpp"
#include "platoon/topology.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace platoon;

namespace {

struct Options {
    std::vector<std::string> presets;
    std::vector<std::string> scenario_files;
    std::string onset;
    std::vector<std::string> topologies;
    std::vector<std::string> topology_files;
    int mpf_depth = 3;
    double k = 1.0, b = 1.0, h = 4.0;
    std::string k_values, b_values, h_values;
    std::string mode = "safe";
    std::string scale;
    std::string eei = "command";
    int jobs = 1;
    std::string out;
    bool no_plots = false, no_grids = false, series = false;
    std::string formats = "csv,json,text";
    std::string engine = "coupled";
    std::string plant = "linear";
    std::string from, to;
    int samples = 10;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

// "start:step:count" or a comma list.
std::vector<double> parse_values(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        const double start = std::stod(parts[0]), step = std::stod(parts[1]);
        const int count = std::stoi(parts[2]);
        if (count <= 0) throw ConfigError("grid range '" + text + "' has no values");
        std::vector<double> v;
        for (int i = 0; i < count; ++i) v.push_back(start + step * i);
        return v;
    }
    std::vector<double> v;
    for (const auto& p : split(text, ',')) v.push_back(std::stod(p));
    if (v.empty()) throw ConfigError("empty value list '" + text + "'");
    return v;
}

std::vector<ScenarioSpec> scenarios(const Options& o, const std::string& fallback) {
    std::vector<ScenarioSpec> out;
    std::vector<std::string> presets = o.presets;
    if (presets.empty() && o.scenario_files.empty()) presets.push_back(fallback);
    for (const auto& p : presets) {
        if (p == "paper") {
            for (const auto& n : preset_names()) out.push_back(preset_by_name(n));
        } else {
            out.push_back(preset_by_name(p));
        }
    }
    for (const auto& f : o.scenario_files) out.push_back(load_scenario(f));
    if (!o.onset.empty())
        for (auto& s : out) {
            if (o.onset == "step") s.onset = LeaderOnset::Step;
            else if (o.onset == "continuous") s.onset = LeaderOnset::Continuous;
            else throw ConfigError("unknown onset '" + o.onset + "'");
        }
    for (const auto& s : out) validate(s);
    return out;
}

ScenarioSpec single_scenario(const Options& o) {
    auto s = scenarios(o, "case1-acc1");
    if (s.size() != 1) throw ConfigError("this command takes exactly one scenario");
    return s.front();
}

std::vector<Topology> topologies(const Options& o, int n, bool default_all) {
    std::vector<Topology> out;
    std::vector<std::string> names;
    for (const auto& t : o.topologies)
        for (const auto& x : split(t, ',')) names.push_back(x);
    if (names.empty() && o.topology_files.empty() && default_all)
        for (auto k : standard_kinds()) names.push_back(kind_name(k));
    for (const auto& nm : names) out.push_back(build(kind_from_name(nm), n, o.mpf_depth));
    for (const auto& f : o.topology_files) {
        Topology t = load_edge_list(f);
        if (t.n() != n) throw ConfigError("topology file " + f + " describes " + std::to_string(t.n()) + " followers, scenario has " + std::to_string(n));
        out.push_back(t);
    }
    if (out.empty()) throw ConfigError("no topology given (--topology or --topology-file)");
    return out;
}

Topology single_topology(const Options& o, int n) {
    auto t = topologies(o, n, false);
    if (t.size() != 1) throw ConfigError("this command takes exactly one topology");
    return t.front();
}

GainGrid grid(const Options& o) {
    GainGrid g = standard_grid();
    if (!o.k_values.empty()) g.k_values = parse_values(o.k_values);
    if (!o.b_values.empty()) g.b_values = parse_values(o.b_values);
    if (!o.h_values.empty()) g.h_values = parse_values(o.h_values);
    return g;
}

SweepPlan plan(const Options& o, const std::string& fallback) {
    SweepPlan p;
    p.scenarios = scenarios(o, fallback);
    const int n = p.scenarios.front().n_followers;
    p.kinds.clear();
    p.mpf_depth = o.mpf_depth;
    for (auto& t : topologies(o, n, true)) {
        if (t.kind() == TopologyKind::Custom) p.custom.push_back(t);
        else p.kinds.push_back(t.kind());
    }
    p.grid = grid(o);
    if (o.mode == "safe") p.metric_mode = IntersectionMode::Safe;
    else if (o.mode == "noncolliding") p.metric_mode = IntersectionMode::NonColliding;
    else throw ConfigError("unknown intersection mode '" + o.mode + "'");
    // Table scale unless asked otherwise: rankings are reported on that scale.
    if (o.scale.empty() || o.scale == "table") p.metrics.scale = MetricScale::Table;
    else if (o.scale == "sum") p.metrics.scale = MetricScale::Sum;
    else throw ConfigError("unknown metric scale '" + o.scale + "'");
    if (o.eei == "command") p.metrics.eei = EnergySignal::Command;
    else if (o.eei == "force") p.metrics.eei = EnergySignal::EngineForce;
    else throw ConfigError("unknown energy signal '" + o.eei + "'");
    p.jobs = o.jobs;
    return p;
}

ReportManifest manifest(const Options& o) {
    ReportManifest m;
    m.out_dir = o.out.empty() ? default_output_dir() : o.out;
    m.csv = m.json = m.text = false;
    for (const auto& f : split(o.formats, ',')) {
        if (f == "csv") m.csv = true;
        else if (f == "json") m.json = true;
        else if (f == "text") m.text = true;
        else if (f == "svg") m.svg = true;
        else throw ConfigError("unknown format '" + f + "'");
    }
    m.svg = m.svg || !o.no_plots;
    m.grids = !o.no_grids;
    m.series = o.series;
    return m;
}

void print_tables(const SweepResult& r, const Summary& s, const std::vector<std::string>& names) {
    for (const auto& t : build_tables(r, s))
        for (const auto& n : names)
            if (t.name == n) std::cout << to_text(t) << "\n";
}

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

int cmd_simulate(const Options& o) {
    const ScenarioSpec spec = single_scenario(o);
    const Topology topo = single_topology(o, spec.n_followers);
    const GainVector K{o.k, o.b, o.h};
    const PlatoonClosedLoop cl = closed_loop(topo, spec.taus(), K);
    const StabilityResult st = is_internally_stable(cl);
    TrajectoryBundle b;
    if (o.engine == "coupled") {
        b = simulate_coupled(spec, topo, K);
    } else if (o.engine == "vehicles") {
        SimOptions so;
        if (o.plant == "nonlinear") so.plant = Plant::Nonlinear;
        else if (o.plant != "linear") throw ConfigError("unknown plant '" + o.plant + "'");
        b = simulate_vehicles(spec, topo, K, so);
    } else {
        throw ConfigError("unknown engine '" + o.engine + "'");
    }
    std::ostringstream os;
    os << "t";
    for (int i = 1; i <= b.n(); ++i) os << ",p" << i << ",vrel" << i << ",arel" << i;
    if (!b.a.empty())
        for (int i = 1; i <= b.n(); ++i) os << ",a" << i << ",u" << i << ",v" << i;
    os << "\n";
    for (std::size_t k = 0; k < b.samples(); ++k) {
        os << fmt("%.3f", b.t[k]);
        for (int i = 0; i < b.n(); ++i) os << "," << fmt("%.9g", b.p[i][k]) << "," << fmt("%.9g", b.vrel[i][k]) << "," << fmt("%.9g", b.arel[i][k]);
        if (!b.a.empty())
            for (int i = 0; i < b.n(); ++i) os << "," << fmt("%.9g", b.a[i][k]) << "," << fmt("%.9g", b.u[i][k]) << "," << fmt("%.9g", b.v[i][k]);
        os << "\n";
    }
    if (o.out.empty()) std::cout << os.str();
    else write_file(o.out, os.str());
    std::cerr << spec.name << " / " << topo.name() << " k=" << K.k << " b=" << K.b << " h=" << K.h << ": "
              << class_name(classify_cgv(b, spec, st.stable)) << " (max Re = " << fmt("%.6g", st.max_real) << ")\n";
    return 0;
}

int cmd_classify(const Options& o) {
    SweepPlan p = plan(o, "case1-acc1");
    p.compute_metrics = false;
    const SweepResult r = run_sweep(p);
    const Summary s = summarize(r);
    ReportManifest m = manifest(o);
    m.tables = {"counts", "weights", "sacgdi"};
    render_tables(r, s, m);
    render_grids(r, m);
    render_plots(r, m);  // heatmaps only: no metric series were computed
    print_tables(r, s, {"counts", "weights"});
    std::cout << "written to " << m.out_dir << "\n";
    return 0;
}

int cmd_sweep(const Options& o) {
    const SweepResult r = run_sweep(plan(o, "paper"));
    const Summary s = summarize(r);
    const ReportManifest m = manifest(o);
    const auto files = render_tables(r, s, m);
    const auto grids = render_grids(r, m);
    const auto plots = render_plots(r, m);
    print_tables(r, s, {"sacgdi", "weights", "overall"});
    std::cout << files.size() + grids.size() + plots.size() << " files written to " << m.out_dir << "\n";
    return 0;
}

int cmd_metrics(const Options& o) {
    Options q = o;
    q.series = true;
    const SweepResult r = run_sweep(plan(q, "case1-acc1"));
    const Summary s = summarize(r);
    ReportManifest m = manifest(q);
    m.tables = {"safety", "energy_comfort", "weights"};
    render_tables(r, s, m);
    render_plots(r, m);
    print_tables(r, s, {"weights", "safety", "energy_comfort"});
    std::cout << "series written to " << m.out_dir << "/tables\n";
    return 0;
}

int cmd_rank(const Options& o) {
    const SweepResult r = run_sweep(plan(o, "paper"));
    const Summary s = summarize(r);
    ReportManifest m = manifest(o);
    m.svg = false;
    m.grids = false;
    render_tables(r, s, m);
    print_tables(r, s, {"sacgdi", "safety", "energy_comfort", "overall"});
    return 0;
}

int cmd_compare(const Options& o) {
    Options q = o;
    if (q.topologies.empty() && q.topology_files.empty()) {
        // The comparison only needs both topologies, but the shared set depends on all of them.
        for (auto k : standard_kinds()) q.topologies.push_back(kind_name(k));
    }
    const SweepResult r = run_sweep(plan(q, "paper"));
    const Summary s = summarize(r);
    Table t{"compare", o.from + " -> " + o.to, {"criterion", o.from, o.to, "percent"}, {}};
    for (const auto& d : compare_topologies(s, o.from, o.to))
        t.rows.push_back({Cell::str(d.criterion), Cell::num(d.from), Cell::num(d.to), Cell::num(d.percent)});
    std::cout << to_text(t);
    return 0;
}

int cmd_validate(const Options& o) {
    const auto specs = scenarios(o, "case1-acc1");
    const GainGrid g = grid(o);
    const auto samples = default_samples();
    bool all = true;
    for (const auto& spec : specs) {
        std::cout << spec.name << "\n";
        for (const auto& topo : topologies(o, spec.n_followers, true)) {
            std::vector<std::size_t> stable;
            for (std::size_t c = 0; c < g.size(); ++c)
                if (is_internally_stable(closed_loop(topo, spec.taus(), grid_gain(g, c))).stable) stable.push_back(c);
            std::string marks;
            double worst_t = 0.0, worst_l = 0.0;
            int fails = 0;
            const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(o.samples), stable.size());
            for (std::size_t i = 0; i < take; ++i) {
                const std::size_t cell = stable[i * stable.size() / take];
                const CrossReport rep = cross_validate(topo, grid_gain(g, cell), spec, samples);
                for (const auto& c : rep.checks) {
                    worst_t = std::max(worst_t, c.transfer_error);
                    worst_l = std::max(worst_l, c.laplace_error);
                }
                marks += rep.pass ? '.' : 'X';
                if (!rep.pass) {
                    ++fails;
                    std::cerr << "  " << topo.name() << " cell " << cell << ": " << rep.diagnostic << "\n";
                }
            }
            std::cout << "  " << topo.name() << std::string(topo.name().size() < 6 ? 6 - topo.name().size() : 0, ' ') << " "
                      << marks << "  transfer " << fmt("%.2e", worst_t) << "  laplace " << fmt("%.2e", worst_l)
                      << (take == 0 ? "  (no stable cell)" : "") << "\n";
            all = all && fails == 0;
        }
    }
    std::cout << (all ? "PASS" : "FAIL") << "\n";
    return all ? 0 : 1;
}

int cmd_dump(const Options& o) {
    const ScenarioSpec spec = single_scenario(o);
    const Topology topo = single_topology(o, spec.n_followers);
    const GainVector K{o.k, o.b, o.h};
    const PlatoonClosedLoop cl = closed_loop(topo, spec.taus(), K);
    const StabilityResult st = is_internally_stable(cl);
    std::ostringstream os;
    for (Eigen::Index r = 0; r < cl.A.rows(); ++r) {
        for (Eigen::Index c = 0; c < cl.A.cols(); ++c) os << (c ? "," : "") << fmt("%.9g", cl.A(r, c));
        os << "\n";
    }
    if (!o.out.empty()) write_file(o.out, os.str());
    else std::cout << os.str();
    std::cerr << "eigenvalues:";
    for (const auto& l : st.spectrum) std::cerr << " " << fmt("%.6g", l.real()) << (l.imag() < 0 ? "" : "+") << fmt("%.6g", l.imag()) << "i";
    std::cerr << "\n" << (st.stable ? "stable" : "unstable") << ", max Re = " << fmt("%.6g", st.max_real) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Platoon communication topology analysis"};
    app.set_help_flag("--help", "print this help");  // -h is the acceleration gain
    app.require_subcommand(0, 1);
    Options o;

    auto scen = [&](CLI::App* c) {
        c->add_option("--preset", o.presets, "caseN-accM, or 'paper' for all nine")->delimiter(',');
        c->add_option("--scenario", o.scenario_files, "scenario JSON file (repeatable)");
        c->add_option("--onset", o.onset, "override leader onset: step | continuous");
    };
    auto topo = [&](CLI::App* c) {
        c->add_option("--topology", o.topologies, "topology names, comma separated");
        c->add_option("--topology-file", o.topology_files, "edge list file (repeatable)");
        c->add_option("--mpf-depth", o.mpf_depth, "predecessors heard under MPF")->check(CLI::PositiveNumber);
    };
    auto gains = [&](CLI::App* c) {
        c->add_option("-k,--k", o.k, "distance gain");
        c->add_option("-b,--b", o.b, "velocity gain");
        c->add_option("-h,--h", o.h, "acceleration gain");
    };
    auto gridopt = [&](CLI::App* c) {
        c->add_option("--k-values", o.k_values, "start:step:count or list");
        c->add_option("--b-values", o.b_values, "start:step:count or list");
        c->add_option("--h-values", o.h_values, "start:step:count or list");
    };
    auto sweepopt = [&](CLI::App* c) {
        scen(c);
        topo(c);
        gridopt(c);
        c->add_option("--mode", o.mode, "metric set: safe | noncolliding");
        c->add_option("--scale", o.scale, "metric accumulation: table | sum");
        c->add_option("--eei", o.eei, "energy signal: command | force");
        c->add_option("-j,--jobs", o.jobs, "worker threads, 0 = all");
        c->add_option("-o,--out", o.out, "output directory (default $PLATOON_OUT or results)");
        c->add_option("--formats", o.formats, "csv,json,text");
        c->add_flag("--no-plots", o.no_plots, "skip SVG output");
        c->add_flag("--no-grids", o.no_grids, "skip per-cell classification grids");
    };

    auto* sim = app.add_subcommand("simulate", "simulate one gain vector, trajectory CSV");
    scen(sim);
    topo(sim);
    gains(sim);
    sim->add_option("--engine", o.engine, "coupled | vehicles");
    sim->add_option("--plant", o.plant, "linear | nonlinear (vehicles engine)");
    sim->add_option("-o,--out", o.out, "CSV file (default stdout)");

    auto* cls = app.add_subcommand("classify", "classify the gain grid");
    sweepopt(cls);
    auto* swp = app.add_subcommand("sweep", "full sweep with tables, grids and plots");
    sweepopt(swp);
    swp->add_flag("--series", o.series, "also write per-topology metric series");
    auto* met = app.add_subcommand("metrics", "metric series over the shared gain set");
    sweepopt(met);
    auto* rnk = app.add_subcommand("rank", "pooled indices and rankings");
    sweepopt(rnk);
    auto* cmp = app.add_subcommand("compare", "percentage change between two topologies");
    sweepopt(cmp);
    cmp->add_option("--from", o.from, "baseline topology")->required();
    cmp->add_option("--to", o.to, "compared topology")->required();
    auto* val = app.add_subcommand("validate", "frequency-domain cross-validation on sampled stable cells");
    scen(val);
    topo(val);
    gridopt(val);
    val->add_option("--samples", o.samples, "cells per topology")->check(CLI::PositiveNumber);
    auto* dmp = app.add_subcommand("dump-system", "closed-loop matrix as CSV, spectrum on stderr");
    scen(dmp);
    topo(dmp);
    gains(dmp);
    dmp->add_option("-o,--out", o.out, "CSV file (default stdout)");

    if (argc < 2) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }

    try {
        const auto* c = app.get_subcommands().front();
        if (c == sim) return cmd_simulate(o);
        if (c == cls) return cmd_classify(o);
        if (c == swp) return cmd_sweep(o);
        if (c == met) return cmd_metrics(o);
        if (c == rnk) return cmd_rank(o);
        if (c == cmp) return cmd_compare(o);
        if (c == val) return cmd_validate(o);
        if (c == dmp) return cmd_dump(o);
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

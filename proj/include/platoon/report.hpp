#pragma once

#include "platoon/metrics.hpp"
#include "platoon/stats.hpp"
#include "platoon/sweep.hpp"

#include <string>
#include <utility>
#include <vector>

namespace platoon {

struct ReportManifest {
    std::string out_dir;
    bool csv = true, json = true, svg = true, text = true;
    std::vector<std::string> tables;  // table names to write; empty writes all
    bool grids = true;                // grids/<scenario>_<topology>.csv
    bool series = false;              // tables/series_<scenario>_<topology>.csv (large)
};

// $PLATOON_OUT if set, else "results".
std::string default_output_dir();

// Three decimals, "-0.000" folded to "0.000"; N.A. for nullopt and non-finite values.
std::string fmt3(MaybeValue v);

struct Cell {
    enum Kind { Text, Number, Integer } kind = Text;
    std::string text;
    MaybeValue value;

    static Cell str(std::string s) { return {Text, std::move(s), std::nullopt}; }
    static Cell num(MaybeValue v) { return {Number, {}, v}; }
    static Cell integer(long long v) { return {Integer, {}, static_cast<double>(v)}; }
    std::string render() const;
};

struct Table {
    std::string name;  // file stem
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// Topology comparisons reported by default, (from, to).
std::vector<std::pair<std::string, std::string>> standard_comparisons();

// sacgdi, safety, energy_comfort, overall, counts, weights, deltas.
std::vector<Table> build_tables(const SweepResult& r, const Summary& s);

std::string to_csv(const Table& t);
std::string to_text(const Table& t);
// One object per table; numbers carry the same rounding as the CSV, N.A. is null.
std::string to_json(const std::vector<Table>& tables, std::uint64_t config_hash);

std::string grid_csv(const TopologyResult& tr, const GainGrid& g);
// Time, then momentary mean/sd and accumulative mean/sd of every metric.
std::string series_csv(const TopologyResult& tr, double dt);

// Classification map over (k, b), one panel per h value.
std::string heatmap_svg(const TopologyResult& tr, const GainGrid& g, const std::string& title);

struct PlotSeries {
    std::string name;
    std::vector<double> mean, sd;
};
// Mean lines with shaded and dashed mean +- sd envelopes.
std::string line_plot_svg(double dt, const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& ylabel);

// Writes content, creating parent directories; throws std::runtime_error naming the path.
void write_file(const std::string& path, const std::string& content);

// Each returns the paths written.
std::vector<std::string> render_tables(const SweepResult& r, const Summary& s, const ReportManifest& m);
std::vector<std::string> render_grids(const SweepResult& r, const ReportManifest& m);
std::vector<std::string> render_plots(const SweepResult& r, const ReportManifest& m);

}  // namespace platoon

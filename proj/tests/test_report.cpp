#include "platoon/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace platoon;
namespace fs = std::filesystem;

namespace {

const SweepResult& small_result() {
    static const SweepResult r = [] {
        SweepPlan p;
        p.scenarios = {preset(1, 1), preset(2, 3)};
        p.grid.k_values = {0.5, 1.0, 2.0};
        p.grid.b_values = {1.0, 3.0, 6.0};
        p.grid.h_values = {1.0, 4.0};
        p.metrics.scale = MetricScale::Table;
        return run_sweep(p);
    }();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else cur += c;
    }
    out.push_back(cur);
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("platoon_report_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("three-decimal formatting") {
    CHECK(fmt3(1.23456) == "1.235");
    CHECK(fmt3(-0.0001) == "0.000");
    CHECK(fmt3(-0.0006) == "-0.001");
    CHECK(fmt3(std::nullopt) == "N.A.");
    CHECK(fmt3(std::numeric_limits<double>::quiet_NaN()) == "N.A.");
    CHECK(fmt3(std::numeric_limits<double>::infinity()) == "N.A.");
    CHECK(Cell::integer(42).render() == "42");
    CHECK(Cell::str("x").render() == "x");
}

TEST_CASE("output directory default") {
    ::unsetenv("PLATOON_OUT");
    CHECK(default_output_dir() == "results");
    ::setenv("PLATOON_OUT", "/tmp/elsewhere", 1);
    CHECK(default_output_dir() == "/tmp/elsewhere");
    ::unsetenv("PLATOON_OUT");
}

TEST_CASE("CSV and JSON carry the same values") {
    const SweepResult& r = small_result();
    const auto tables = build_tables(r, summarize(r));
    const auto doc = nlohmann::json::parse(to_json(tables, r.config_hash));
    CHECK(doc["config_hash"].get<std::string>().size() == 16);
    REQUIRE(doc["tables"].size() == tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto& jt = doc["tables"][i];
        CHECK(jt["name"] == tables[i].name);
        std::istringstream csv(to_csv(tables[i]));
        std::string line;
        std::getline(csv, line);
        CHECK(split(line) == jt["header"].get<std::vector<std::string>>());
        std::size_t row = 0;
        while (std::getline(csv, line)) {
            const auto cells = split(line);
            const auto& jr = jt["rows"][row++];
            REQUIRE(cells.size() == jr.size());
            for (std::size_t c = 0; c < cells.size(); ++c) {
                CAPTURE(tables[i].name);
                CAPTURE(cells[c]);
                if (jr[c].is_null()) CHECK(cells[c] == "N.A.");
                else if (jr[c].is_string()) CHECK(cells[c] == jr[c].get<std::string>());
                else CHECK(std::stod(cells[c]) == jr[c].get<double>());
            }
        }
        CHECK(row == jt["rows"].size());
    }
}

TEST_CASE("table layout") {
    const SweepResult& r = small_result();
    const auto tables = build_tables(r, summarize(r));
    std::vector<std::string> names;
    for (const auto& t : tables) names.push_back(t.name);
    CHECK(names == std::vector<std::string>{"sacgdi", "safety", "energy_comfort", "overall", "counts", "weights", "deltas"});
    CHECK(tables[0].rows.size() == 2 + 5);  // scenarios, PM, SD, CV, PI, rank
    CHECK(tables[4].rows.size() == 2 * 10);
    CHECK(tables[5].rows.size() == 2);
    CHECK(standard_comparisons().size() == 13);
    const std::string text = to_text(tables[0]);
    CHECK(text.find("PM") != std::string::npos);
}

TEST_CASE("an empty result renders header-only tables") {
    SweepResult empty;
    empty.topology_names = {"PF", "BD"};
    const auto tables = build_tables(empty, summarize(empty));
    REQUIRE_FALSE(tables.empty());
    for (const auto& t : tables) {
        CAPTURE(t.name);
        CHECK(t.rows.empty());
        const std::string csv = to_csv(t);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
    }
}

TEST_CASE("re-rendering is byte-identical") {
    const SweepResult& r = small_result();
    const Summary s = summarize(r);
    const fs::path a = scratch("a"), b = scratch("b");
    ReportManifest ma;
    ma.out_dir = a.string();
    ma.series = true;
    ReportManifest mb = ma;
    mb.out_dir = b.string();
    auto wa = render_tables(r, s, ma), wb = render_tables(r, s, mb);
    for (auto& p : render_grids(r, ma)) wa.push_back(p);
    for (auto& p : render_grids(r, mb)) wb.push_back(p);
    for (auto& p : render_plots(r, ma)) wa.push_back(p);
    for (auto& p : render_plots(r, mb)) wb.push_back(p);
    REQUIRE(wa.size() == wb.size());
    CHECK(wa.size() > 40);
    for (std::size_t i = 0; i < wa.size(); ++i) {
        CAPTURE(wa[i]);
        CHECK(fs::relative(wa[i], a) == fs::relative(wb[i], b));
        CHECK(slurp(wa[i]) == slurp(wb[i]));
    }
    CHECK(fs::exists(a / "tables" / "tables.json"));
    CHECK(fs::exists(a / "grids" / "case1-acc1_PF.csv"));
    CHECK(fs::exists(a / "plots" / "heatmap_case1-acc1_PF.svg"));
    CHECK(fs::exists(a / "plots" / "case1-acc1_AAPMTTC.svg"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("manifest filtering") {
    const SweepResult& r = small_result();
    const fs::path d = scratch("filter");
    ReportManifest m;
    m.out_dir = d.string();
    m.tables = {"weights"};
    m.json = m.text = false;
    const auto w = render_tables(r, summarize(r), m);
    CHECK(w == std::vector<std::string>{(d / "tables" / "weights.csv").string()});
    m.grids = false;
    CHECK(render_grids(r, m).empty());
    m.csv = m.svg = false;
    CHECK_THROWS_AS(render_tables(r, summarize(r), m), std::invalid_argument);
    fs::remove_all(d);
}

TEST_CASE("grid and series CSV") {
    const SweepResult& r = small_result();
    const TopologyResult& tr = r.scenarios[0].topologies[0];
    std::istringstream g(grid_csv(tr, r.grid));
    std::string line;
    std::getline(g, line);
    CHECK(line == "k,b,h,class,max_real,min_p");
    std::size_t rows = 0;
    while (std::getline(g, line)) {
        ++rows;
        CHECK(split(line).size() == 6);
    }
    CHECK(rows == r.grid.size());
    const std::string series = series_csv(tr, 0.01);
    CHECK(series.rfind("t,AAPMTTC_mom_mean", 0) == 0);
    if (tr.has_metrics) CHECK(std::count(series.begin(), series.end(), '\n') == 2502);
}

TEST_CASE("SVG content") {
    const SweepResult& r = small_result();
    const TopologyResult& tr = r.scenarios[0].topologies[0];
    const std::string h = heatmap_svg(tr, r.grid, "case / PF");
    CHECK(h.rfind("<svg", 0) == 0);
    CHECK(h.find("</svg>") != std::string::npos);
    CHECK(h.find("safe") != std::string::npos);
    CHECK(h.find("h = 4") != std::string::npos);

    const std::string p = line_plot_svg(0.01, {{"A<B", {0, 1, 2, 3}, {0, 0.1, 0.2, 0.3}}, {"C", {3, 2, 1, 0}, {0, 0, 0, 0}}},
                                        "title", "y");
    CHECK(p.find("A&lt;B") != std::string::npos);
    CHECK(p.find("<path") != std::string::npos);
    CHECK(p.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("write errors name the path") {
    const fs::path d = scratch("blocked");
    write_file((d / "file").string(), "x");
    try {
        write_file((d / "file" / "child.csv").string(), "y");
        FAIL("wrote beneath a regular file");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find((d / "file").string()) != std::string::npos);
    }
    fs::remove_all(d);
}

}  // TEST_SUITE

#include "platoon/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace platoon {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string file_stem(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<Cell> value_row(std::vector<Cell> lead, const std::vector<MaybeValue>& v) {
    for (const auto& x : v) lead.push_back(Cell::num(x));
    return lead;
}

std::vector<Cell> rank_row(std::vector<Cell> lead, const std::vector<int>& rank, const std::vector<MaybeValue>& basis) {
    for (std::size_t t = 0; t < rank.size(); ++t)
        lead.push_back(basis[t] ? Cell::integer(rank[t]) : Cell::num(std::nullopt));
    return lead;
}

std::size_t idx(MetricId id) { return static_cast<std::size_t>(id); }

// Per-scenario mean/sd rows and pooled rows for a group of accumulative metrics.
void metric_block(Table& tb, const Summary& s, const std::vector<MetricId>& ids) {
    for (std::size_t sc = 0; sc < s.scenarios.size(); ++sc)
        for (auto id : ids) {
            const auto w = Cell::integer(static_cast<long long>(s.weights[sc]));
            tb.rows.push_back(value_row({Cell::str(s.scenarios[sc]), Cell::str(metric_name(id) + " mean"), w},
                                        s.acc_mean[idx(id)][sc]));
            tb.rows.push_back(value_row({Cell::str(s.scenarios[sc]), Cell::str(metric_name(id) + " sd"), w},
                                        s.acc_sd[idx(id)][sc]));
        }
    for (auto id : ids) {
        const std::string n = metric_name(id);
        tb.rows.push_back(value_row({Cell::str("pooled"), Cell::str(n + " PM"), Cell::str("")}, s.pm[idx(id)]));
        tb.rows.push_back(value_row({Cell::str("pooled"), Cell::str(n + " PSD"), Cell::str("")}, s.psd[idx(id)]));
        tb.rows.push_back(value_row({Cell::str("pooled"), Cell::str(n + " CV"), Cell::str("")}, s.cv[idx(id)]));
        tb.rows.push_back(value_row({Cell::str("pooled"), Cell::str(n + " PI"), Cell::str("")}, s.pi[idx(id)]));
    }
}

std::vector<std::string> with_topologies(std::vector<std::string> lead, const std::vector<std::string>& topos) {
    lead.insert(lead.end(), topos.begin(), topos.end());
    return lead;
}

const char* class_color(CgvClass c) {
    switch (c) {
        case CgvClass::Unstable: return "#f2d600";
        case CgvClass::StableColliding: return "#d62728";
        case CgvClass::StableUnsafe: return "#1f77b4";
        case CgvClass::StableSafe: return "#2ca02c";
    }
    return "#000000";
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

bool wanted(const ReportManifest& m, const std::string& name) {
    return m.tables.empty() || std::find(m.tables.begin(), m.tables.end(), name) != m.tables.end();
}

}  // namespace

std::string default_output_dir() {
    const char* env = std::getenv("PLATOON_OUT");
    return env && *env ? env : "results";
}

std::string fmt3(MaybeValue v) {
    if (!v || !std::isfinite(*v)) return "N.A.";
    std::string s = fmt("%.3f", *v);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string Cell::render() const {
    switch (kind) {
        case Text: return text;
        case Number: return fmt3(value);
        case Integer: return value ? std::to_string(static_cast<long long>(*value)) : "N.A.";
    }
    return text;
}

std::vector<std::pair<std::string, std::string>> standard_comparisons() {
    return {{"BD", "BDL"},  {"PF", "PFL"},    {"TPF", "TPFL"}, {"PF", "TPF"},   {"PF", "MPF"},
            {"BD", "TPSF"}, {"PF", "BD"},     {"TPF", "TPSF"}, {"TPSF", "TBPF"}, {"BD", "SPTF"},
            {"TPF", "PFL"}, {"MPF", "TPFL"},  {"TPSF", "BDL"}};
}

std::vector<Table> build_tables(const SweepResult& r, const Summary& s) {
    std::vector<Table> out;
    const auto& topos = s.topologies;

    Table sac{"sacgdi", "Joint robustness (SaCGDI, %) and rank", with_topologies({"row"}, topos), {}};
    for (std::size_t sc = 0; sc < s.scenarios.size(); ++sc) {
        std::vector<MaybeValue> row(s.sacgdi[sc].begin(), s.sacgdi[sc].end());
        sac.rows.push_back(value_row({Cell::str(s.scenarios[sc])}, row));
    }
    sac.rows.push_back(value_row({Cell::str("PM")}, s.sac_pm));
    sac.rows.push_back(value_row({Cell::str("SD")}, s.sac_sd));
    sac.rows.push_back(value_row({Cell::str("CV")}, s.sac_cv));
    sac.rows.push_back(value_row({Cell::str("PI")}, s.sac_pi));
    sac.rows.push_back(rank_row({Cell::str("rank")}, s.sac_rank, s.sac_pi));
    out.push_back(std::move(sac));

    Table saf{"safety", "Safety metrics at the horizon (AAPMTTC, AAMDRAC)",
              with_topologies({"scenario", "statistic", "weight"}, topos), {}};
    metric_block(saf, s, {MetricId::PMTTC, MetricId::MDRAC});
    saf.rows.push_back(value_row({Cell::str("pooled"), Cell::str("safety API"), Cell::str("")}, s.safety_api));
    saf.rows.push_back(rank_row({Cell::str("pooled"), Cell::str("safety rank"), Cell::str("")}, s.safety_rank, s.safety_api));
    out.push_back(std::move(saf));

    Table en{"energy_comfort", "Energy and comfort metrics at the horizon (AAMEEI, AAMEA, AAMEJ)",
             with_topologies({"scenario", "statistic", "weight"}, topos), {}};
    metric_block(en, s, {MetricId::EEI, MetricId::EA, MetricId::EJ});
    en.rows.push_back(value_row({Cell::str("pooled"), Cell::str("energy PI"), Cell::str("")}, s.energy_pi));
    en.rows.push_back(rank_row({Cell::str("pooled"), Cell::str("energy rank"), Cell::str("")}, s.energy_rank, s.energy_pi));
    en.rows.push_back(value_row({Cell::str("pooled"), Cell::str("comfort API"), Cell::str("")}, s.comfort_api));
    en.rows.push_back(rank_row({Cell::str("pooled"), Cell::str("comfort rank"), Cell::str("")}, s.comfort_rank, s.comfort_api));
    out.push_back(std::move(en));

    Table ov{"overall", "Normalized criteria, average normalized value and overall rank",
             with_topologies({"criterion"}, topos), {}};
    static const char* crit[] = {"SaCGDI PI", "safety API", "energy PI", "comfort API"};
    for (std::size_t c = 0; c < s.overall.normalized.size(); ++c)
        ov.rows.push_back(value_row({Cell::str(std::string(crit[c]) + " (normalized)")}, s.overall.normalized[c]));
    ov.rows.push_back(value_row({Cell::str("ANV")}, s.overall.anv));
    ov.rows.push_back(rank_row({Cell::str("rank")}, s.overall.rank, s.overall.anv));
    out.push_back(std::move(ov));

    Table cnt{"counts", "Classification counts per scenario and topology",
              {"scenario", "topology", "unstable", "colliding", "unsafe", "safe", "total", "sacgdi", "excluded", "failed"},
              {}};
    for (const auto& sr : r.scenarios)
        for (const auto& tr : sr.topologies) {
            std::vector<Cell> row{Cell::str(sr.name), Cell::str(tr.name)};
            std::size_t total = 0;
            for (auto c : tr.counts) {
                row.push_back(Cell::integer(static_cast<long long>(c)));
                total += c;
            }
            const auto failed = std::count_if(tr.cells.begin(), tr.cells.end(), [](const CellResult& c) { return c.failed; });
            row.push_back(Cell::integer(static_cast<long long>(total)));
            row.push_back(Cell::num(tr.sacgdi));
            row.push_back(Cell::str(tr.excluded ? "yes" : "no"));
            row.push_back(Cell::integer(failed));
            cnt.rows.push_back(std::move(row));
        }
    out.push_back(std::move(cnt));

    Table wt{"weights", "Shared control gain vector counts",
             {"scenario", "safe_set", "noncolliding_set", "weight", "excluded"}, {}};
    for (const auto& sr : r.scenarios) {
        std::string ex;
        for (const auto& tr : sr.topologies)
            if (tr.excluded) ex += (ex.empty() ? "" : ";") + tr.name;
        wt.rows.push_back({Cell::str(sr.name), Cell::integer(static_cast<long long>(sr.safe_set.count())),
                           Cell::integer(static_cast<long long>(sr.noncolliding_set.count())),
                           Cell::integer(static_cast<long long>(sr.weight)), Cell::str(ex)});
    }
    out.push_back(std::move(wt));

    Table dl{"deltas", "Signed percentage change of each index between topology pairs",
             {"from", "to", "criterion", "from_value", "to_value", "percent"}, {}};
    auto has = [&](const std::string& n) { return std::find(topos.begin(), topos.end(), n) != topos.end(); };
    for (const auto& [a, b] : standard_comparisons()) {
        if (!has(a) || !has(b)) continue;
        for (const auto& d : compare_topologies(s, a, b))
            dl.rows.push_back({Cell::str(a), Cell::str(b), Cell::str(d.criterion), Cell::num(d.from), Cell::num(d.to),
                               Cell::num(d.percent)});
    }
    out.push_back(std::move(dl));
    // Nothing was swept: keep the layout, drop the placeholder rows.
    if (r.scenarios.empty())
        for (auto& t : out) t.rows.clear();
    return out;
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t c = 0; c < t.header.size(); ++c) os << (c ? "," : "") << csv_field(t.header[c]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(row[c].render());
        os << "\n";
    }
    return os.str();
}

std::string to_text(const Table& t) {
    std::vector<std::size_t> width(t.header.size(), 0);
    for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].size();
    for (const auto& row : t.rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].render().size());
    std::ostringstream os;
    os << t.title << "\n";
    auto pad = [&](const std::string& s, std::size_t c, bool right) {
        const std::string fill(width[c] - s.size(), ' ');
        os << (c ? "  " : "") << (right ? fill + s : s + fill);
    };
    for (std::size_t c = 0; c < t.header.size(); ++c) pad(t.header[c], c, c > 0);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) pad(row[c].render(), c, row[c].kind != Cell::Text);
        os << "\n";
    }
    return os.str();
}

std::string to_json(const std::vector<Table>& tables, std::uint64_t config_hash) {
    using nlohmann::json;
    json doc;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
    doc["config_hash"] = hash;
    doc["tables"] = json::array();
    for (const auto& t : tables) {
        json jt;
        jt["name"] = t.name;
        jt["title"] = t.title;
        jt["header"] = t.header;
        jt["rows"] = json::array();
        for (const auto& row : t.rows) {
            json jr = json::array();
            for (const auto& c : row) {
                const std::string s = c.render();
                if (c.kind == Cell::Text) jr.push_back(s);
                else if (s == "N.A.") jr.push_back(nullptr);
                else if (c.kind == Cell::Integer) jr.push_back(std::stoll(s));
                else jr.push_back(std::stod(s));
            }
            jt["rows"].push_back(std::move(jr));
        }
        doc["tables"].push_back(std::move(jt));
    }
    return doc.dump(2) + "\n";
}

std::string grid_csv(const TopologyResult& tr, const GainGrid& g) {
    std::ostringstream os;
    os << "k,b,h,class,max_real,min_p\n";
    for (std::size_t c = 0; c < tr.cells.size(); ++c) {
        const GainVector K = grid_gain(g, c);
        const CellResult& cell = tr.cells[c];
        os << fmt3(K.k) << "," << fmt3(K.b) << "," << fmt3(K.h) << "," << class_name(cell.cls) << ","
           << (cell.failed ? "N.A." : fmt("%.9g", cell.max_real)) << ","
           << (cell.cls == CgvClass::Unstable ? "N.A." : fmt("%.9g", cell.min_p)) << "\n";
    }
    return os.str();
}

std::string series_csv(const TopologyResult& tr, double dt) {
    std::ostringstream os;
    os << "t";
    for (const auto& m : tr.metrics) {
        const std::string n = metric_name(m.id);
        os << "," << n << "_mom_mean," << n << "_mom_sd," << n << "_acc_mean," << n << "_acc_sd";
    }
    os << "\n";
    const std::size_t len = tr.has_metrics ? tr.metrics[0].mom_mean.size() : 0;
    for (std::size_t k = 0; k < len; ++k) {
        os << fmt3(k * dt);
        for (const auto& m : tr.metrics)
            os << "," << fmt("%.9g", m.mom_mean[k]) << "," << fmt("%.9g", m.mom_sd[k]) << "," << fmt("%.9g", m.acc_mean[k])
               << "," << fmt("%.9g", m.acc_sd[k]);
        os << "\n";
    }
    return os.str();
}

std::string heatmap_svg(const TopologyResult& tr, const GainGrid& g, const std::string& title) {
    const std::size_t nk = g.k_values.size(), nb = g.b_values.size(), nh = g.h_values.size();
    const double cell = 10.0, left = 60.0, top = 40.0, gap = 40.0;
    const double pw = nk * cell, ph = nb * cell;
    const double W = left + nh * (pw + gap) + 120.0, H = top + ph + 60.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", W) << "\" height=\"" << fmt("%.0f", H)
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    for (std::size_t ih = 0; ih < nh; ++ih) {
        const double x0 = left + ih * (pw + gap);
        // Horizontal runs of equal class become one rect.
        for (std::size_t ib = 0; ib < nb; ++ib) {
            const double y = top + (nb - 1 - ib) * cell;
            std::size_t ik = 0;
            while (ik < nk) {
                const CgvClass c = tr.cells[(ik * nb + ib) * nh + ih].cls;
                std::size_t end = ik + 1;
                while (end < nk && tr.cells[(end * nb + ib) * nh + ih].cls == c) ++end;
                os << "<rect x=\"" << fmt("%.1f", x0 + ik * cell) << "\" y=\"" << fmt("%.1f", y) << "\" width=\""
                   << fmt("%.1f", (end - ik) * cell) << "\" height=\"" << fmt("%.1f", cell) << "\" fill=\"" << class_color(c)
                   << "\"/>\n";
                ik = end;
            }
        }
        os << "<rect x=\"" << x0 << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        const std::size_t step_k = std::max<std::size_t>(1, nk / 5), step_b = std::max<std::size_t>(1, nb / 5);
        for (std::size_t ik = 0; ik < nk; ik += step_k)
            os << "<text x=\"" << fmt("%.1f", x0 + (ik + 0.5) * cell) << "\" y=\"" << fmt("%.1f", top + ph + 14)
               << "\" text-anchor=\"middle\">" << fmt("%g", g.k_values[ik]) << "</text>\n";
        for (std::size_t ib = 0; ib < nb; ib += step_b)
            os << "<text x=\"" << fmt("%.1f", x0 - 4) << "\" y=\"" << fmt("%.1f", top + (nb - ib - 0.5) * cell + 4)
               << "\" text-anchor=\"end\">" << fmt("%g", g.b_values[ib]) << "</text>\n";
        os << "<text x=\"" << fmt("%.1f", x0 + pw / 2) << "\" y=\"" << fmt("%.1f", top + ph + 32)
           << "\" text-anchor=\"middle\">k (h = " << fmt("%g", g.h_values[ih]) << ")</text>\n";
        os << "<text x=\"" << fmt("%.1f", x0 - 40) << "\" y=\"" << fmt("%.1f", top + ph / 2)
           << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << fmt("%.1f", x0 - 40) << " " << fmt("%.1f", top + ph / 2)
           << ")\">b</text>\n";
    }
    const double lx = left + nh * (pw + gap);
    const CgvClass order[] = {CgvClass::Unstable, CgvClass::StableColliding, CgvClass::StableUnsafe, CgvClass::StableSafe};
    for (int i = 0; i < 4; ++i) {
        const double y = top + i * 20.0;
        os << "<rect x=\"" << lx << "\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\"" << class_color(order[i])
           << "\"/>\n<text x=\"" << lx + 18 << "\" y=\"" << y + 10 << "\">" << class_name(order[i]) << " ("
           << tr.counts[static_cast<std::size_t>(order[i])] << ")</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string line_plot_svg(double dt, const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& ylabel) {
    const double W = 820, H = 480, left = 80, right = 130, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    std::size_t len = 0;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& s : series) {
        len = std::max(len, s.mean.size());
        for (std::size_t k = 0; k < s.mean.size(); ++k) {
            const double sd = k < s.sd.size() ? s.sd[k] : 0.0;
            if (first) lo = hi = s.mean[k], first = false;
            lo = std::min(lo, s.mean[k] - sd);
            hi = std::max(hi, s.mean[k] + sd);
        }
    }
    if (hi <= lo) hi = lo + 1.0;
    const double tmax = len > 1 ? (len - 1) * dt : 1.0;
    auto X = [&](double t) { return left + pw * t / tmax; };
    auto Y = [&](double v) { return top + ph * (hi - v) / (hi - lo); };
    const std::size_t stride = std::max<std::size_t>(1, len / 250);
    std::vector<std::size_t> picks;
    for (std::size_t k = 0; k < len; k += stride) picks.push_back(k);
    if (len && picks.back() != len - 1) picks.push_back(len - 1);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"22\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double t = tmax * i / 5.0, v = lo + (hi - lo) * i / 5.0;
        os << "<text x=\"" << fmt("%.1f", X(t)) << "\" y=\"" << fmt("%.1f", top + ph + 16) << "\" text-anchor=\"middle\">"
           << fmt("%g", t) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << fmt("%.1f", Y(v) + 4) << "\" text-anchor=\"end\">" << fmt("%.3g", v)
           << "</text>\n";
    }
    os << "<text x=\"" << fmt("%.1f", left + pw / 2) << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">t (s)</text>\n";
    os << "<text x=\"18\" y=\"" << fmt("%.1f", top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt("%.1f", top + ph / 2) << ")\">" << xml_escape(ylabel) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (s.mean.empty()) continue;
        auto sd = [&](std::size_t k) { return k < s.sd.size() ? s.sd[k] : 0.0; };
        auto path = [&](double sign) {
            std::string d;
            for (std::size_t k : picks) {
                if (k >= s.mean.size()) break;
                d += (d.empty() ? "M" : " L") + fmt("%.1f", X(k * dt)) + "," + fmt("%.1f", Y(s.mean[k] + sign * sd(k)));
            }
            return d;
        };
        std::string band;
        for (std::size_t k : picks)
            if (k < s.mean.size()) band += (band.empty() ? "M" : " L") + fmt("%.1f", X(k * dt)) + "," + fmt("%.1f", Y(s.mean[k] + sd(k)));
        for (auto it = picks.rbegin(); it != picks.rend(); ++it)
            if (*it < s.mean.size()) band += " L" + fmt("%.1f", X(*it * dt)) + "," + fmt("%.1f", Y(s.mean[*it] - sd(*it)));
        os << "<path d=\"" << band << " Z\" fill=\"" << palette(i) << "\" fill-opacity=\"0.10\" stroke=\"none\"/>\n";
        os << "<path d=\"" << path(1.0) << "\" fill=\"none\" stroke=\"" << palette(i) << "\" stroke-dasharray=\"4 3\"/>\n";
        os << "<path d=\"" << path(-1.0) << "\" fill=\"none\" stroke=\"" << palette(i) << "\" stroke-dasharray=\"4 3\"/>\n";
        os << "<path d=\"" << path(0.0) << "\" fill=\"none\" stroke=\"" << palette(i) << "\" stroke-width=\"1.6\"/>\n";
        const double ly = top + 10 + 18.0 * i;
        os << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 30 << "\" y2=\"" << ly
           << "\" stroke=\"" << palette(i) << "\" stroke-width=\"2\"/>\n<text x=\"" << W - right + 36 << "\" y=\"" << ly + 4
           << "\">" << xml_escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> render_tables(const SweepResult& r, const Summary& s, const ReportManifest& m) {
    if (!(m.csv || m.json || m.text || m.svg)) throw std::invalid_argument("report: no output format selected");
    std::vector<std::string> written;
    const fs::path dir = fs::path(m.out_dir) / "tables";
    std::vector<Table> chosen;
    for (auto& t : build_tables(r, s))
        if (wanted(m, t.name)) chosen.push_back(std::move(t));
    for (const auto& t : chosen) {
        if (m.csv) {
            written.push_back((dir / (t.name + ".csv")).string());
            write_file(written.back(), to_csv(t));
        }
        if (m.text) {
            written.push_back((dir / (t.name + ".txt")).string());
            write_file(written.back(), to_text(t));
        }
    }
    if (m.json) {
        written.push_back((dir / "tables.json").string());
        write_file(written.back(), to_json(chosen, r.config_hash));
    }
    if (m.series)
        for (const auto& sr : r.scenarios)
            for (const auto& tr : sr.topologies) {
                if (!tr.has_metrics) continue;
                written.push_back((dir / ("series_" + file_stem(sr.name) + "_" + file_stem(tr.name) + ".csv")).string());
                write_file(written.back(), series_csv(tr, sr.step));
            }
    return written;
}

std::vector<std::string> render_grids(const SweepResult& r, const ReportManifest& m) {
    std::vector<std::string> written;
    if (!m.grids) return written;
    const fs::path dir = fs::path(m.out_dir) / "grids";
    for (const auto& sr : r.scenarios)
        for (const auto& tr : sr.topologies) {
            written.push_back((dir / (file_stem(sr.name) + "_" + file_stem(tr.name) + ".csv")).string());
            write_file(written.back(), grid_csv(tr, r.grid));
        }
    return written;
}

std::vector<std::string> render_plots(const SweepResult& r, const ReportManifest& m) {
    std::vector<std::string> written;
    if (!m.svg) return written;
    const fs::path dir = fs::path(m.out_dir) / "plots";
    for (const auto& sr : r.scenarios) {
        for (const auto& tr : sr.topologies) {
            written.push_back((dir / ("heatmap_" + file_stem(sr.name) + "_" + file_stem(tr.name) + ".svg")).string());
            write_file(written.back(), heatmap_svg(tr, r.grid, sr.name + " / " + tr.name));
        }
        for (auto id : all_metrics()) {
            for (bool acc : {false, true}) {
                std::vector<PlotSeries> series;
                for (const auto& tr : sr.topologies) {
                    if (!tr.has_metrics || tr.metrics[idx(id)].count == 0) continue;
                    const auto& ms = tr.metrics[idx(id)];
                    series.push_back({tr.name, acc ? ms.acc_mean : ms.mom_mean, acc ? ms.acc_sd : ms.mom_sd});
                }
                if (series.empty()) continue;
                const std::string label = acc ? metric_name(id) : metric_name(id).substr(1);
                written.push_back((dir / (file_stem(sr.name) + "_" + label + ".svg")).string());
                write_file(written.back(), line_plot_svg(sr.step, series, sr.name + ": " + label, label));
            }
        }
    }
    return written;
}

}  // namespace platoon

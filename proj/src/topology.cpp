#include "platoon/topology.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

namespace platoon {

namespace {

struct KindRow {
    TopologyKind kind;
    const char* name;
};

constexpr KindRow kKinds[] = {
    {TopologyKind::PF, "PF"},     {TopologyKind::MPF, "MPF"},   {TopologyKind::TPFL, "TPFL"},
    {TopologyKind::PFL, "PFL"},   {TopologyKind::TPF, "TPF"},   {TopologyKind::BDL, "BDL"},
    {TopologyKind::BD, "BD"},     {TopologyKind::TBPF, "TBPF"}, {TopologyKind::TPSF, "TPSF"},
    {TopologyKind::SPTF, "SPTF"},
};

}  // namespace

std::string kind_name(TopologyKind k) {
    for (const auto& r : kKinds)
        if (r.kind == k) return r.name;
    return "Custom";
}

TopologyKind kind_from_name(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (const auto& r : kKinds)
        if (up == r.name) return r.kind;
    throw std::invalid_argument("unknown topology '" + name + "'");
}

std::vector<TopologyKind> standard_kinds() {
    std::vector<TopologyKind> out;
    for (const auto& r : kKinds) out.push_back(r.kind);
    return out;
}

Topology::Topology(int n, std::vector<std::set<int>> hears, TopologyKind kind, std::string name)
    : n_(n), hears_(std::move(hears)), kind_(kind), name_(std::move(name)) {
    if (n_ < 1) throw std::invalid_argument("topology needs at least one follower");
    if (static_cast<int>(hears_.size()) != n_ + 1) throw std::invalid_argument("topology: hears must have n+1 entries");
    if (!hears_[0].empty()) throw std::invalid_argument("topology: the leader receives nothing");
    for (int i = 1; i <= n_; ++i) {
        const auto& s = hears_[static_cast<std::size_t>(i)];
        if (s.empty()) throw std::invalid_argument("topology: follower " + std::to_string(i) + " hears nobody");
        if (s.count(i)) throw std::invalid_argument("topology: follower " + std::to_string(i) + " hears itself");
        for (int j : s)
            if (j < 0 || j > n_)
                throw std::invalid_argument("topology: index " + std::to_string(j) + " out of range");
    }
}

const std::set<int>& Topology::hears(int m) const {
    if (m < 0 || m > n_) throw std::out_of_range("topology: vehicle index out of range");
    return hears_[static_cast<std::size_t>(m)];
}

bool Topology::receives(int receiver, int sender) const {
    return receiver >= 1 && receiver <= n_ && hears(receiver).count(sender) > 0;
}

Topology build(TopologyKind kind, int n, int mpf_depth) {
    if (n < 1) throw std::invalid_argument("build: n >= 1 required");
    if (kind == TopologyKind::Custom) throw std::invalid_argument("build: Custom topology needs explicit edges");
    std::vector<std::set<int>> h(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n; ++i) {
        std::vector<int> c;
        switch (kind) {
            case TopologyKind::PF: c = {i - 1}; break;
            case TopologyKind::TPF: c = {i - 1, i - 2}; break;
            case TopologyKind::MPF:
                for (int d = 1; d <= mpf_depth; ++d) c.push_back(i - d);
                break;
            case TopologyKind::PFL: c = {i - 1, 0}; break;
            case TopologyKind::TPFL: c = {i - 1, i - 2, 0}; break;
            case TopologyKind::BD: c = {i - 1, i + 1}; break;
            case TopologyKind::BDL: c = {i - 1, i + 1, 0}; break;
            case TopologyKind::TPSF: c = {i - 2, i - 1, i + 1}; break;
            case TopologyKind::TBPF: c = {i - 2, i - 1, i + 1, i + 2}; break;
            case TopologyKind::SPTF: c = {i - 1, i + 1, i + 2}; break;
            case TopologyKind::Custom: break;
        }
        for (int j : c)
            if (j >= 0 && j <= n && j != i) h[static_cast<std::size_t>(i)].insert(j);
    }
    return Topology(n, std::move(h), kind, kind_name(kind));
}

Topology from_edges(int n, const std::vector<std::pair<int, int>>& edges, const std::string& name) {
    std::vector<std::set<int>> h(static_cast<std::size_t>(std::max(n, 0) + 1));
    for (const auto& [r, s] : edges) {
        if (r < 1 || r > n) throw std::invalid_argument("edge receiver " + std::to_string(r) + " out of range");
        if (s < 0 || s > n) throw std::invalid_argument("edge sender " + std::to_string(s) + " out of range");
        h[static_cast<std::size_t>(r)].insert(s);
    }
    return Topology(n, std::move(h), TopologyKind::Custom, name);
}

Topology parse_edge_list(const std::string& text, const std::string& name) {
    static const std::regex edge_re(R"(^\s*(\d+)\s*<-\s*(\d+)\s*$)");
    static const std::regex n_re(R"(^\s*n\s*=\s*(\d+)\s*$)");
    std::istringstream in(text);
    std::string line;
    int n = -1, max_idx = 0, lineno = 0;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::smatch m;
        if (std::regex_match(line, m, n_re)) {
            n = std::stoi(m[1]);
        } else if (std::regex_match(line, m, edge_re)) {
            const int r = std::stoi(m[1]), s = std::stoi(m[2]);
            edges.emplace_back(r, s);
            max_idx = std::max({max_idx, r, s});
        } else {
            throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": expected 'receiver<-sender'");
        }
    }
    return from_edges(n > 0 ? n : max_idx, edges, name);
}

Topology load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open topology file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_edge_list(ss.str(), path);
}

PairSets neighbor_sets(const Topology& t, int i) {
    if (i < 1 || i > t.n()) throw std::out_of_range("neighbor_sets: pair index out of range");
    PairSets p;
    p.I_i = t.hears(i);
    p.I_im1 = t.hears(i - 1);
    p.R_i = p.I_i;
    p.R_i.erase(i - 1);
    p.R_im1 = p.I_im1;
    p.R_im1.erase(i);
    return p;
}

int count_le(const std::set<int>& s, int bound) {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](int j) { return j <= bound; }));
}
int count_ge(const std::set<int>& s, int bound) {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](int j) { return j >= bound; }));
}
int count_lt(const std::set<int>& s, int bound) { return count_le(s, bound - 1); }
int count_gt(const std::set<int>& s, int bound) { return count_ge(s, bound + 1); }

Cardinalities cardinalities(const Topology& t, int i, int kappa) {
    const PairSets p = neighbor_sets(t, i);
    Cardinalities c;
    c.I_i_le_im1 = count_le(p.I_i, i - 1);
    c.I_im1_ge_i = count_ge(p.I_im1, i);
    c.R_im1_le_km1 = count_le(p.R_im1, kappa - 1);
    c.R_i_le_km1 = count_le(p.R_i, kappa - 1);
    c.R_i_ge_k = count_ge(p.R_i, kappa);
    c.R_im1_ge_k = count_ge(p.R_im1, kappa);
    return c;
}

int zeta(const Topology& t, int i) {
    const int z_fwd = t.receives(i - 1, i) ? 1 : 0;  // z_{i-1}^i
    const int z_bwd = t.receives(i, i - 1) ? 1 : 0;  // z_i^{i-1}
    if (z_fwd == 0 && z_bwd == 1) return 0;
    if (z_fwd == 1 && z_bwd == 1) return z_fwd;
    if (z_fwd == 0 && z_bwd == 0) return 0;
    return z_fwd;
}

}  // namespace platoon

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace platoon {

enum class TopologyKind { PF, TPF, MPF, PFL, TPFL, BD, BDL, TPSF, TBPF, SPTF, Custom };

std::string kind_name(TopologyKind k);
TopologyKind kind_from_name(const std::string& name);  // throws std::invalid_argument
// The ten named kinds in report column order.
std::vector<TopologyKind> standard_kinds();

// Who-hears-whom over vehicles {0..n}; vehicle 0 is the leader and hears nobody.
class Topology {
public:
    Topology() = default;
    Topology(int n, std::vector<std::set<int>> hears, TopologyKind kind, std::string name);

    int n() const { return n_; }
    TopologyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    // I_m, the vehicles m receives from. Empty for m = 0.
    const std::set<int>& hears(int m) const;
    // z: true if `receiver` gets information from `sender`.
    bool receives(int receiver, int sender) const;

private:
    int n_ = 0;
    std::vector<std::set<int>> hears_;  // index 0..n
    TopologyKind kind_ = TopologyKind::Custom;
    std::string name_;
};

// Out-of-range neighbors are dropped. mpf_depth is the number of immediate
// predecessors heard under MPF.
Topology build(TopologyKind kind, int n, int mpf_depth = 3);
Topology from_edges(int n, const std::vector<std::pair<int, int>>& receiver_sender, const std::string& name = "custom");
// One "receiver<-sender" per line; '#' starts a comment; an optional "n=<count>" line fixes the size.
Topology parse_edge_list(const std::string& text, const std::string& name = "custom");
Topology load_edge_list(const std::string& path);

// Sets attached to pair (i-1, i).
struct PairSets {
    std::set<int> I_i;     // I_i
    std::set<int> I_im1;   // I_{i-1}, empty when i-1 is the leader
    std::set<int> R_i;     // I_i without i-1
    std::set<int> R_im1;   // I_{i-1} without i
};

PairSets neighbor_sets(const Topology& t, int i);

int count_le(const std::set<int>& s, int bound);  // |{j in s : j <= bound}|
int count_ge(const std::set<int>& s, int bound);  // |{j in s : j >= bound}|
int count_lt(const std::set<int>& s, int bound);
int count_gt(const std::set<int>& s, int bound);

struct Cardinalities {
    int I_i_le_im1 = 0;     // |I_i^{<=i-1}|
    int I_im1_ge_i = 0;     // |I_{i-1}^{>=i}|
    int R_im1_le_km1 = 0;   // |R_{i-1}^{<=kappa-1}|
    int R_i_le_km1 = 0;     // |R_i^{<=kappa-1}|
    int R_i_ge_k = 0;       // |R_i^{>=kappa}|
    int R_im1_ge_k = 0;     // |R_{i-1}^{>=kappa}|
};

Cardinalities cardinalities(const Topology& t, int i, int kappa);

// Connection type of the pair (i-1, i) as a four-case table over
// z_{i-1}^i and z_i^{i-1}; every case evaluates to z_{i-1}^i.
int zeta(const Topology& t, int i);

}  // namespace platoon

#include "platoon/scenario.hpp"

#include "platoon/linalg.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace platoon {

using nlohmann::json;

std::vector<double> ScenarioSpec::taus() const {
    std::vector<double> t;
    t.reserve(vehicles.size());
    for (const auto& v : vehicles) t.push_back(v.engine_tc);
    return t;
}

double ScenarioSpec::vehicle_length(int m) const {
    return m == 0 ? leader_length : vehicles.at(m - 1).length;
}

double ScenarioSpec::omega(int i) const {
    return vehicle_length(i - 1) + desired_gap.at(i - 1);
}

int ScenarioSpec::n_steps() const {
    return static_cast<int>(std::llround(horizon / step));
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("validation error: " + what + " violated");
}

bool finite(double x) { return std::isfinite(x); }

std::string onset_name(LeaderOnset o) { return o == LeaderOnset::Step ? "step" : "continuous"; }

LeaderOnset onset_from(const std::string& s) {
    if (s == "step") return LeaderOnset::Step;
    if (s == "continuous") return LeaderOnset::Continuous;
    throw ConfigError("validation error: leader.onset must be 'step' or 'continuous', got '" + s + "'");
}

// Accepts a scalar (broadcast to n) or a list of length n.
std::vector<double> per_pair(const json& j, int n, const char* field) {
    if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(n), j.get<double>());
    auto v = j.get<std::vector<double>>();
    require(static_cast<int>(v.size()) == n, std::string(field) + " length == n_followers");
    return v;
}

}  // namespace

void validate(const ScenarioSpec& s) {
    require(s.n_followers >= 1, "n_followers >= 1");
    const auto n = static_cast<std::size_t>(s.n_followers);
    require(s.vehicles.size() == n, "vehicles length == n_followers");
    require(s.initials.size() == n + 1, "initials length == n_followers + 1");
    require(s.desired_gap.size() == n, "desired_gap length == n_followers");
    require(s.safe_gap.size() == n, "safe_gap length == n_followers");
    for (const auto& v : s.vehicles) {
        require(v.mass > 0 && v.cross_section > 0 && v.drag_coeff > 0 && v.mech_drag > 0 &&
                    v.length > 0 && v.engine_tc > 0,
                "vehicle parameters strictly positive");
    }
    require(s.leader_length > 0, "leader_length > 0");
    require(s.air_density > 0, "air_density > 0");
    for (const auto& x : s.initials)
        require(finite(x.position) && finite(x.velocity) && finite(x.acceleration), "finite initial state");
    for (std::size_t i = 0; i < n; ++i) {
        require(s.safe_gap[i] > 0, "safe_gap > 0");
        require(s.safe_gap[i] < s.desired_gap[i], "safe_gap < desired_gap");
    }
    require(s.step > 0, "step > 0");
    require(s.horizon >= s.step, "horizon >= step");

    const auto& num = s.leader_traj.numerator;
    const auto& den = s.leader_traj.denominator;
    require(!den.empty() && den.front() != 0.0, "leader denominator leading coefficient nonzero");
    require(den.size() >= 2, "leader denominator degree >= 1");
    // Leading zeros in the numerator do not count toward its degree.
    std::size_t lead = 0;
    while (lead < num.size() && num[lead] == 0.0) ++lead;
    const std::size_t num_deg = num.size() > lead ? num.size() - lead - 1 : 0;
    require(num.size() == lead || den.size() - 1 >= num_deg + 1,
            "leader denominator degree >= numerator degree + 1");
    for (const auto& r : poly_roots(den))
        require(r.real() < 0.0, "leader denominator roots in the open left half-plane");
}

ScenarioSpec parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    ScenarioSpec s;
    try {
        s.name = j.value("name", std::string("custom"));
        for (const auto& v : j.at("vehicles")) {
            VehicleParams p;
            p.mass = v.at("mass").get<double>();
            p.cross_section = v.at("cross_section").get<double>();
            p.drag_coeff = v.at("drag_coeff").get<double>();
            p.mech_drag = v.at("mech_drag").get<double>();
            p.length = v.at("length").get<double>();
            p.engine_tc = v.at("engine_tc").get<double>();
            s.vehicles.push_back(p);
        }
        s.n_followers = static_cast<int>(s.vehicles.size());
        for (const auto& x : j.at("initials")) {
            s.initials.push_back({x.at("position").get<double>(), x.at("velocity").get<double>(),
                                  x.at("acceleration").get<double>()});
        }
        const auto& L = j.at("leader");
        s.leader_length = L.at("length").get<double>();
        s.leader_traj.numerator = L.at("numerator").get<std::vector<double>>();
        s.leader_traj.denominator = L.at("denominator").get<std::vector<double>>();
        s.onset = onset_from(L.value("onset", std::string("step")));
        const auto& d = j.at("distances");
        s.desired_gap = per_pair(d.at("desired"), s.n_followers, "desired_gap");
        s.safe_gap = per_pair(d.at("safe"), s.n_followers, "safe_gap");
        if (j.contains("sampling")) {
            s.horizon = j["sampling"].value("horizon", s.horizon);
            s.step = j["sampling"].value("step", s.step);
        }
        s.air_density = j.value("air_density", s.air_density);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field error: ") + e.what());
    }
    if (!s.initials.empty()) s.leader_traj.initial_velocity = s.initials.front().velocity;
    validate(s);
    return s;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioSpec& s) {
    json j;
    j["name"] = s.name;
    j["vehicles"] = json::array();
    for (const auto& v : s.vehicles) {
        j["vehicles"].push_back({{"mass", v.mass},
                                 {"cross_section", v.cross_section},
                                 {"drag_coeff", v.drag_coeff},
                                 {"mech_drag", v.mech_drag},
                                 {"length", v.length},
                                 {"engine_tc", v.engine_tc}});
    }
    j["initials"] = json::array();
    for (const auto& x : s.initials)
        j["initials"].push_back({{"position", x.position}, {"velocity", x.velocity}, {"acceleration", x.acceleration}});
    j["leader"] = {{"length", s.leader_length},
                   {"numerator", s.leader_traj.numerator},
                   {"denominator", s.leader_traj.denominator},
                   {"onset", onset_name(s.onset)}};
    j["distances"] = {{"desired", s.desired_gap}, {"safe", s.safe_gap}};
    j["sampling"] = {{"horizon", s.horizon}, {"step", s.step}};
    j["air_density"] = s.air_density;
    return j.dump(2);
}

bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) {
    if (a.name != b.name || a.n_followers != b.n_followers || a.leader_length != b.leader_length ||
        a.horizon != b.horizon || a.step != b.step || a.air_density != b.air_density || a.onset != b.onset ||
        a.desired_gap != b.desired_gap || a.safe_gap != b.safe_gap ||
        a.leader_traj.numerator != b.leader_traj.numerator ||
        a.leader_traj.denominator != b.leader_traj.denominator ||
        a.leader_traj.initial_velocity != b.leader_traj.initial_velocity ||
        a.vehicles.size() != b.vehicles.size() || a.initials.size() != b.initials.size())
        return false;
    for (std::size_t i = 0; i < a.vehicles.size(); ++i) {
        const auto &p = a.vehicles[i], &q = b.vehicles[i];
        if (p.mass != q.mass || p.cross_section != q.cross_section || p.drag_coeff != q.drag_coeff ||
            p.mech_drag != q.mech_drag || p.length != q.length || p.engine_tc != q.engine_tc)
            return false;
    }
    for (std::size_t i = 0; i < a.initials.size(); ++i) {
        const auto &p = a.initials[i], &q = b.initials[i];
        if (p.position != q.position || p.velocity != q.velocity || p.acceleration != q.acceleration) return false;
    }
    return true;
}

ScenarioSpec preset(int case_no, int acc_no) {
    static const double taus[3][4] = {{1, 1, 1, 1}, {0.7, 0.6, 1, 0.9}, {0.7, 0.8, 0.4, 0.5}};
    static const double mass[4] = {1900.258, 1800.036, 1950.98, 2000.877};
    static const double area[4] = {2.444, 2.713, 2.543, 3.791};
    static const double cd[4] = {0.412, 0.311, 0.359, 0.511};
    static const double dm[4] = {4.111, 3.831, 3.902, 4.001};
    static const double x0[5] = {2.832, -11.424, -28.065, -41.661, -57.081};
    static const double v0[5] = {4.760, 7.313, 7.806, 10.738, 10.384};
    static const double a0[5] = {4.000, 5.841, 6.405, 8.533, 9.599};
    if (case_no < 1 || case_no > 3 || acc_no < 1 || acc_no > 3)
        throw ConfigError("unknown preset case" + std::to_string(case_no) + "-acc" + std::to_string(acc_no));

    ScenarioSpec s;
    s.name = "case" + std::to_string(case_no) + "-acc" + std::to_string(acc_no);
    s.n_followers = 4;
    for (int i = 0; i < 4; ++i)
        s.vehicles.push_back({mass[i], area[i], cd[i], dm[i], 4.0, taus[case_no - 1][i]});
    for (int i = 0; i < 5; ++i) s.initials.push_back({x0[i], v0[i], a0[i]});
    s.leader_length = 4.0;
    switch (acc_no) {
        case 1:  // (4s+14)/(s^2+1.5s+1)
            s.leader_traj.numerator = {4, 14};
            s.leader_traj.denominator = {1, 1.5, 1};
            break;
        case 2:  // (4s+1)(s+1)/((s+2)(s^2+2s+12))
            s.leader_traj.numerator = {4, 5, 1};
            s.leader_traj.denominator = {1, 4, 16, 24};
            break;
        default:  // (4s+1)/(s^2+3s+2)
            s.leader_traj.numerator = {4, 1};
            s.leader_traj.denominator = {1, 3, 2};
            break;
    }
    s.leader_traj.initial_velocity = v0[0];
    s.desired_gap.assign(4, 5.0);
    s.safe_gap.assign(4, 3.0);
    s.horizon = 25.0;
    s.step = 0.01;
    s.air_density = 1.204;
    s.onset = LeaderOnset::Step;
    validate(s);
    return s;
}

ScenarioSpec preset_by_name(const std::string& name) {
    int c = 0, a = 0;
    if (std::sscanf(name.c_str(), "case%d-acc%d", &c, &a) != 2)
        throw ConfigError("unknown preset '" + name + "' (expected caseN-accM)");
    return preset(c, a);
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (int c = 1; c <= 3; ++c)
        for (int a = 1; a <= 3; ++a) out.push_back("case" + std::to_string(c) + "-acc" + std::to_string(a));
    return out;
}

GainGrid standard_grid() {
    GainGrid g;
    for (int i = 0; i < 40; ++i) {
        g.k_values.push_back(0.1 + 0.5 * i);
        g.b_values.push_back(0.1 + 0.5 * i);
    }
    g.h_values = {4.0};
    return g;
}

std::vector<PairInitials> pairwise_initials(const ScenarioSpec& s) {
    std::vector<PairInitials> out;
    for (int i = 1; i <= s.n_followers; ++i) {
        const auto& a = s.initials[static_cast<std::size_t>(i - 1)];
        const auto& b = s.initials[static_cast<std::size_t>(i)];
        PairInitials p;
        p.rho = a.position - b.position;
        p.nu = a.velocity - b.velocity;
        p.phi = a.acceleration - b.acceleration;
        p.theta = p.rho - s.omega(i);
        out.push_back(p);
    }
    return out;
}

LeaderModel realize_leader(const LeaderTrajectory& traj) {
    std::vector<double> den = traj.denominator;
    std::vector<double> num = traj.numerator;
    const double lead = den.front();
    for (auto& d : den) d /= lead;
    for (auto& c : num) c /= lead;
    const int m = static_cast<int>(den.size()) - 1;
    LeaderModel L;
    L.A = Eigen::MatrixXd::Zero(m, m);
    L.B = Eigen::VectorXd::Zero(m);
    L.C = Eigen::RowVectorXd::Zero(m);
    for (int j = 0; j < m; ++j) L.A(0, j) = -den[static_cast<std::size_t>(j + 1)];
    for (int j = 1; j < m; ++j) L.A(j, j - 1) = 1.0;
    L.B(0) = 1.0;
    // C holds numerator coefficients aligned to s^{m-1} .. s^0.
    const int off = m - static_cast<int>(num.size());
    for (int j = 0; j < static_cast<int>(num.size()); ++j)
        if (j + off >= 0) L.C(j + off) = num[static_cast<std::size_t>(j)];
    return L;
}

LeaderSamples leader_signals(const LeaderTrajectory& traj, const std::vector<double>& t) {
    LeaderSamples out;
    if (t.empty()) return out;
    if (t.front() != 0.0) throw std::invalid_argument("leader_signals: time grid must start at 0");
    const LeaderModel L = realize_leader(traj);
    const int m = L.order();
    // Augmented state [w; v0].
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + 1, m + 1);
    M.topLeftCorner(m, m) = L.A;
    M.block(m, 0, 1, m) = L.C;
    Eigen::VectorXd z(m + 1);
    z.head(m) = L.B;
    z(m) = traj.initial_velocity;
    const double h = t.size() > 1 ? t[1] - t[0] : 0.0;
    const Eigen::MatrixXd P = rk4_step_matrix(M, h);
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0) {
            if (std::abs((t[k] - t[k - 1]) - h) > 1e-9 * std::max(1.0, h))
                throw std::invalid_argument("leader_signals: time grid must be uniform");
            z = P * z;
        }
        const Eigen::VectorXd w = z.head(m);
        out.a.push_back(L.accel(w));
        out.adot.push_back(L.jerk(w));
        out.v.push_back(z(m));
    }
    return out;
}

}  // namespace platoon

#include "platoon/simulator.hpp"

#include "platoon/linalg.hpp"
#include "platoon/vehicle.hpp"

#include <cmath>
#include <stdexcept>

namespace platoon {

namespace {

using Vec = Eigen::VectorXd;

// off[m] = sum of omega_kappa for kappa <= m; the tilde position is x_m - x_0 + off[m].
std::vector<double> spacing_offsets(const ScenarioSpec& s) {
    std::vector<double> off(static_cast<std::size_t>(s.n_followers + 1), 0.0);
    for (int m = 1; m <= s.n_followers; ++m) off[static_cast<std::size_t>(m)] = off[static_cast<std::size_t>(m - 1)] + s.omega(m);
    return off;
}

void size_bundle(TrajectoryBundle& b, int n, std::size_t samples) {
    for (auto* f : {&b.u, &b.a, &b.j, &b.v, &b.x, &b.c, &b.p, &b.vrel, &b.arel, &b.D}) {
        f->assign(static_cast<std::size_t>(n), {});
        for (auto& row : *f) row.reserve(samples);
    }
    b.t.reserve(samples);
}

struct Absolute {
    std::vector<double> x, v, a, u;  // index 0 is the leader; u[0] unused
};

void record(TrajectoryBundle& b, const ScenarioSpec& s, const Absolute& st, double t) {
    const int n = s.n_followers;
    b.t.push_back(t);
    for (int i = 1; i <= n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto r = k - 1;
        const VehicleParams& vp = s.vehicles[r];
        b.u[r].push_back(st.u[k]);
        b.a[r].push_back(st.a[k]);
        b.j[r].push_back((st.u[k] - st.a[k]) / vp.engine_tc);
        b.v[r].push_back(st.v[k]);
        b.x[r].push_back(st.x[k]);
        b.c[r].push_back(feedback_linearize(st.u[k], {st.x[k], st.v[k], st.a[k]}, vp, s.air_density));
        const double p = st.x[k - 1] - st.x[k] - s.omega(i);
        b.p[r].push_back(p);
        b.vrel[r].push_back(st.v[k - 1] - st.v[k]);
        b.arel[r].push_back(st.a[k - 1] - st.a[k]);
        b.D[r].push_back(p + s.desired_gap[r]);
    }
}

// Controller input of follower i given tilde states (index 0 = leader, all zero).
double control(const Topology& topo, const GainVector& K, int i, const std::vector<double>& xt,
               const std::vector<double>& vt, const std::vector<double>& at) {
    const auto ii = static_cast<std::size_t>(i);
    double u = 0.0;
    for (int j : topo.hears(i)) {
        const auto jj = static_cast<std::size_t>(j);
        u -= K.k * (xt[ii] - xt[jj]) + K.b * (vt[ii] - vt[jj]) + K.h * (at[ii] - at[jj]);
    }
    return u;
}

bool blown(const Vec& z, double guard) {
    const double m = z.cwiseAbs().maxCoeff();
    return !(m <= guard);
}

}  // namespace

std::vector<InitialState> simulation_start(const ScenarioSpec& s) {
    validate(s);
    std::vector<InitialState> out = s.initials;
    const double a0 = realize_leader(s.leader_traj).initial_accel();
    if (s.onset == LeaderOnset::Step) {
        const double base = s.initials.front().acceleration;
        for (std::size_t m = 1; m < out.size(); ++m) out[m].acceleration -= base;
    }
    out.front().acceleration = a0;
    return out;
}

std::vector<PairInitials> simulation_pair_initials(const ScenarioSpec& s) {
    const auto st = simulation_start(s);
    std::vector<PairInitials> out;
    for (int i = 1; i <= s.n_followers; ++i) {
        const auto& a = st[static_cast<std::size_t>(i - 1)];
        const auto& b = st[static_cast<std::size_t>(i)];
        PairInitials p;
        p.rho = a.position - b.position;
        p.nu = a.velocity - b.velocity;
        p.phi = a.acceleration - b.acceleration;
        p.theta = p.rho - s.omega(i);
        out.push_back(p);
    }
    return out;
}

TrajectoryBundle simulate_vehicles(const ScenarioSpec& s, const Topology& topo, const GainVector& K, const SimOptions& opt) {
    const int n = s.n_followers;
    if (topo.n() != n) throw std::invalid_argument("simulate_vehicles: topology size does not match scenario");
    const LeaderModel L = realize_leader(s.leader_traj);
    const int m = L.order();
    const std::vector<double> off = spacing_offsets(s);
    const auto start = simulation_start(s);

    // y = [w; x0; v0; (x_i, v_i, a_i) for i = 1..n]
    const int dim = m + 2 + 3 * n;
    Vec y(dim);
    y.head(m) = L.B;
    y(m) = start[0].position;
    y(m + 1) = start[0].velocity;
    for (int i = 1; i <= n; ++i) {
        const auto& st = start[static_cast<std::size_t>(i)];
        y.segment<3>(m + 2 + 3 * (i - 1)) << st.position, st.velocity, st.acceleration;
    }

    std::vector<double> xt(static_cast<std::size_t>(n + 1)), vt(xt.size()), at(xt.size());
    Absolute abs;
    abs.x.resize(xt.size());
    abs.v.resize(xt.size());
    abs.a.resize(xt.size());
    abs.u.resize(xt.size());

    // Unpacks y into absolute and tilde states and evaluates every controller.
    auto unpack = [&](const Vec& z) {
        abs.x[0] = z(m);
        abs.v[0] = z(m + 1);
        abs.a[0] = L.accel(z.head(m));
        for (int i = 1; i <= n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const int o = m + 2 + 3 * (i - 1);
            abs.x[k] = z(o);
            abs.v[k] = z(o + 1);
            abs.a[k] = z(o + 2);
            xt[k] = abs.x[k] - abs.x[0] + off[k];
            vt[k] = abs.v[k] - abs.v[0];
            at[k] = abs.a[k] - abs.a[0];
        }
        for (int i = 1; i <= n; ++i) abs.u[static_cast<std::size_t>(i)] = control(topo, K, i, xt, vt, at);
    };

    auto deriv = [&](const Vec& z) {
        unpack(z);
        Vec d(dim);
        d.head(m) = L.A * z.head(m);
        d(m) = abs.v[0];
        d(m + 1) = abs.a[0];
        for (int i = 1; i <= n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const VehicleParams& vp = s.vehicles[k - 1];
            const int o = m + 2 + 3 * (i - 1);
            d(o) = abs.v[k];
            d(o + 1) = abs.a[k];
            if (opt.plant == Plant::Linear) {
                d(o + 2) = (abs.u[k] - abs.a[k]) / vp.engine_tc;
            } else {
                const VehicleState vs{abs.x[k], abs.v[k], abs.a[k]};
                d(o + 2) = nonlinear_derivative(vs, feedback_linearize(abs.u[k], vs, vp, s.air_density), vp, s.air_density);
            }
        }
        return d;
    };

    const int steps = s.n_steps();
    const double h = s.step;
    TrajectoryBundle b;
    size_bundle(b, n, static_cast<std::size_t>(steps + 1));
    unpack(y);
    record(b, s, abs, 0.0);
    for (int k = 1; k <= steps; ++k) {
        const Vec k1 = deriv(y);
        const Vec k2 = deriv(y + 0.5 * h * k1);
        const Vec k3 = deriv(y + 0.5 * h * k2);
        const Vec k4 = deriv(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (blown(y, opt.guard)) {
            b.diverged = true;
            break;
        }
        unpack(y);
        record(b, s, abs, k * h);
    }
    return b;
}

CoupledRunner::CoupledRunner(const ScenarioSpec& spec, double guard)
    : spec_(spec), leader_(realize_leader(spec.leader_traj)), guard_(guard) {
    const int n = spec_.n_followers;
    const int m = leader_.order();
    const auto pairs = simulation_pair_initials(spec_);
    z0_ = Vec::Zero(3 * n + m + 2);
    for (int i = 0; i < n; ++i) z0_.segment<3>(3 * i) << pairs[static_cast<std::size_t>(i)].theta, pairs[static_cast<std::size_t>(i)].nu,
        pairs[static_cast<std::size_t>(i)].phi;
    z0_.segment(3 * n, m) = leader_.B;
    z0_(3 * n + m) = spec_.initials.front().position;
    z0_(3 * n + m + 1) = spec_.initials.front().velocity;
}

Eigen::MatrixXd CoupledRunner::augmented(const PlatoonClosedLoop& cl) const {
    const int n = cl.n;
    if (n != spec_.n_followers) throw std::invalid_argument("CoupledRunner: system size does not match scenario");
    const int m = leader_.order();
    const int N = 3 * n + m + 2;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    M.topLeftCorner(3 * n, 3 * n) = cl.A;
    // Forcing is linear in (a0, a0dot) = (C w, C A w).
    const Vec fa = cl.forcing(1.0, 0.0), fj = cl.forcing(0.0, 1.0);
    const Eigen::RowVectorXd CA = leader_.C * leader_.A;
    M.block(0, 3 * n, 3 * n, m) = fa * leader_.C + fj * CA;
    M.block(3 * n, 3 * n, m, m) = leader_.A;
    M(3 * n + m, 3 * n + m + 1) = 1.0;
    M.block(3 * n + m + 1, 3 * n, 1, m) = leader_.C;
    return M;
}

std::optional<std::vector<double>> CoupledRunner::min_distance_errors(const PlatoonClosedLoop& cl) const {
    const int n = cl.n;
    const Eigen::MatrixXd P = rk4_step_matrix(augmented(cl), spec_.step);
    Vec z = z0_, next(z.size());
    std::vector<double> pmin(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pmin[static_cast<std::size_t>(i)] = z(3 * i);
    const int steps = spec_.n_steps();
    for (int k = 0; k < steps; ++k) {
        next.noalias() = P * z;
        z.swap(next);
        if (blown(z, guard_)) return std::nullopt;
        for (int i = 0; i < n; ++i) pmin[static_cast<std::size_t>(i)] = std::min(pmin[static_cast<std::size_t>(i)], z(3 * i));
    }
    return pmin;
}

TrajectoryBundle CoupledRunner::run(const PlatoonClosedLoop& cl, const Topology& topo, const GainVector& K) const {
    const int n = cl.n;
    const int m = leader_.order();
    const Eigen::MatrixXd P = rk4_step_matrix(augmented(cl), spec_.step);
    const std::vector<double> off = spacing_offsets(spec_);
    const int steps = spec_.n_steps();

    TrajectoryBundle b;
    size_bundle(b, n, static_cast<std::size_t>(steps + 1));
    std::vector<double> xt(static_cast<std::size_t>(n + 1)), vt(xt.size()), at(xt.size());
    Absolute abs;
    abs.x.resize(xt.size());
    abs.v.resize(xt.size());
    abs.a.resize(xt.size());
    abs.u.resize(xt.size());

    auto emit = [&](const Vec& z, double t) {
        // Tilde states: X_m = -(e_1 + ... + e_m); the leader's are zero.
        xt[0] = vt[0] = at[0] = 0.0;
        for (int i = 1; i <= n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            xt[k] = xt[k - 1] - z(3 * (i - 1));
            vt[k] = vt[k - 1] - z(3 * (i - 1) + 1);
            at[k] = at[k - 1] - z(3 * (i - 1) + 2);
        }
        abs.x[0] = z(3 * n + m);
        abs.v[0] = z(3 * n + m + 1);
        abs.a[0] = leader_.accel(z.segment(3 * n, m));
        for (int i = 1; i <= n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            abs.x[k] = abs.x[0] + xt[k] - off[k];
            abs.v[k] = abs.v[0] + vt[k];
            abs.a[k] = abs.a[0] + at[k];
            abs.u[k] = control(topo, K, i, xt, vt, at);
        }
        record(b, spec_, abs, t);
    };

    Vec z = z0_, next(z.size());
    emit(z, 0.0);
    for (int k = 1; k <= steps; ++k) {
        next.noalias() = P * z;
        z.swap(next);
        if (blown(z, guard_)) {
            b.diverged = true;
            break;
        }
        emit(z, k * spec_.step);
    }
    return b;
}

TrajectoryBundle simulate_coupled(const ScenarioSpec& spec, const Topology& topo, const GainVector& K) {
    return CoupledRunner(spec).run(closed_loop(topo, spec.taus(), K), topo, K);
}

}  // namespace platoon

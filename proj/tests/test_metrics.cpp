#include "platoon/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace platoon;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// First t > 0 with D + v t + a t^2 / 2 <= 0 inside [0, horizon], by scan and bisection.
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
    return kInf;
}

// One-follower bundle with the given per-sample signals.
TrajectoryBundle bundle(const std::vector<double>& u, double D = 10.0, double vrel = 0.0, double arel = 0.0) {
    TrajectoryBundle b;
    const std::size_t T = u.size();
    for (std::size_t k = 0; k < T; ++k) b.t.push_back(0.01 * static_cast<double>(k));
    b.u = {u};
    b.c = {u};
    b.a = {std::vector<double>(T, 1.0)};
    b.j = {std::vector<double>(T, 2.0)};
    b.v = b.x = {std::vector<double>(T, 0.0)};
    b.D = {std::vector<double>(T, D)};
    b.p = {std::vector<double>(T, D - 5.0)};
    b.vrel = {std::vector<double>(T, vrel)};
    b.arel = {std::vector<double>(T, arel)};
    return b;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("time to collision cases") {
    CHECK(mttc(0.0, 1.0, 0.0) == 0.0);
    CHECK(mttc(-1.0, -1.0, 0.0) == 0.0);
    CHECK(mttc(10.0, -2.0, 0.0) == doctest::Approx(5.0));
    CHECK(mttc(10.0, 2.0, 0.0) == kInf);
    CHECK(mttc(10.0, 0.0, 0.0) == kInf);
    CHECK(mttc(10.0, 0.0, -5.0) == doctest::Approx(2.0));
    CHECK(mttc(10.0, -1.0, 1.0) == kInf);           // discriminant negative
    CHECK(mttc(1.0, -3.0, 1.0) == doctest::Approx(3.0 - std::sqrt(7.0)));
    CHECK(std::abs(mttc(1e-12, -1.0, 2.0) / 1e-12 - 1.0) < 1e-9);  // no cancellation loss
}

TEST_CASE("time to collision against a marching oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> Dd(0.01, 20.0), Vv(-10.0, 10.0), Aa(-5.0, 5.0);
    const double horizon = 200.0;
    for (int k = 0; k < 1000; ++k) {
        const double D = Dd(rng), v = Vv(rng), a = Aa(rng);
        const double ref = march(D, v, a, horizon);
        const double got = mttc(D, v, a);
        CAPTURE(D);
        CAPTURE(v);
        CAPTURE(a);
        if (std::isinf(ref))
            CHECK(got > horizon - 1e-3);
        else
            CHECK(got == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("probability and deceleration transforms") {
    CHECK(pmttc(0.0) == 100.0);
    CHECK(pmttc(kInf) == 0.0);
    CHECK(pmttc(10.0) == doctest::Approx(100.0 / std::exp(1.0)));
    CHECK(mdrac(10.0, -4.0, 3.0) == doctest::Approx(0.8));
    CHECK(mdrac(10.0, 2.0, -3.0) == 3.0);
    CHECK(mdrac(10.0, 2.0, 1.0) == 0.0);
    CHECK(mdrac(10.0, 0.0, -1.0) == 0.0);
    CHECK(metric_name(MetricId::EJ) == "AAMEJ");
    CHECK(all_metrics().size() == kMetricCount);
}

TEST_CASE("accumulation") {
    CHECK(accumulate({1, 2, 3}) == std::vector<double>{1, 3, 6});
    CHECK(accumulate({}).empty());
}

TEST_CASE("momentary scaling") {
    TrajectoryBundle b = bundle({2.0, 2.0}, 10.0, -4.0, 0.0);
    const MomentarySet sum = momentary(b, {}, 0.01);
    CHECK(sum[2][0] == doctest::Approx(4.0));
    CHECK(sum[3][0] == doctest::Approx(1.0));
    CHECK(sum[4][0] == doctest::Approx(4.0));
    CHECK(sum[1][0] == doctest::Approx(0.8));
    CHECK(sum[0][0] == doctest::Approx(100.0 * std::exp(-0.25)));

    // Two followers: the table scale averages over vehicles and weights by dt.
    b.u.push_back(b.u[0]);
    b.c.push_back(b.c[0]);
    b.a.push_back(b.a[0]);
    b.j.push_back(b.j[0]);
    b.v.push_back(b.v[0]);
    b.x.push_back(b.x[0]);
    b.D.push_back(b.D[0]);
    b.p.push_back(b.p[0]);
    b.vrel.push_back(b.vrel[0]);
    b.arel.push_back(b.arel[0]);
    MetricConfig cfg;
    cfg.scale = MetricScale::Table;
    const MomentarySet tab = momentary(b, cfg, 0.01);
    CHECK(tab[2][0] == doctest::Approx(4.0 * 0.01 / 10.0));
    CHECK(tab[1][0] == doctest::Approx(0.8));
    CHECK(tab[0][0] == doctest::Approx(100.0 * std::exp(-0.25) * 0.01));

    b.c[0] = {5.0, 5.0};
    cfg.eei = EnergySignal::EngineForce;
    CHECK(momentary(b, cfg, 0.01)[2][0] == doctest::Approx((25.0 + 4.0) / 2.0 * 0.001));
}

TEST_CASE("aggregator mean and sample deviation") {
    MetricAggregator agg({}, 0.01);
    agg.add(bundle({std::sqrt(10.0)}));
    agg.add(bundle({std::sqrt(30.0)}));
    CHECK(agg.count() == 2);
    const auto s = agg.finish();
    const MetricSeries& e = s[static_cast<std::size_t>(MetricId::EEI)];
    CHECK(e.final_mean() == doctest::Approx(20.0));
    CHECK(e.final_sd() == doctest::Approx(std::sqrt(200.0)));
    CHECK(e.mom_mean[0] == doctest::Approx(20.0));
    CHECK(e.count == 2);

    MetricAggregator one({}, 0.01);
    one.add(bundle({1.0, 2.0, 3.0}));
    const auto o = one.finish();
    CHECK(o[2].acc_mean == std::vector<double>{1.0, 5.0, 14.0});
    CHECK(o[2].final_sd() == 0.0);

    TrajectoryBundle bad = bundle({1.0});
    bad.diverged = true;
    CHECK_THROWS_AS(agg.add(bad), std::invalid_argument);
    CHECK_THROWS_AS(agg.add(bundle({1.0, 1.0})), std::invalid_argument);
}

TEST_CASE("safe-area index") {
    using C = CgvClass;
    CHECK(sacgdi({C::StableSafe, C::StableUnsafe, C::Unstable, C::StableSafe}) == doctest::Approx(50.0));
    CHECK(sacgdi({C::StableSafe}) == 0.0);
    CHECK(sacgdi({C::StableColliding}) == 100.0);
    CHECK_THROWS_AS(sacgdi({}), std::invalid_argument);
}

}  // TEST_SUITE

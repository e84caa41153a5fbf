#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tazrp/speed.hpp"
#include "tazrp/stats.hpp"

using namespace tazrp;

namespace {

// Gillespie oracle for p_{0,0} alone. Only stronger particles can block it,
// and those come from the reservoir; the particles at 0 below it and every
// column to the right are weaker and never affect it. Each occupied site and
// the reservoir fire at rate 1.
double gillespie_mean_speed(int runs, double horizon, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::exponential_distribution<double> ex(1.0);
    const int width = static_cast<int>(horizon + 10.0 * std::sqrt(horizon)) + 5;
    double sum = 0.0;
    for (int r = 0; r < runs; ++r) {
        std::vector<int> n(static_cast<std::size_t>(width) + 2, 0);
        int p = 0;
        double t = 0.0;
        std::vector<int> live;
        while (true) {
            live.assign(1, -1);
            for (int x = 0; x <= width; ++x)
                if (n[static_cast<std::size_t>(x)] > 0 || x == p) live.push_back(x);
            t += ex(g) / static_cast<double>(live.size());
            if (t > horizon) break;
            const int x = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(g)];
            if (x == -1) {
                ++n[0];
            } else if (n[static_cast<std::size_t>(x)] > 0) {
                --n[static_cast<std::size_t>(x)];
                ++n[static_cast<std::size_t>(x) + 1];
            } else {
                p = x + 1;
            }
        }
        sum += p / horizon;
    }
    return sum / runs;
}

}  // namespace

TEST_CASE("engine speed of the leading particle matches a Gillespie oracle") {
    const double horizon = 30.0;
    const int runs = 3000;
    SpeedRunSpec spec;
    spec.depth = 2;
    spec.horizon = horizon;
    const auto ens = speed_ensemble(spec, runs, 71);
    std::vector<double> u;
    for (const auto& m : ens) u.push_back(m.at(0, 0));
    const double engine = stats::mean(u);
    const double oracle = gillespie_mean_speed(runs, horizon, 72);
    // Per-run sd of u is below 0.3, so the difference has sd below 0.008.
    CHECK(std::abs(engine - oracle) < 0.03);
}

TEST_CASE("speed ensembles are reproducible and column order holds") {
    SpeedRunSpec spec;
    spec.depth = 10;
    spec.horizon = 50.0;
    const auto a = speed_ensemble(spec, 40, 73);
    const auto b = speed_ensemble(spec, 40, 73);
    for (std::size_t r = 0; r < a.size(); ++r) {
        REQUIRE(a[r].u == b[r].u);
        if (a[r].tainted) continue;
        for (int i = 1; i < spec.depth; ++i) CHECK(a[r].position(0, i) <= a[r].position(0, i - 1));
    }
}

TEST_CASE("column counts are monotone in the threshold") {
    SpeedRunSpec spec;
    spec.depth = 20;
    spec.horizon = 60.0;
    const auto ens = speed_ensemble(spec, 200, 74);
    const auto cc = column_counts(ens, {0.1, 0.25, 0.5, 1.0});
    for (std::size_t k = 0; k < cc[0].counts.size(); ++k) {
        CHECK(cc[0].counts[k] >= cc[1].counts[k]);
        CHECK(cc[1].counts[k] >= cc[2].counts[k]);
        CHECK(cc[2].counts[k] >= cc[3].counts[k]);
    }
    double above_one = 0.0;
    for (auto n : cc[3].counts) above_one += n > 0 ? 1.0 : 0.0;
    // Asymptotically no speed exceeds 1; at T=60 the leading particle sometimes does.
    CHECK(above_one / static_cast<double>(cc[3].counts.size()) < 0.15);
}

TEST_CASE("interval and event estimators") {
    SpeedRunSpec spec;
    spec.z_lo = -1;
    spec.depth = 10;
    spec.horizon = 40.0;
    const auto ens = speed_ensemble(spec, 100, 75);
    CHECK_THROWS(interval_statistics(ens, 0.5, 0.5, 3.0));
    CHECK_THROWS(joint_cdf_estimate(ens, 1, 0, 0.5, 0.2));
    CHECK(two_column_event_estimate(ens, 1, 1, 0.3, 0.3) == 0.0);
    CHECK(joint_cdf_estimate(ens, 0, 1, 3.0, 3.0) == 1.0);
    CHECK(default_cluster_gap(100.0) == doctest::Approx(4.0));
}

TEST_CASE("clusters link neighbours within the gap") {
    SpeedMatrix m;
    m.depth = 4;
    m.horizon = 100.0;
    m.x = {50, 48, 30, 29};
    for (Site x : m.x) m.u.push_back(static_cast<double>(x) / 100.0);
    const auto c = clusters_of(m, 3.0);
    REQUIRE(c.size() == 2);
    CHECK(c[0].size == 2);
    CHECK(c[0].value == doctest::Approx(0.49));
    CHECK(c[1].size == 2);
}

TEST_CASE("overtaking scenarios") {
    CHECK_THROWS(parse_scenario("nope"));
    CHECK(overtaking_experiment(parse_scenario("tasep_PQ"), 0.0, 20, 1) == 0.0);
    const auto curve = overtaking_curve(parse_scenario("tasep_PQ"), {5.0, 20.0, 80.0}, 400, 76);
    CHECK(curve.frequency[0] <= curve.frequency[1]);
    CHECK(curve.frequency[1] <= curve.frequency[2]);
    CHECK(curve.frequency[2] == doctest::Approx(2.0 / 3.0).epsilon(0.15));
}

TEST_CASE("hydro profile near the middle of the fan") {
    const auto pts = hydro_profile(100.0, 100, {0.25}, 5, 77);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].theory == doctest::Approx(1.0).epsilon(0.05));
    CHECK(pts[0].estimate == doctest::Approx(pts[0].theory).epsilon(0.15));
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "tazrp/laws.hpp"
#include "tazrp/queueing.hpp"
#include "tazrp/stats.hpp"

using namespace tazrp;

TEST_CASE("Bernoulli-geometric pmf") {
    const BerGeomParams bg{2.0 / 7.0, 0.5};
    CHECK(ber_geom_pmf(bg, 0) == doctest::Approx(5.0 / 7.0));
    CHECK(ber_geom_pmf(bg, 2) == doctest::Approx(1.0 / 14.0));
    double total = 0.0;
    for (int k = 0; k < 200; ++k) total += ber_geom_pmf(bg, k);
    CHECK(total == doctest::Approx(1.0));
    // p = 1 is a geometric law on {1, 2, ...}.
    for (int k = 1; k < 6; ++k) CHECK(ber_geom_pmf({1.0, 0.4}, k) == doctest::Approx(0.6 * std::pow(0.4, k - 1)));
    CHECK(ber_geom_pmf({1.0, 0.4}, 0) == 0.0);
    CHECK_THROWS(ber_geom_pmf(bg, -1));
}

TEST_CASE("server with no arrivals wastes every service") {
    TypedPointProcess empty;
    empty.horizon = 100.0;
    empty.lambda = {0.5};
    const auto r = priority_queue_serve(empty, 1.0, 3, 100.0);
    CHECK(r.departures.events.empty());
    CHECK(r.unused.size() > 50);
    CHECK(r.work_conserving);
}

TEST_CASE("strict priority across classes") {
    TypedPointProcess arr;
    arr.horizon = 50.0;
    arr.lambda = {0.1, 0.1};
    arr.events = {{1.0, 2}, {1.5, 1}};
    int both_waiting = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto r = priority_queue_serve(arr, 1.0, seed, 50.0);
        REQUIRE(r.departures.events.size() == 2);
        if (r.departures.events[0].time <= 1.5) continue;  // class 2 left before class 1 arrived
        ++both_waiting;
        CHECK(r.departures.events[0].cls == 1);
        CHECK(r.departures.events[1].cls == 2);
    }
    CHECK(both_waiting > 5);
}

TEST_CASE("Burke: departures of an M/M/1 queue are Poisson") {
    TypedPointProcess arr = build_fixed_point({0.5}, 40000.0, 0.0, 41);
    const auto r = priority_queue_serve(arr, 1.0, 42, 40000.0);
    CHECK(r.work_conserving);
    auto gaps = r.departures.gaps(1, 1);
    gaps.erase(gaps.begin(), gaps.begin() + 100);
    const auto t = stats::ks_test(gaps, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-0.5 * x); });
    CHECK(t.statistic < 0.02);
}

TEST_CASE("fixed point: first level is Poisson, merged levels are Poisson") {
    const auto one = build_fixed_point({0.4}, 50000.0, 1000.0, 43);
    CHECK(static_cast<double>(one.events.size()) == doctest::Approx(0.4 * 49000.0).epsilon(0.02));
    const auto two = build_fixed_point({0.3, 0.2}, 50000.0, 100.0, 44);
    const auto merged = stats::ks_test(two.gaps(1, 2), [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-0.5 * x); });
    const auto first = stats::ks_test(two.gaps(1, 1), [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-0.3 * x); });
    CHECK(merged.statistic < 0.02);
    CHECK(first.statistic < 0.02);
    CHECK_THROWS(build_fixed_point({0.6, 0.5}, 100.0, 0.0, 1));
}

TEST_CASE("queue lengths: geometric marginals and geometric total") {
    const auto plan = default_plan({0.3, 0.2}, 1.0);
    const auto qs = sample_queue_lengths({0.3, 0.2}, 1.0, 30000, plan.spacing, 45);
    std::vector<std::int64_t> q1, tot;
    for (std::size_t k = 0; k < qs.size(); ++k) {
        q1.push_back(qs.at(k, 1));
        tot.push_back(qs.at(k, 1) + qs.at(k, 2));
    }
    CHECK(stats::tv_distance(stats::normalize(stats::histogram(q1)),
                             [](std::int64_t k) { return laws::geom0_pmf(0.3, k); }) < 0.02);
    CHECK(stats::tv_distance(stats::normalize(stats::histogram(tot)),
                             [](std::int64_t k) { return laws::geom0_pmf(0.5, k); }) < 0.02);
}

TEST_CASE("service rate scaling") {
    // Rate 2 with intensities (0.6, 0.4) matches rate 1 with (0.3, 0.2).
    const auto a = sample_queue_lengths({0.6, 0.4}, 2.0, 20000, default_plan({0.6, 0.4}, 2.0).spacing, 46);
    const auto b = sample_queue_lengths({0.3, 0.2}, 1.0, 20000, default_plan({0.3, 0.2}, 1.0).spacing, 47);
    for (int cls : {1, 2}) {
        std::vector<std::int64_t> x, y;
        for (std::size_t k = 0; k < a.size(); ++k) x.push_back(a.at(k, cls));
        for (std::size_t k = 0; k < b.size(); ++k) y.push_back(b.at(k, cls));
        CHECK(stats::tv_distance(stats::normalize(stats::histogram(x)), stats::normalize(stats::histogram(y))) < 0.03);
    }
}

TEST_CASE("tandem queues") {
    const auto t = tandem_two_queues({0.3, 0.2}, 50000, 48);
    std::vector<double> a, b;
    for (std::size_t k = 0; k < t.q0.size(); ++k) {
        a.push_back(t.q0.at(k, 1));
        b.push_back(t.q1.at(k, 1));
    }
    CHECK(std::abs(stats::correlation(a, b)) < 0.03);

    const auto thin = tandem_two_queues({0.3, 1e-4}, 20000, 49);
    double busy = 0.0;
    for (std::size_t k = 0; k < thin.q1.size(); ++k) busy += thin.q1.at(k, 2) >= 1 ? 1.0 : 0.0;
    CHECK(busy / static_cast<double>(thin.q1.size()) < 0.01);
}

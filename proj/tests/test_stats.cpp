#include <doctest.h>

#include <cmath>
#include <vector>

#include "tazrp/laws.hpp"
#include "tazrp/rng.hpp"
#include "tazrp/stats.hpp"

using namespace tazrp;

TEST_CASE("KS on a constant sample fails") {
    const std::vector<double> c(500, 0.5);
    const auto t = stats::ks_test(c, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK_FALSE(t.pass);
    CHECK(t.statistic == doctest::Approx(0.5));
}

TEST_CASE("input checks") {
    CHECK_THROWS(stats::ks_test(std::vector<double>(50, 0.1), [](double x) { return x; }));
    CHECK_THROWS(stats::chi_square({}, [](std::int64_t) { return 0.5; }));
    CHECK_THROWS(stats::histogram({1, -1}));
}

TEST_CASE("TV distance") {
    const std::vector<double> p{0.2, 0.3, 0.5};
    CHECK(stats::tv_distance(p, p) == 0.0);
    CHECK(stats::tv_distance(std::vector<double>{1.0}, std::vector<double>{0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(stats::tv_distance(p, [&p](std::int64_t k) { return k < 3 ? p[static_cast<std::size_t>(k)] : 0.0; }) == 0.0);
}

TEST_CASE("Kolmogorov tail") {
    CHECK(stats::kolmogorov_q(0.0) == 1.0);
    CHECK(stats::kolmogorov_q(1.36) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(stats::kolmogorov_q(1.63) == doctest::Approx(0.01).epsilon(0.03));
}

TEST_CASE("tests pass at about 1 - alpha on their own laws") {
    const double alpha = 0.05;
    int ks_pass = 0, chi_pass = 0;
    const int reps = 400;
    Xoshiro256 rng(61);
    for (int r = 0; r < reps; ++r) {
        std::vector<double> u(500);
        for (auto& x : u) x = laws::sample_speed_single(1, rng);
        ks_pass += stats::ks_test(u, [](double v) { return laws::cdf_speed_single(std::clamp(v, 0.0, 1.0), 1); }, alpha).pass;
        std::vector<std::int64_t> g(500);
        for (auto& k : g) k = laws::sample_geom0(0.4, rng);
        chi_pass += stats::chi_square(stats::histogram(g), [](std::int64_t k) { return laws::geom0_pmf(0.4, k); }, alpha).pass;
    }
    // 400 Bernoulli(0.95) trials: sd about 0.011.
    CHECK(ks_pass / double(reps) == doctest::Approx(0.95).epsilon(0.04));
    CHECK(chi_pass / double(reps) == doctest::Approx(0.95).epsilon(0.04));
}

TEST_CASE("moments") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(stats::mean(v) == 2.5);
    CHECK(stats::variance(v) == doctest::Approx(5.0 / 3.0));
    CHECK(stats::correlation(v, v) == doctest::Approx(1.0));
}

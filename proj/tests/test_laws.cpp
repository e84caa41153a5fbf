#include <doctest.h>

#include <cmath>
#include <vector>

#include "tazrp/laws.hpp"
#include "tazrp/rng.hpp"
#include "tazrp/stats.hpp"

using namespace tazrp;

namespace {

// Composite Simpson rule; the test oracle for every integral below.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("single-speed law") {
    CHECK(laws::cdf_speed_single(0.25, 0) == doctest::Approx(0.5));
    CHECK(laws::cdf_speed_single(0.25, 1) == doctest::Approx(0.75));
    CHECK(laws::cdf_speed_single(1.0, 3) == doctest::Approx(1.0));
    for (int j = 0; j < 4; ++j) {
        double last = 0.0;
        for (double v = 0.0; v <= 1.0; v += 0.01) {
            const double c = laws::cdf_speed_single(v, j);
            REQUIRE(c >= last);
            REQUIRE(c <= 1.0);
            last = c;
        }
    }
    CHECK_THROWS(laws::cdf_speed_single(1.5, 0));
}

TEST_CASE("mean speeds integrate the tail and sum to one") {
    double total = 0.0;
    for (int i = 0; i < 6; ++i) {
        // E U = int (1 - sqrt v)^(i+1) dv, smooth after v = s^2.
        const double tail = simpson([i](double s) { return 2.0 * s * std::pow(1.0 - s, i + 1); }, 0.0, 1.0);
        CHECK(laws::mean_speed(i) == doctest::Approx(tail).epsilon(1e-6));
    }
    for (int i = 0; i < 100000; ++i) total += laws::mean_speed(i);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("joint law of two speeds in a column") {
    CHECK(laws::cdf_joint(0.25, 1.0 / 9.0, 0, 1) == doctest::Approx(7.0 / 18.0));
    CHECK(laws::cdf_joint(1.0, 1.0, 0, 1) == doctest::Approx(1.0));
    CHECK(laws::density_diagonal(0.25, 0, 1) == doctest::Approx(0.5));
}

TEST_CASE("atom of two equal speeds: two routes and a closed oracle") {
    // After x = s^2 the diagonal density integrates to (i+1) / (j+1).
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 3}}) {
        const double oracle = simpson([i = i, j = j](double s) { return (i + 1) * std::pow(1.0 - s, j); }, 0.0, 1.0);
        CHECK(oracle == doctest::Approx((i + 1.0) / (j + 1.0)));
        CHECK(laws::atom_mass_quadrature(i, j) == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(laws::atom_mass_queue_identity(i, j) == doctest::Approx(oracle).epsilon(1e-3));
    }
}

TEST_CASE("queue identity and tandem candidates") {
    CHECK(laws::queue_identity(0.3, 0.2, 0, 1) == doctest::Approx(0.1));
    CHECK(laws::queue_identity(0.3, 0.2, 1, 3) == doctest::Approx(0.04));
    CHECK(laws::tandem_lemma(0.3, 0.2, 1, 1, false) == doctest::Approx(0.009));
    CHECK(laws::tandem_lemma(0.3, 0.2, 1, 1, true) == doctest::Approx(0.018));
}

TEST_CASE("two-column candidates") {
    using V = laws::TwoColumnVariant;
    const double x1 = 0.25, x2 = 1.0 / 9.0;
    CHECK(laws::prob_two_column(x1, x2, 1, 1, V::Stated) == doctest::Approx(1.0 / 18.0));
    CHECK(laws::prob_two_column(x1, x2, 1, 1, V::Proof) == doctest::Approx(1.0 / 12.0));
    CHECK(laws::prob_two_column(x1, x2, 1, 1, V::Lemma) == doctest::Approx(1.0 / 36.0));
    CHECK(laws::prob_two_column(x1, x2, 1, 1, V::Chain) == doctest::Approx(1.0 / 24.0));
    CHECK(laws::prob_two_column(0.3, 0.3, 1, 1, V::Stated) == 0.0);
    CHECK(laws::prob_two_column(0.999999, x2, 3, 1, V::Stated) < 1e-6);
}

TEST_CASE("flux speed, density profile, occupancy") {
    CHECK(laws::law_flux_speed(1.0) == 1.0);
    CHECK(laws::law_flux_speed(0.0) == doctest::Approx(0.25));
    CHECK(laws::hydrodynamic_profile(0.25) == doctest::Approx(1.0));
    CHECK(laws::hydrodynamic_profile(1.0) == 0.0);
    CHECK(laws::hydrodynamic_profile(4.0) == 0.0);
    CHECK_THROWS(laws::hydrodynamic_profile(0.0));
    for (double a : {0.1, 0.25, 0.5, 0.9}) {
        double s = 0.0;
        for (int k = 0; k < 2000; ++k) s += laws::occupancy_pmf(a, k);
        CHECK(s == doctest::Approx(1.0));
    }
    CHECK(laws::occupancy_pmf(0.25, 0) == doctest::Approx(0.5));
    CHECK(laws::cluster_intensity_mass(0.25, 1.0) == doctest::Approx(std::log(2.0)));
    CHECK(laws::mark_pmf(0.25, 1) == doctest::Approx(0.5));
}

TEST_CASE("flux-speed pushforward has the square-root law") {
    // Change of variables: P(((1+V)/2)^2 <= v) = P(V <= 2 sqrt v - 1) = sqrt v.
    for (double v : {0.04, 0.25, 0.64})
        CHECK((2.0 * std::sqrt(v) - 1.0 + 1.0) / 2.0 == doctest::Approx(laws::cdf_speed_single(v, 0)));
    Xoshiro256 rng(51);
    std::vector<double> s(20000);
    for (auto& x : s) x = laws::sample_flux_speed(rng);
    CHECK(stats::ks_test(s, [](double v) { return v <= 0 ? 0.0 : v >= 1 ? 1.0 : std::sqrt(v); }).statistic < 0.015);
}

TEST_CASE("law catalog entries evaluate") {
    const auto& cat = laws::catalog();
    CHECK(cat.size() >= 8);
    for (const auto& [name, entry] : cat) CHECK_FALSE(entry.description.empty());
}

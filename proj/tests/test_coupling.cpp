#include <doctest.h>

#include <vector>

#include "tazrp/coupling.hpp"
#include "tazrp/rng.hpp"

using namespace tazrp;

namespace {
using Stacks = std::vector<std::vector<double>>;

std::vector<std::size_t> heights(const ZrpConfig& c, Site from, Site to) {
    std::vector<std::size_t> h;
    for (Site z = from; z <= to; ++z) h.push_back(c.in_window(z) ? c.height(z) : 0);
    return h;
}
}  // namespace

TEST_CASE("phi on the two-gap example") {
    // Holes at -3, 0, 3, 4; y_0 = 3. Column c is the gap between y_c and y_{c+1}.
    const auto xi = ExclusionConfig::from_string(-4, "●○●●○●●○○");
    const auto eta = phi_map(xi);
    CHECK(heights(eta, -3, 0) == std::vector<std::size_t>{1, 2, 2, 0});
    CHECK(eta.label(-2, 0).value == -1.0);
}

TEST_CASE("phi trivial cases") {
    const auto holes = phi_map(ExclusionConfig::from_string(0, "....."));
    for (Site z = holes.z_min(); z <= holes.z_max(); ++z) CHECK(holes.height(z) == 0);
    const auto alt = phi_map(ExclusionConfig::from_string(-3, "#.#.#.#."));
    for (Site z = alt.z_min(); z <= alt.z_max(); ++z) CHECK(alt.height(z) == 1);
    CHECK_THROWS(phi_map(ExclusionConfig::from_string(0, "###")));
}

TEST_CASE("phi inverse lays out the example") {
    auto eta = ZrpConfig::from_stacks(-3, Stacks{{-1}, {-1, -1}, {-1, -1}, {}});
    const auto xi = phi_inverse(eta, 3);
    CHECK(xi == ExclusionConfig::from_string(-4, "●○●●○●●○○"));
    const auto none = phi_inverse(ZrpConfig::from_stacks(-2, Stacks{{}, {}, {}}), 1);
    for (Site x = none.z_min(); x <= none.z_max(); ++x) CHECK(none.is_hole(x));
}

TEST_CASE("phi and its inverse round trip") {
    Xoshiro256 rng(31);
    for (int rep = 0; rep < 1000; ++rep) {
        const Site z0 = -1 - static_cast<Site>(rng.uniform() * 5.0);
        const Site z1 = static_cast<Site>(rng.uniform() * 5.0);
        Stacks s(static_cast<std::size_t>(z1 - z0 + 1));
        for (auto& col : s)
            for (auto k = rng.geometric0(0.5); k > 0; --k) col.push_back(-1.0);
        const auto eta = ZrpConfig::from_stacks(z0, s);
        // y_0 at 1 keeps every earlier hole at a position <= 0.
        const auto xi = phi_inverse(eta, 1);
        REQUIRE(phi_map(xi).same_labels(eta));
        REQUIRE(phi_inverse(phi_map(xi), 1) == xi);
    }
}

TEST_CASE("second-class lift follows the four-step picture") {
    // Tag at 0; its right-hand gap holds the particles at 1 and 2.
    auto xi = ExclusionConfig::from_string(-5, "○●○●●2●●○○");
    xi.tag(0);
    const auto lifted = lift_second_class(xi);
    const auto& eta = lifted.config;
    REQUIRE(lifted.tags.size() == 1);
    CHECK(heights(eta, -2, 1) == std::vector<std::size_t>{1, 2, 3, 0});
    CHECK(eta.stack(0) == std::vector<double>{-1, -1, -2});
    CHECK(eta.registry()[lifted.tags[0]].site == 0);
}

TEST_CASE("lift with the hole right next to the tag") {
    auto xi = ExclusionConfig::from_string(-2, "#.2.#.");
    xi.tag(0);
    const auto lifted = lift_second_class(xi);
    const Site col = lifted.config.registry()[lifted.tags[0]].site;
    CHECK(lifted.config.stack(col) == std::vector<double>{-2});
    CHECK(col == hole_flux_now(xi, index_holes(xi).zero_rank).front());
}

TEST_CASE("two tags separated by a hole lift to two tagged columns") {
    auto xi = ExclusionConfig::from_string(-3, "#2#.#2..");
    xi.tag(-2);
    xi.tag(2);
    const auto lifted = lift_second_class(xi);
    REQUIRE(lifted.tags.size() == 2);
    const Site a = lifted.config.registry()[lifted.tags[0]].site;
    const Site b = lifted.config.registry()[lifted.tags[1]].site;
    CHECK(a < b);
    CHECK(lifted.config.label(a, lifted.config.height(a) - 1).value == -2.0);
    CHECK(lifted.config.label(b, lifted.config.height(b) - 1).value == -2.0);

    auto bad = ExclusionConfig::from_string(0, "2#2..");
    bad.tag(0);
    bad.tag(2);
    CHECK_THROWS(lift_second_class(bad));
}

TEST_CASE("hole flux") {
    auto xi = ExclusionConfig::from_string(-2, "#.2..");
    xi.tag(0);
    const auto quiet = hole_flux(evolve(xi, EventStream::from_lists(5.0, -2, 2, {}), 5.0));
    CHECK(quiet.values.size() == 1);
    CHECK(quiet.at(5.0) == quiet.at(0.0));
    const auto swap = hole_flux(evolve(xi, EventStream::from_lists(5.0, -2, 2, {{0, {1.0}}}), 5.0));
    CHECK(swap.at(0.5) == swap.at(0.0));
    CHECK(swap.at(1.0) == swap.at(0.0) + 1);
}

TEST_CASE("intertwining on small and random windows") {
    CHECK(check_intertwining(ExclusionConfig::from_string(0, "...."), 1, 10.0).pass());
    const auto single = check_intertwining(ExclusionConfig::from_string(0, "#..."), 2, 10.0);
    CHECK(single.pass());
    Xoshiro256 rng(32);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> labels;
        for (int k = 0; k < 100; ++k) labels.push_back(rng.bernoulli(0.5) ? 1.0 : ExclusionConfig::kHole);
        labels[50] = 2.0;
        labels[51] = ExclusionConfig::kHole;
        ExclusionConfig xi(-50, labels);
        xi.tag(0);
        const auto rep_ = check_intertwining(xi, derive_seed(32, rep), 40.0, rep);
        REQUIRE(rep_.pass());
        CHECK(rep_.tag_path.front().second == hole_flux_now(xi, index_holes(xi).zero_rank).front());
    }
}

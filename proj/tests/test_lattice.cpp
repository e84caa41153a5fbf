#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tazrp/harris.hpp"
#include "tazrp/lattice.hpp"
#include "tazrp/rng.hpp"

using namespace tazrp;

namespace {

using Stacks = std::vector<std::vector<double>>;

std::vector<double> labels_of(const ZrpConfig& c) {
    std::vector<double> out;
    for (Site z = c.z_min(); z <= c.z_max(); ++z)
        for (double v : c.stack(z)) out.push_back(v);
    return out;
}

// Random monotone window with small integer labels, so ties occur.
ZrpConfig random_config(Site z_min, Site z_max, Xoshiro256& rng) {
    Stacks s(static_cast<std::size_t>(z_max - z_min + 1));
    for (auto& col : s) {
        const auto h = rng.geometric0(0.6);
        for (std::int64_t i = 0; i < h; ++i) col.push_back(std::floor(rng.uniform() * 6.0));
        std::sort(col.begin(), col.end(), std::greater<>());
    }
    return ZrpConfig::from_stacks(z_min, s);
}

}  // namespace

TEST_CASE("sigma moves the strongest particle and inserts it in order") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{6, 4, 3, 1}, {8, 6, 5, 0.5}});
    const auto d = apply_sigma(c, 0);
    CHECK(d.stack(0) == std::vector<double>{4, 3, 1});
    CHECK(d.stack(1) == std::vector<double>{8, 6, 6, 5, 0.5});
    CHECK(d.is_monotone());
}

TEST_CASE("sigma edge cases") {
    const auto empty = ZrpConfig::from_stacks(0, Stacks{{}, {3}});
    CHECK(apply_sigma(empty, 0).same_labels(empty));
    const auto one = apply_sigma(ZrpConfig::from_stacks(0, Stacks{{2}, {}}), 0);
    CHECK(one.stack(0).empty());
    CHECK(one.stack(1) == std::vector<double>{2});
    CHECK_THROWS(apply_sigma(empty, 5));
}

TEST_CASE("sigma at the right edge absorbs") {
    auto c = ZrpConfig::from_stacks(0, Stacks{{}, {4, 2}});
    const Move m = c.sigma(1, 0.5);
    CHECK(m.absorbed);
    CHECK(c.stack(1) == std::vector<double>{2});
    REQUIRE(c.absorbed().size() == 1);
    CHECK(c.absorbed()[0].time == 0.5);
}

TEST_CASE("sigma star pulls the strongest particle left") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{6, 4, 3, 1}, {4.5, 2, 2, 1}});
    const auto d = apply_sigma_star(c, 0);
    CHECK(d.stack(0) == std::vector<double>{6, 4.5, 4, 3, 1});
    CHECK(d.stack(1) == std::vector<double>{2, 2, 1});
    const auto e = ZrpConfig::from_stacks(0, Stacks{{5}, {}});
    CHECK(apply_sigma_star(e, 0).same_labels(e));
    const auto f = apply_sigma_star(ZrpConfig::from_stacks(0, Stacks{{}, {7}}), 0);
    CHECK(f.stack(0) == std::vector<double>{7});
    CHECK(f.stack(1).empty());
}

TEST_CASE("eta star realizes the lexicographic order") {
    const auto small = make_eta_star(0, 0, 2);
    REQUIRE(small.height(0) == 2);
    CHECK(small.label(0, 0) > small.label(0, 1));
    CHECK(small.left_reservoir());

    const auto two = make_eta_star(0, 1, 1);
    CHECK(two.label(0, 0) > two.label(1, 0));

    const auto e = make_eta_star(-1, 1, 3);
    std::vector<double> order;
    for (Site z = -1; z <= 1; ++z)
        for (std::size_t i = 0; i < 3; ++i) order.push_back(e.label(z, i).value);
    REQUIRE(order.size() == 9);
    CHECK(std::is_sorted(order.begin(), order.end(), std::greater<>()));
    CHECK(std::adjacent_find(order.begin(), order.end()) == order.end());
    for (Site z = -1; z <= 1; ++z)
        for (std::int64_t i = 0; i < 3; ++i) CHECK(e.registry()[e.find(z, i)].site == z);
    CHECK_THROWS(make_eta_star(2, 1, 3));
}

TEST_CASE("monotone relabelling to n types") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{0.9, 0.3, 0.1}});
    const auto one = relabel_monotone(c, NTypeProjection({0.5}));
    CHECK(one.stack(0) == std::vector<double>{-1, -2, -2});
    const NTypeProjection two({0.75, 0.25});
    CHECK(two(ClassLabel{0.5}).value == -2);
    CHECK(two(ClassLabel{0.8}).value == -1);
    CHECK(two(ClassLabel{0.1}).value == -3);
}

TEST_CASE("reflection") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{}, {3, 1}, {}});
    const auto r = reflect(c);
    CHECK(r.z_min() == -2);
    CHECK(r.z_max() == 0);
    CHECK(r.stack(-1) == std::vector<double>{3, 1});
    CHECK(reflect(r).same_labels(c));
}

TEST_CASE("reflection conjugates sigma star into sigma") {
    Xoshiro256 rng(11);
    for (int rep = 0; rep < 300; ++rep) {
        const auto c = random_config(-5, 5, rng);
        const Site i = static_cast<Site>(rng.uniform() * 10.0) - 5;  // i, i+1 in [-5, 5]
        const auto lhs = reflect(apply_sigma_star(c, i));
        const auto rhs = apply_sigma(reflect(c), -i - 1);
        REQUIRE(lhs.same_labels(rhs));
    }
}

TEST_CASE("sigma keeps columns monotone and conserves labels") {
    Xoshiro256 rng(12);
    auto c = random_config(0, 8, rng);
    std::vector<double> before = labels_of(c);
    std::sort(before.begin(), before.end());
    for (int step = 0; step < 2000; ++step) {
        c.sigma(static_cast<Site>(rng.uniform() * 9.0), step);
        REQUIRE(c.is_monotone());
    }
    std::vector<double> after = labels_of(c);
    CHECK(after.size() + c.absorbed().size() == before.size());
}

TEST_CASE("relabelling commutes with evolution") {
    Xoshiro256 rng(13);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<std::vector<double>> s(12);
        for (auto& col : s) {
            const auto h = rng.geometric0(0.7);
            for (std::int64_t i = 0; i < h; ++i) col.push_back(rng.uniform());
            std::sort(col.begin(), col.end(), std::greater<>());
        }
        const auto c = ZrpConfig::from_stacks(0, s);
        const NTypeProjection proj({0.7, 0.4, 0.2});
        const EventStream stream(derive_seed(13, rep), 20.0, 0, 11);
        const auto a = relabel_monotone(evolve(c, stream, 20.0).final, proj);
        const auto b = evolve(relabel_monotone(c, proj), stream, 20.0).final;
        REQUIRE(a.same_labels(b));
    }
}

TEST_CASE("json round trip is exact") {
    auto c = make_eta_star(-2, 3, 4);
    const EventStream stream(5, 3.0, -3, 3);
    c = evolve(c, stream, 3.0).final;
    const auto back = ZrpConfig::from_json(c.to_json());
    CHECK(back == c);
    CHECK(back.to_json() == c.to_json());
}

TEST_CASE("exclusion ring obeys the class order") {
    auto x = ExclusionConfig::from_string(0, "12.");
    CHECK(x.ring(1).moved);  // 2 jumps into the hole
    CHECK(x.is_hole(1));
    auto y = ExclusionConfig::from_string(0, "21");
    CHECK_FALSE(y.ring(0).moved);
    auto z = ExclusionConfig::from_string(0, "12");
    CHECK(z.ring(0).moved);
    CHECK(z.label(0) == 2.0);
}

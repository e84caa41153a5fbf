#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tazrp/harris.hpp"
#include "tazrp/laws.hpp"
#include "tazrp/rng.hpp"
#include "tazrp/sorting.hpp"
#include "tazrp/stats.hpp"

using namespace tazrp;

namespace {
using Stacks = std::vector<std::vector<double>>;
}

TEST_CASE("event streams are deterministic and rate one") {
    const EventStream a(77, 50.0, 0, 9999);
    const EventStream b(77, 50.0, 0, 9999);
    CHECK(a.times(123) == b.times(123));
    CHECK(a.times(123) == a.times(123));
    double total = 0.0;
    for (Site s = 0; s < 10000; ++s) {
        const auto t = a.times(s);
        REQUIRE(std::is_sorted(t.begin(), t.end()));
        if (!t.empty()) {
            REQUIRE(t.front() > 0.0);
            REQUIRE(t.back() <= 50.0);
        }
        total += static_cast<double>(t.size());
    }
    // Sum of 10^4 Poisson(50) counts: mean 5e5, sd ~707.
    CHECK(std::abs(total - 5e5) <= 3.0 * std::sqrt(5e5));
    CHECK(EventStream(1, 0.0, 0, 10).times(3).empty());
}

TEST_CASE("block structure does not depend on the horizon") {
    const auto short_run = EventStream(5, 10.0, 0, 0).times(0);
    const auto long_run = EventStream(5, 100.0, 0, 0).times(0);
    REQUIRE(long_run.size() >= short_run.size());
    CHECK(std::equal(short_run.begin(), short_run.end(), long_run.begin()));
}

TEST_CASE("one ring applies sigma once") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{3, 1}, {2}});
    const auto stream = EventStream::from_lists(1.0, 0, 1, {{0, {0.5}}});
    CHECK(evolve(c, stream, 1.0).final.same_labels(apply_sigma(c, 0)));
}

TEST_CASE("hand-listed stream on two columns") {
    const auto c = ZrpConfig::from_stacks(0, Stacks{{0.9, 0.8}, {0.7, 0.6}});
    const auto stream = EventStream::from_lists(1.0, 0, 1, {{0, {0.1, 0.3}}, {1, {0.2}}});
    const auto tr = evolve(c, stream, 1.0);
    // 0.1: 0.9 joins column 1; 0.2: 0.9 leaves the window; 0.3: 0.8 joins column 1.
    CHECK(tr.final.stack(0).empty());
    CHECK(tr.final.stack(1) == std::vector<double>{0.8, 0.7, 0.6});
    REQUIRE(tr.final.absorbed().size() == 1);
    CHECK(tr.final.absorbed()[0].time == 0.2);
    CHECK(tr.events.size() == 3);
}

TEST_CASE("evolution is a pure function of config and stream") {
    const auto c = make_eta_star(0, 5, 6);
    const EventStream stream(9, 20.0, -1, 5);
    const auto a = evolve(c, stream, 20.0);
    const auto b = evolve(c, stream, 20.0);
    CHECK(a.final == b.final);
    CHECK(a.events == b.events);
    const auto [p, q] = evolve_coupled(c, c, stream, 20.0);
    CHECK(p.events == q.events);
}

TEST_CASE("positions only move right") {
    const auto c = make_eta_star(0, 4, 5);
    const EventStream stream(10, 30.0, -1, 4);
    const auto tr = evolve(c, stream, 30.0);
    for (const auto& e : tr.events) REQUIRE(e.to == e.from + 1);
    const ParticleId id = c.find(0, 0);
    Site last = tr.position(id, 0.0);
    for (double t = 1.0; t <= 30.0; t += 1.0) {
        const Site x = tr.position(id, t);
        CHECK(x >= last);
        last = x;
    }
}

TEST_CASE("stationary geometric ring keeps its occupancy law") {
    const double q = 0.5;
    const auto c = make_ring_geometric(20000, q, 21);
    const EventStream stream(22, 40.0, c.z_min(), c.z_max());
    const auto snaps = snapshots(c, stream, {0.0, 40.0});
    for (const auto& s : snaps) {
        std::vector<std::int64_t> occ;
        for (Site z = s.z_min(); z <= s.z_max(); ++z) occ.push_back(static_cast<std::int64_t>(s.height(z)));
        const double tv = stats::tv_distance(stats::normalize(stats::histogram(occ)),
                                             [q](std::int64_t k) { return laws::geom0_pmf(q, k); });
        CHECK(tv < 0.02);
    }
    CHECK(snaps[0].particle_count() == snaps[1].particle_count());
}

TEST_CASE("one extra particle stays one discrepancy") {
    Xoshiro256 rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        Stacks a(30);
        for (auto& col : a)
            for (auto k = rng.geometric0(0.5); k > 0; --k) col.push_back(-1.0);
        Stacks b = a;
        b[static_cast<std::size_t>(rng.uniform() * 30.0)].push_back(-1.0);
        const auto ca = ZrpConfig::from_stacks(0, a);
        const auto cb = ZrpConfig::from_stacks(0, b);
        const EventStream stream(derive_seed(23, rep), 30.0, 0, 29);
        const std::vector<double> times{5.0, 10.0, 20.0, 30.0};
        const auto sa = snapshots(ca, stream, times);
        const auto sb = snapshots(cb, stream, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            std::int64_t diff = 0;
            for (Site z = 0; z < 30; ++z)
                diff += std::abs(static_cast<std::int64_t>(sa[k].height(z)) - static_cast<std::int64_t>(sb[k].height(z)));
            REQUIRE(diff <= 1);
        }
    }
}

TEST_CASE("TASEP conserves particles in the window and exit log") {
    Xoshiro256 rng(24);
    std::vector<double> labels;
    for (int k = 0; k < 100; ++k) labels.push_back(rng.bernoulli(0.5) ? 1.0 + std::floor(rng.uniform() * 3) : ExclusionConfig::kHole);
    ExclusionConfig x(0, labels);
    x.set_right_open(true);
    const auto count = [](const ExclusionConfig& c) {
        std::size_t n = 0;
        for (Site s = c.z_min(); s <= c.z_max(); ++s) n += c.is_hole(s) ? 0 : 1;
        return n;
    };
    const std::size_t start = count(x);
    const EventStream stream(25, 50.0, 0, 99);
    const auto tr = evolve(x, stream, 50.0);
    CHECK(count(tr.final) + tr.final.exits() == start);
}

TEST_CASE("sorting merges a pair by re-sorting both coordinates") {
    PairConfig p(0, {{{5, 7}}, {{10, 8}, {4, 8}, {3, 1}}});
    REQUIRE(p.ring(0));
    const std::vector<LabelPair> want{{10, 8}, {5, 8}, {4, 7}, {3, 1}};
    CHECK(p.column(1) == want);
    CHECK(p.column(0).empty());
}

TEST_CASE("a pair ordered against all others keeps its partner") {
    Xoshiro256 rng(26);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::vector<LabelPair>> cols(10);
        for (auto& col : cols) {
            std::vector<double> a, b;
            for (auto k = rng.geometric0(0.6); k > 0; --k) {
                a.push_back(rng.uniform());
                b.push_back(rng.uniform());
            }
            std::sort(a.begin(), a.end(), std::greater<>());
            std::sort(b.begin(), b.end(), std::greater<>());
            for (std::size_t i = 0; i < a.size(); ++i) col.emplace_back(a[i], b[i]);
        }
        // (0.5, 0.5) split off everything: other labels move to [0, 0.4] or [0.6, 1] in both coordinates alike.
        for (auto& col : cols)
            for (auto& pr : col) {
                const bool high = pr.first > 0.5;
                pr.first = high ? 0.6 + 0.4 * pr.first : 0.4 * pr.first;
                pr.second = high ? 0.6 + 0.4 * pr.second : 0.4 * pr.second;
            }
        for (auto& col : cols) {
            col.emplace_back(0.5, 0.5);
            std::vector<double> a, b;
            for (auto& pr : col) {
                a.push_back(pr.first);
                b.push_back(pr.second);
            }
            std::sort(a.begin(), a.end(), std::greater<>());
            std::sort(b.begin(), b.end(), std::greater<>());
            for (std::size_t i = 0; i < a.size(); ++i) col[i] = {a[i], b[i]};
        }
        const EventStream stream(derive_seed(26, rep), 10.0, 0, 9);
        const auto tr = evolve_sorting(PairConfig(0, cols), stream, 10.0);
        for (Site z = 0; z <= 9; ++z)
            for (const auto& pr : tr.final.column(z))
                if (pr.first == 0.5 || pr.second == 0.5) REQUIRE(pr == LabelPair{0.5, 0.5});
    }
}

TEST_CASE("sorting marginals equal plain evolutions") {
    Xoshiro256 rng(27);
    for (int rep = 0; rep < 30; ++rep) {
        Stacks a(40), b(40);
        for (std::size_t z = 0; z < 40; ++z) {
            for (auto k = rng.geometric0(0.6); k > 0; --k) {
                a[z].push_back(rng.uniform());
                b[z].push_back(rng.uniform());
            }
            std::sort(a[z].begin(), a[z].end(), std::greater<>());
            std::sort(b[z].begin(), b[z].end(), std::greater<>());
        }
        const EventStream stream(derive_seed(27, rep), 30.0, 0, 39);
        const auto check = check_sorting_marginals(ZrpConfig::from_stacks(0, a), ZrpConfig::from_stacks(0, b), stream, 30.0);
        REQUIRE(check.pass());
        CHECK(check.events > 0);
    }
    const auto e = make_eta_star(0, 3, 2);
    const EventStream stream(1, 1.0, -1, 3);
    CHECK_THROWS(check_sorting_marginals(e, e, stream, 1.0));
}

TEST_CASE("jump relations hold and the sorting index matches") {
    int used = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto r = check_jump_relations(15, 40.0, derive_seed(28, s));
        if (r.tainted) continue;
        ++used;
        CHECK(r.holds());
        CHECK(r.i_fast + 1 == r.i_sort);
    }
    CHECK(used >= 10);
}

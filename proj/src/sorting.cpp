#include "tazrp/sorting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tazrp/harris.hpp"

namespace tazrp {

PairConfig::PairConfig(Site z_min, std::vector<std::vector<LabelPair>> stacks)
    : z_min_(z_min), cols_(std::move(stacks)) {
    if (cols_.empty()) throw std::invalid_argument("empty window");
    if (!valid()) throw std::invalid_argument("pair columns must be non-increasing in both coordinates");
}

PairConfig PairConfig::from_configs(const ZrpConfig& first, const ZrpConfig& second) {
    if (first.z_min() != second.z_min() || first.z_max() != second.z_max())
        throw std::invalid_argument("window mismatch");
    std::vector<std::vector<LabelPair>> cols;
    for (Site z = first.z_min(); z <= first.z_max(); ++z) {
        const auto a = first.stack(z);
        const auto b = second.stack(z);
        if (a.size() != b.size()) throw std::invalid_argument("column heights differ");
        std::vector<LabelPair> c;
        for (std::size_t i = 0; i < a.size(); ++i) c.emplace_back(a[i], b[i]);
        cols.push_back(std::move(c));
    }
    return PairConfig(first.z_min(), std::move(cols));
}

bool PairConfig::valid() const {
    for (const auto& c : cols_)
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i].first > c[i - 1].first || c[i].second > c[i - 1].second) return false;
    return true;
}

ZrpConfig PairConfig::coordinate(int which) const {
    std::vector<std::vector<double>> stacks;
    for (const auto& c : cols_) {
        std::vector<double> s;
        for (const auto& p : c) s.push_back(which == 0 ? p.first : p.second);
        stacks.push_back(std::move(s));
    }
    return ZrpConfig::from_stacks(z_min_, stacks);
}

bool PairConfig::ring(Site z, std::vector<LabelPair>* before) {
    auto& src = cols_.at(static_cast<std::size_t>(z - z_min_));
    if (src.empty()) return false;
    const LabelPair p = src.front();
    src.erase(src.begin());
    if (z == z_max()) return true;
    auto& dst = cols_[static_cast<std::size_t>(z + 1 - z_min_)];
    if (before) *before = dst;
    std::vector<double> a{p.first}, b{p.second};
    for (const auto& q : dst) {
        a.push_back(q.first);
        b.push_back(q.second);
    }
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    dst.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) dst[i] = LabelPair{a[i], b[i]};
    return true;
}

SortingTrajectory evolve_sorting(const PairConfig& pair, const EventStream& stream, double horizon,
                                 const std::function<void(const SortingEvent&, const PairConfig&)>& on_event) {
    SortingTrajectory tr{pair, pair, {}};
    PairConfig& c = tr.final;
    ClockQueue queue(stream, c.z_min(), c.z_max());
    for (Site z = c.z_min(); z <= c.z_max(); ++z)
        if (!c.column(z).empty()) queue.activate(z, 0.0);
    Ring r;
    while (queue.next(horizon, r)) {
        SortingEvent ev;
        ev.time = r.time;
        ev.from = r.site;
        ev.moved = c.column(r.site).empty() ? LabelPair{} : c.column(r.site).front();
        if (!c.ring(r.site, &ev.before)) continue;
        if (c.column(r.site).empty()) queue.deactivate(r.site);
        if (r.site < c.z_max()) {
            ev.after = c.column(r.site + 1);
            queue.activate(r.site + 1, r.time);
        }
        if (on_event) on_event(ev, c);
        tr.events.push_back(std::move(ev));
    }
    return tr;
}

namespace {

bool same_column(const PairConfig& pc, const ZrpConfig& a, const ZrpConfig& b, Site z) {
    const auto& col = pc.column(z);
    const auto sa = a.stack(z);
    const auto sb = b.stack(z);
    if (col.size() != sa.size() || col.size() != sb.size()) return false;
    for (std::size_t i = 0; i < col.size(); ++i)
        if (col[i].first != sa[i] || col[i].second != sb[i]) return false;
    return true;
}

}  // namespace

MarginalCheck check_sorting_marginals(const ZrpConfig& first, const ZrpConfig& second, const EventStream& stream,
                                      double horizon) {
    if (first.left_reservoir() || second.left_reservoir())
        throw std::invalid_argument("sorting process has no reservoir");
    const PairConfig pair = PairConfig::from_configs(first, second);
    ZrpConfig a = first;
    ZrpConfig b = second;
    ZrpRunner ra(a, stream);
    ZrpRunner rb(b, stream);
    MarginalCheck out;
    auto on_event = [&](const SortingEvent& ev, const PairConfig& pc) {
        ra.advance_to(ev.time);
        rb.advance_to(ev.time);
        ++out.events;
        bool ok = same_column(pc, a, b, ev.from);
        if (ev.from < pc.z_max()) ok = ok && same_column(pc, a, b, ev.from + 1);
        if (!ok) {
            ++out.mismatches;
            if (out.first_mismatch < 0.0) out.first_mismatch = ev.time;
        }
    };
    const auto tr = evolve_sorting(pair, stream, horizon, on_event);
    ra.advance_to(horizon);
    rb.advance_to(horizon);
    for (Site z = tr.final.z_min(); z <= tr.final.z_max(); ++z) {
        if (!same_column(tr.final, a, b, z)) {
            ++out.mismatches;
            if (out.first_mismatch < 0.0) out.first_mismatch = horizon;
        }
    }
    return out;
}

std::pair<ZrpConfig, ZrpConfig> pad_to_pairable(const ZrpConfig& first, const ZrpConfig& second) {
    if (first.z_min() != second.z_min() || first.z_max() != second.z_max())
        throw std::invalid_argument("window mismatch");
    double weakest = 0.0;
    bool any = false;
    for (const ZrpConfig* c : {&first, &second})
        for (Site z = c->z_min(); z <= c->z_max(); ++z)
            for (double v : c->stack(z)) {
                weakest = any ? std::min(weakest, v) : v;
                any = true;
            }
    const ClassLabel sentinel{weakest - 1.0};
    ZrpConfig a = first;
    ZrpConfig b = second;
    for (Site z = a.z_min(); z <= a.z_max(); ++z) {
        while (a.height(z) < b.height(z)) a.push_top(z, sentinel, Origin{z, static_cast<std::int64_t>(a.height(z)), false});
        while (b.height(z) < a.height(z)) b.push_top(z, sentinel, Origin{z, static_cast<std::int64_t>(b.height(z)), false});
    }
    return {std::move(a), std::move(b)};
}

RelationCheck check_jump_relations(int depth, double horizon, std::uint64_t seed) {
    if (depth < 2 || horizon <= 0.0) throw std::invalid_argument("invalid relation-check parameters");
    const Site reach = static_cast<Site>(std::ceil(horizon + 5.0 * std::sqrt(horizon))) + 2;
    const int feed = static_cast<int>(std::ceil(horizon + 6.0 * std::sqrt(horizon))) + 10;

    // Column -1 holds `feed` particles stronger than everything else.
    std::vector<std::vector<double>> stacks(static_cast<std::size_t>(reach + 2));
    for (int k = 0; k < feed; ++k) stacks[0].push_back(2.0 + feed - k);
    auto label = [depth](int z, int i) { return 1.0 - (z * depth + i + 1.0) / (2.0 * depth + 1.0); };
    for (int z = 0; z <= 1; ++z)
        for (int i = 0; i < depth; ++i) stacks[static_cast<std::size_t>(z + 1)].push_back(label(z, i));
    const ZrpConfig eta = ZrpConfig::from_stacks(-1, stacks);
    const ZrpConfig eta_jump = apply_sigma(eta, 0);
    const auto [a, b] = pad_to_pairable(eta, eta_jump);

    const EventStream stream(seed, horizon, -1, a.z_max());
    const PairConfig start = PairConfig::from_configs(a, b);
    const auto& col0 = start.column(0);
    const double l10 = label(1, 0);

    RelationCheck out;
    auto on_event = [&](const SortingEvent& ev, const PairConfig&) {
        std::vector<LabelPair> gone = ev.before;
        gone.push_back(ev.moved);
        for (const auto& p : ev.after) {
            const auto it = std::find(gone.begin(), gone.end(), p);
            if (it != gone.end()) gone.erase(it);
        }
        const bool with_l10 =
            std::any_of(gone.begin(), gone.end(), [l10](const LabelPair& p) { return p.first == l10; });
        if (!with_l10) return;
        for (const auto& p : gone)
            for (int i = 0; i < depth; ++i)
                if (p == col0[static_cast<std::size_t>(i)]) out.i_fast = std::max(out.i_fast, i);
    };
    evolve_sorting(start, stream, horizon, on_event);

    const auto ta = evolve(a, stream, horizon);
    const auto tb = evolve(b, stream, horizon);
    auto where = [](const ZrpConfig& c, double v) {
        for (Site z = c.z_min(); z <= c.z_max(); ++z)
            for (double w : c.stack(z))
                if (w == v) return z;
        return c.z_max() + 1;  // absorbed
    };
    const ZrpConfig& fa = ta.final;
    const ZrpConfig& fb = tb.final;
    out.tainted = fa.height(-1) == 0 || where(fa, label(0, depth - 1)) != 0 || where(fb, label(0, depth - 1)) != 0;

    auto check = [&](double la, double lb) {
        ++out.checked;
        if (where(fa, la) != where(fb, lb)) ++out.violations;
    };
    for (int i = 0; i <= out.i_fast; ++i) check(label(0, i), label(0, i));
    if (out.i_fast + 1 < depth) check(l10, label(0, out.i_fast + 1));
    for (int i = out.i_fast + 1; i + 1 < depth; ++i) check(label(0, i), label(0, i + 1));
    for (int i = 1; i < depth; ++i) check(label(1, i), label(1, i - 1));

    const Site x10 = where(fa, l10);
    for (int i = 0; i < depth; ++i)
        if (where(fa, label(0, i)) >= x10) ++out.i_sort;
    return out;
}

}  // namespace tazrp

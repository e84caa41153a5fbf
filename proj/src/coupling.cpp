#include "tazrp/coupling.hpp"

#include <algorithm>
#include <stdexcept>

namespace tazrp {

HoleIndexing index_holes(const ExclusionConfig& xi) {
    HoleIndexing h;
    for (Site x = xi.z_min(); x <= xi.z_max(); ++x)
        if (xi.is_hole(x)) h.positions.push_back(x);
    const auto it = std::upper_bound(h.positions.begin(), h.positions.end(), Site{0});
    h.zero_rank = it - h.positions.begin();
    return h;
}

namespace {

bool is_tag(const ExclusionConfig& xi, Site x) {
    const ParticleId id = xi.id_at(x);
    if (id == kNoParticle) return false;
    const auto& t = xi.tagged();
    return std::find(t.begin(), t.end(), id) != t.end();
}

struct Gap {
    std::int64_t column = 0;
    std::vector<double> labels;  // ZRP labels
    bool tagged = false;         // the boundary opening this gap is a tag
    double tag_label = 0.0;
};

// Splits the window into gaps between boundaries (holes and tags) and assigns
// column indices; the trailing gap is dropped.
std::vector<Gap> split_gaps(const ExclusionConfig& xi, std::int64_t zero_rank) {
    const Site lo = xi.z_min();
    const Site hi = xi.z_max();
    std::vector<Gap> gaps(1);  // leading gap, index fixed later
    std::int64_t holes_seen = 0;
    std::int64_t tags_seen = 0;
    bool any_boundary = false;
    for (Site x = lo; x <= hi; ++x) {
        if (xi.is_hole(x)) {
            Gap g;
            g.column = (holes_seen - zero_rank) + tags_seen;
            gaps.push_back(std::move(g));
            ++holes_seen;
            any_boundary = true;
        } else if (is_tag(xi, x)) {
            // H is the index of the next hole to the right, which has rank holes_seen.
            Gap g;
            g.column = (holes_seen - zero_rank) + tags_seen;
            g.tagged = true;
            g.tag_label = -xi.label(x);
            gaps.push_back(std::move(g));
            ++tags_seen;
            any_boundary = true;
        } else {
            gaps.back().labels.push_back(-xi.label(x));
        }
    }
    if (!any_boundary) throw std::invalid_argument("no holes in window");
    gaps.front().column = gaps[1].column - 1;
    gaps.pop_back();  // trailing gap: right of the last boundary
    return gaps;
}

LiftedConfig build(const std::vector<Gap>& gaps) {
    LiftedConfig out;
    const Site z0 = gaps.front().column;
    out.config = ZrpConfig(z0, gaps.back().column);
    for (const auto& g : gaps) {
        std::vector<double> labels = g.labels;
        std::sort(labels.begin(), labels.end(), std::greater<>());
        std::int64_t i = 0;
        for (double v : labels) out.config.push_top(g.column, {v}, Origin{g.column, i++, false});
        if (g.tagged) out.tags.push_back(out.config.push_top(g.column, {g.tag_label}, Origin{g.column, i++, false}));
    }
    return out;
}

ZrpConfig lift_unchecked(const ExclusionConfig& xi, std::int64_t zero_rank) {
    return build(split_gaps(xi, zero_rank)).config;
}

bool tags_separated(const ExclusionConfig& xi, const std::vector<ParticleId>& tags_by_pos) {
    for (std::size_t j = 1; j < tags_by_pos.size(); ++j) {
        bool hole_between = false;
        for (Site x = xi.position(tags_by_pos[j - 1]) + 1; x < xi.position(tags_by_pos[j]); ++x)
            hole_between |= xi.is_hole(x);
        if (!hole_between) return false;
    }
    return true;
}

}  // namespace

ZrpConfig phi_map(const ExclusionConfig& xi, std::optional<std::int64_t> zero_rank) {
    ExclusionConfig plain(xi.z_min(), xi.labels());
    const auto k0 = zero_rank ? *zero_rank : index_holes(plain).zero_rank;
    return build(split_gaps(plain, k0)).config;
}

ExclusionConfig phi_inverse(const ZrpConfig& eta, Site anchor) {
    // Offset of y_0 inside the layout: every column left of 0 contributes its
    // particles and its closing hole.
    std::int64_t before = -1;
    for (Site c = eta.z_min(); c <= -1; ++c) before += static_cast<std::int64_t>(eta.height(c)) + 1;
    if (eta.z_min() > 0) before = -eta.z_min() - 1;
    std::vector<double> labels;
    for (Site c = eta.z_min(); c <= eta.z_max(); ++c) {
        const auto s = eta.stack(c);
        // Strongest particle sits next to the closing hole.
        for (auto it = s.rbegin(); it != s.rend(); ++it) labels.push_back(-*it);
        labels.push_back(ExclusionConfig::kHole);
    }
    return ExclusionConfig(anchor - before, std::move(labels));
}

LiftedConfig lift_second_class(const ExclusionConfig& xi, std::optional<std::int64_t> zero_rank) {
    std::vector<Site> tag_sites;
    for (ParticleId id : xi.tagged()) tag_sites.push_back(xi.position(id));
    std::sort(tag_sites.begin(), tag_sites.end());
    for (std::size_t j = 1; j < tag_sites.size(); ++j) {
        bool hole_between = false;
        for (Site x = tag_sites[j - 1] + 1; x < tag_sites[j]; ++x) hole_between |= xi.is_hole(x);
        if (!hole_between) throw std::invalid_argument("two tags in one gap");
    }
    if (!tag_sites.empty()) {
        bool hole_right = false;
        for (Site x = tag_sites.back() + 1; x <= xi.z_max(); ++x) hole_right |= xi.is_hole(x);
        if (!hole_right) throw std::invalid_argument("tag needs a hole to its right");
    }
    const auto k0 = zero_rank ? *zero_rank : index_holes(xi).zero_rank;
    return build(split_gaps(xi, k0));
}

std::vector<std::int64_t> hole_flux_now(const ExclusionConfig& xi, std::int64_t zero_rank) {
    std::vector<Site> tag_sites;
    for (ParticleId id : xi.tagged())
        if (!xi.exited(id)) tag_sites.push_back(xi.position(id));
    std::sort(tag_sites.begin(), tag_sites.end());
    std::vector<std::int64_t> out;
    std::int64_t rank = 0;
    std::size_t j = 0;
    for (Site x = xi.z_min(); x <= xi.z_max() && j < tag_sites.size(); ++x) {
        if (xi.is_hole(x)) {
            while (j < tag_sites.size() && tag_sites[j] < x) {
                out.push_back(rank - zero_rank);
                ++j;
            }
            ++rank;
        }
    }
    while (out.size() < tag_sites.size()) out.push_back(rank - zero_rank);
    return out;
}

std::int64_t FluxRecord::at(double t) const {
    std::int64_t v = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (times[k] > t) break;
        v = values[k];
    }
    return v;
}

FluxRecord hole_flux(const Trajectory<ExclusionConfig>& tr) {
    if (tr.initial.tagged().empty()) throw std::invalid_argument("trajectory has no tagged particle");
    ExclusionConfig x = tr.initial;
    const auto k0 = index_holes(x).zero_rank;
    FluxRecord rec;
    rec.times.push_back(0.0);
    rec.values.push_back(hole_flux_now(x, k0).front());
    for (const auto& e : tr.events) {
        x.ring(e.from);
        const auto h = hole_flux_now(x, k0).front();
        if (h != rec.values.back()) {
            rec.times.push_back(e.time);
            rec.values.push_back(h);
        }
    }
    return rec;
}

nlohmann::json CouplingReport::to_json() const {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& v : divergences)
        d.push_back({{"run", v.run}, {"time", v.time}, {"site", v.site}, {"what", v.what}});
    return {{"runs", runs}, {"events", events}, {"divergences", d}, {"pass", pass()}};
}

CouplingReport check_intertwining(const ExclusionConfig& xi0, std::uint64_t seed, double horizon,
                                  std::int64_t run_index) {
    CouplingReport rep;
    rep.runs = 1;
    ExclusionConfig xi = xi0;
    if (xi.left() != TasepLeft::Closed || xi.right() != TasepRight::Closed)
        throw std::invalid_argument("intertwining check needs a closed window");
    const auto k0 = index_holes(xi).zero_rank;
    LiftedConfig lifted = lift_second_class(xi, k0);
    ZrpConfig& eta = lifted.config;

    std::vector<ParticleId> tags_by_pos = xi.tagged();
    std::sort(tags_by_pos.begin(), tags_by_pos.end(),
              [&xi](ParticleId a, ParticleId b) { return xi.position(a) < xi.position(b); });
    const auto h0 = hole_flux_now(xi, k0);
    std::vector<Site> x0;
    for (ParticleId id : lifted.tags) x0.push_back(eta.registry()[id].site);
    if (!x0.empty()) rep.tag_path.emplace_back(0.0, x0.front());

    const EventStream stream(seed, horizon, xi.z_min(), xi.z_max());
    TasepRunner run(xi, stream);
    run.advance_to(horizon, [&](double t, const Move& m) {
        ++rep.events;
        const Site a = m.from;  // site a now holds the former right occupant
        std::int64_t column = 0;
        if (xi.is_hole(a)) {
            std::int64_t rank = 0;
            for (Site x = xi.z_min(); x < a; ++x) rank += xi.is_hole(x) ? 1 : 0;
            std::int64_t tags_left = 0;
            for (ParticleId id : tags_by_pos) tags_left += xi.position(id) < a ? 1 : 0;
            if (is_tag(xi, a + 1)) ++tags_left;  // the mover was left of the hole
            column = (rank - k0) + tags_left - 1;
        } else {
            // A first-class particle swapped with the tag now at a.
            const ParticleId tag = xi.id_at(a);
            const auto j = std::find(tags_by_pos.begin(), tags_by_pos.end(), tag) - tags_by_pos.begin();
            const auto h = hole_flux_now(xi, k0);
            column = h[static_cast<std::size_t>(j)] + j - 1;
        }
        const Move zm = eta.sigma(column, t);
        if (!lifted.tags.empty() && zm.moved && zm.id == lifted.tags.front()) rep.tag_path.emplace_back(t, zm.to);
        // Past a meeting of two tags the coupling is undefined; stop there.
        if (!tags_separated(xi, tags_by_pos)) return false;
        if (!lift_unchecked(xi, k0).same_labels(eta)) {
            rep.divergences.push_back(Divergence{run_index, t, a, "configuration"});
            return false;
        }
        if (!lifted.tags.empty()) {
            const auto h = hole_flux_now(xi, k0);
            for (std::size_t j = 0; j < lifted.tags.size(); ++j) {
                const auto& e = eta.registry()[lifted.tags[j]];
                if (e.site - x0[j] != h[j] - h0[j]) {
                    rep.divergences.push_back(Divergence{run_index, t, a, "flux"});
                    return false;
                }
            }
        }
        return true;
    });
    return rep;
}

}  // namespace tazrp

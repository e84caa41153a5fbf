#include "tazrp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tazrp {

NTypeProjection::NTypeProjection(std::vector<double> thresholds) : x_(std::move(thresholds)) {
    if (x_.empty()) throw std::invalid_argument("projection needs at least one threshold");
    for (std::size_t k = 0; k < x_.size(); ++k) {
        if (!(x_[k] > 0.0 && x_[k] < 1.0)) throw std::invalid_argument("thresholds must lie in (0,1)");
        if (k > 0 && !(x_[k] < x_[k - 1])) throw std::invalid_argument("thresholds must be strictly decreasing");
    }
}

ClassLabel NTypeProjection::operator()(ClassLabel v) const {
    for (std::size_t k = 0; k < x_.size(); ++k)
        if (v.value >= x_[k]) return {-static_cast<double>(k + 1)};
    return hole_label(n());
}

ZrpConfig::ZrpConfig(Site z_min, Site z_max) : z_min_(z_min), z_max_(z_max) {
    if (z_max < z_min) throw std::invalid_argument("empty window");
    columns_.resize(static_cast<std::size_t>(z_max - z_min + 1));
    tails_.assign(columns_.size(), 0);
}

ZrpConfig ZrpConfig::from_stacks(Site z_min, const std::vector<std::vector<double>>& stacks) {
    if (stacks.empty()) throw std::invalid_argument("empty window");
    ZrpConfig c(z_min, z_min + static_cast<Site>(stacks.size()) - 1);
    for (std::size_t k = 0; k < stacks.size(); ++k) {
        const Site z = z_min + static_cast<Site>(k);
        for (std::size_t i = 0; i < stacks[k].size(); ++i)
            c.push_top(z, {stacks[k][i]}, Origin{z, static_cast<std::int64_t>(i), false});
    }
    int d = 0;
    for (const auto& s : stacks) d = std::max(d, static_cast<int>(s.size()));
    c.depth_cap_ = d;
    return c;
}

std::size_t ZrpConfig::index(Site z) const {
    if (z < z_min_ || z > z_max_) throw std::out_of_range("site outside window");
    return static_cast<std::size_t>(z - z_min_);
}

ClassLabel ZrpConfig::label(Site z, std::size_t i) const {
    const auto& c = col(z);
    if (i >= c.size()) throw std::out_of_range("stack index beyond column height");
    return c[c.size() - 1 - i].label;
}

ParticleId ZrpConfig::id_at(Site z, std::size_t i) const {
    const auto& c = col(z);
    if (i >= c.size()) throw std::out_of_range("stack index beyond column height");
    return c[c.size() - 1 - i].id;
}

std::vector<double> ZrpConfig::stack(Site z) const {
    const auto& c = col(z);
    std::vector<double> out;
    out.reserve(c.size());
    for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(it->label.value);
    return out;
}

std::size_t ZrpConfig::particle_count() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
}

std::uint64_t ZrpConfig::key(Site z, std::int64_t i, bool reservoir) {
    const auto zz = static_cast<std::uint64_t>(z) * 0x9e3779b97f4a7c15ULL;
    return (zz ^ (static_cast<std::uint64_t>(i) << 1)) ^ (reservoir ? 1ULL : 0ULL) ^ (zz >> 29);
}

ParticleId ZrpConfig::register_particle(Origin origin, Site site) {
    const auto id = static_cast<ParticleId>(registry_.size());
    registry_.push_back(RegistryEntry{origin, site, false});
    origin_index_.emplace(key(origin.z, origin.i, origin.reservoir), id);
    return id;
}

ParticleId ZrpConfig::find(Site z, std::int64_t i, bool reservoir) const {
    auto [lo, hi] = origin_index_.equal_range(key(z, i, reservoir));
    for (auto it = lo; it != hi; ++it) {
        const auto& o = registry_[it->second].origin;
        if (o.z == z && o.i == i && o.reservoir == reservoir) return it->second;
    }
    return kNoParticle;
}

std::size_t ZrpConfig::stack_index(ParticleId id) const {
    const auto& e = registry_.at(id);
    if (e.absorbed) throw std::out_of_range("particle absorbed");
    const auto& c = col(e.site);
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k].id == id) return c.size() - 1 - k;
    throw std::logic_error("registry out of sync");
}

ParticleId ZrpConfig::push_top(Site z, ClassLabel label, Origin origin) {
    auto& c = col(z);
    if (!c.empty() && label > c.front().label)
        throw std::invalid_argument("push_top would break column monotonicity");
    const ParticleId id = register_particle(origin, z);
    c.insert(c.begin(), Particle{label, id});
    return id;
}

void ZrpConfig::set_left_reservoir(bool on) {
    left_reservoir_ = on;
    if (on) {
        double top = 0.0;
        for (const auto& c : columns_)
            if (!c.empty()) top = std::max(top, c.back().label.value);
        reservoir_label_ = std::floor(top) + 1.0;
        reservoir_step_ = 1.0;
    }
}

void ZrpConfig::set_reservoir_labels(double next, double step) {
    reservoir_label_ = next;
    reservoir_step_ = step;
}

bool ZrpConfig::active(Site z) const {
    if (left_reservoir_ && z == z_min_ - 1) return true;
    const auto k = index(z);
    return !columns_[k].empty() || tails_[k] != 0;
}

void ZrpConfig::insert_sorted(std::vector<Particle>& c, Particle p) {
    // Arriving particle goes directly above every particle at least as strong.
    auto pos = std::lower_bound(c.begin(), c.end(), p.label,
                                [](const Particle& q, ClassLabel v) { return q.label < v; });
    c.insert(pos, p);
}

Move ZrpConfig::sigma(Site x, double time) {
    Move m;
    Particle p;
    if (x == z_min_ - 1 && left_reservoir_) {
        const Origin o{z_min_ - 1, reservoir_emitted_++, true};
        p = Particle{{reservoir_label_}, register_particle(o, x)};
        reservoir_label_ += reservoir_step_;
        m.emitted = true;
    } else {
        auto& c = col(x);
        if (c.empty()) {
            if (tails_[index(x)]) tainted_ = true;
            return m;
        }
        p = c.back();
        c.pop_back();
    }
    m.moved = true;
    m.id = p.id;
    m.from = x;
    Site to = x + 1;
    if (x == z_max_) {
        if (right_edge_ == RightEdge::Periodic) {
            to = z_min_;
        } else {
            m.absorbed = true;
            m.to = to;
            registry_[p.id].absorbed = true;
            registry_[p.id].site = to;
            absorbed_.push_back(Absorption{x, time, p.id});
            return m;
        }
    }
    m.to = to;
    insert_sorted(col(to), p);
    registry_[p.id].site = to;
    return m;
}

Move ZrpConfig::sigma_star(Site x) {
    Move m;
    if (x < z_min_ || x + 1 > z_max_) throw std::out_of_range("site outside window");
    auto& src = col(x + 1);
    if (src.empty()) {
        if (tails_[index(x + 1)]) tainted_ = true;
        return m;
    }
    const Particle p = src.back();
    src.pop_back();
    insert_sorted(col(x), p);
    registry_[p.id].site = x;
    m.moved = true;
    m.id = p.id;
    m.from = x + 1;
    m.to = x;
    return m;
}

bool ZrpConfig::is_monotone() const {
    for (const auto& c : columns_)
        for (std::size_t k = 1; k < c.size(); ++k)
            if (c[k].label < c[k - 1].label) return false;
    return true;
}

bool ZrpConfig::same_labels(const ZrpConfig& other) const {
    if (z_min_ != other.z_min_ || z_max_ != other.z_max_) return false;
    for (std::size_t k = 0; k < columns_.size(); ++k) {
        const auto& a = columns_[k];
        const auto& b = other.columns_[k];
        if (a.size() != b.size()) return false;
        for (std::size_t m = 0; m < a.size(); ++m)
            if (a[m].label != b[m].label) return false;
    }
    return true;
}

ZrpConfig ZrpConfig::relabeled(const std::function<ClassLabel(ClassLabel)>& g) const {
    ZrpConfig out = *this;
    for (auto& c : out.columns_)
        for (auto& p : c) p.label = g(p.label);
    if (left_reservoir_) {
        // Future emissions are at least as strong as the next one, so a
        // monotone map sends them all to g(next) once g saturates there.
        out.reservoir_label_ = g(ClassLabel{reservoir_label_}).value;
        out.reservoir_step_ = 0.0;
    }
    return out;
}

ZrpConfig ZrpConfig::reflected() const {
    ZrpConfig out = *this;
    out.z_min_ = -z_max_;
    out.z_max_ = -z_min_;
    std::reverse(out.columns_.begin(), out.columns_.end());
    std::reverse(out.tails_.begin(), out.tails_.end());
    for (auto& e : out.registry_)
        if (!e.absorbed) e.site = -e.site;
    return out;
}

bool operator==(const ZrpConfig& a, const ZrpConfig& b) {
    return a.z_min_ == b.z_min_ && a.z_max_ == b.z_max_ && a.columns_ == b.columns_ &&
           a.tails_ == b.tails_ && a.left_reservoir_ == b.left_reservoir_ &&
           a.reservoir_label_ == b.reservoir_label_ && a.reservoir_step_ == b.reservoir_step_ &&
           a.reservoir_emitted_ == b.reservoir_emitted_ && a.depth_cap_ == b.depth_cap_ &&
           a.right_edge_ == b.right_edge_ && a.tainted_ == b.tainted_ && a.registry_ == b.registry_ &&
           a.absorbed_ == b.absorbed_;
}

nlohmann::json ZrpConfig::to_json() const {
    using nlohmann::json;
    json cols = json::array();
    json ids = json::array();
    for (Site z = z_min_; z <= z_max_; ++z) {
        json lc = json::array();
        json ic = json::array();
        const auto& c = col(z);
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            lc.push_back(it->label.value);
            ic.push_back(it->id);
        }
        cols.push_back(std::move(lc));
        ids.push_back(std::move(ic));
    }
    json reg = json::array();
    for (const auto& e : registry_)
        reg.push_back({{"origin", {e.origin.z, e.origin.i}},
                       {"reservoir", e.origin.reservoir},
                       {"site", e.site},
                       {"absorbed", e.absorbed}});
    json abs = json::array();
    for (const auto& a : absorbed_) abs.push_back({a.site, a.time, a.id});
    json tails = json::array();
    for (char t : tails_) tails.push_back(t != 0);
    return json{{"window", {z_min_, z_max_}},
                {"columns", std::move(cols)},
                {"ids", std::move(ids)},
                {"registry", std::move(reg)},
                {"absorbed", std::move(abs)},
                {"flags",
                 {{"left_reservoir", left_reservoir_},
                  {"reservoir_label", reservoir_label_},
                  {"reservoir_step", reservoir_step_},
                  {"reservoir_emitted", reservoir_emitted_},
                  {"depth_cap", depth_cap_},
                  {"periodic", right_edge_ == RightEdge::Periodic},
                  {"tainted", tainted_},
                  {"infinite_tails", std::move(tails)}}}};
}

ZrpConfig ZrpConfig::from_json(const nlohmann::json& j) {
    ZrpConfig c(j.at("window").at(0).get<Site>(), j.at("window").at(1).get<Site>());
    const auto& cols = j.at("columns");
    const auto& ids = j.at("ids");
    for (std::size_t k = 0; k < c.columns_.size(); ++k) {
        auto& dst = c.columns_[k];
        const auto& lc = cols.at(k);
        for (std::size_t m = lc.size(); m-- > 0;)
            dst.push_back(Particle{{lc.at(m).get<double>()}, ids.at(k).at(m).get<ParticleId>()});
    }
    for (const auto& e : j.at("registry")) {
        RegistryEntry r;
        r.origin = Origin{e.at("origin").at(0).get<Site>(), e.at("origin").at(1).get<std::int64_t>(),
                          e.at("reservoir").get<bool>()};
        r.site = e.at("site").get<Site>();
        r.absorbed = e.at("absorbed").get<bool>();
        const auto id = static_cast<ParticleId>(c.registry_.size());
        c.registry_.push_back(r);
        c.origin_index_.emplace(key(r.origin.z, r.origin.i, r.origin.reservoir), id);
    }
    for (const auto& a : j.at("absorbed"))
        c.absorbed_.push_back(Absorption{a.at(0).get<Site>(), a.at(1).get<double>(), a.at(2).get<ParticleId>()});
    const auto& f = j.at("flags");
    c.left_reservoir_ = f.at("left_reservoir").get<bool>();
    c.reservoir_label_ = f.at("reservoir_label").get<double>();
    c.reservoir_step_ = f.at("reservoir_step").get<double>();
    c.reservoir_emitted_ = f.at("reservoir_emitted").get<std::int64_t>();
    c.depth_cap_ = f.at("depth_cap").get<int>();
    c.right_edge_ = f.at("periodic").get<bool>() ? RightEdge::Periodic : RightEdge::Absorbing;
    c.tainted_ = f.at("tainted").get<bool>();
    const auto& tails = f.at("infinite_tails");
    for (std::size_t k = 0; k < c.tails_.size(); ++k) c.tails_[k] = tails.at(k).get<bool>() ? 1 : 0;
    return c;
}

ZrpConfig make_eta_star(Site z_min, Site z_max, int depth_cap) {
    if (z_max < z_min) throw std::invalid_argument("invalid window bounds");
    if (depth_cap < 1) throw std::invalid_argument("depth_cap must be at least 1");
    ZrpConfig c(z_min, z_max);
    const double total = static_cast<double>(z_max - z_min + 1) * depth_cap;
    for (Site z = z_min; z <= z_max; ++z) {
        for (int i = 0; i < depth_cap; ++i) {
            const double rank = static_cast<double>(z - z_min) * depth_cap + i;
            c.push_top(z, {1.0 - (rank + 1.0) / (total + 1.0)}, Origin{z, i, false});
        }
        c.set_infinite_tail(z, true);
    }
    c.set_depth_cap(depth_cap);
    c.set_left_reservoir(true);
    return c;
}

ZrpConfig apply_sigma(ZrpConfig config, Site x) {
    if (!(config.in_window(x) || (x == config.z_min() - 1 && config.left_reservoir())))
        throw std::out_of_range("site outside window");
    config.sigma(x);
    return config;
}

ZrpConfig apply_sigma_star(ZrpConfig config, Site x) {
    config.sigma_star(x);
    return config;
}

ZrpConfig relabel_monotone(const ZrpConfig& config, const NTypeProjection& proj) {
    return config.relabeled([&proj](ClassLabel v) { return proj(v); });
}

ZrpConfig reflect(const ZrpConfig& config) { return config.reflected(); }

// ---------------------------------------------------------------------------

ExclusionConfig::ExclusionConfig(Site z_min, std::vector<double> labels)
    : z_min_(z_min), labels_(std::move(labels)) {
    ids_.assign(labels_.size(), kNoParticle);
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (labels_[k] == kHole) continue;
        ids_[k] = static_cast<ParticleId>(positions_.size());
        positions_.push_back(z_min_ + static_cast<Site>(k));
        exited_.push_back(0);
    }
}

ExclusionConfig ExclusionConfig::from_string(Site z_min, const std::string& pattern) {
    std::vector<double> labels;
    for (std::size_t k = 0; k < pattern.size();) {
        const auto c = static_cast<unsigned char>(pattern[k]);
        if (c >= 0x80) {
            // UTF-8 circles: U+25CF (filled) and U+25CB (open), both 3 bytes.
            const std::string glyph = pattern.substr(k, 3);
            if (glyph == "●") labels.push_back(1.0);
            else if (glyph == "○") labels.push_back(kHole);
            else throw std::invalid_argument("unknown glyph in pattern");
            k += 3;
            continue;
        }
        if (c == '.' || c == '0' || c == 'o') labels.push_back(kHole);
        else if (c == '#') labels.push_back(1.0);
        else if (c >= '1' && c <= '9') labels.push_back(static_cast<double>(c - '0'));
        else if (c != ' ') throw std::invalid_argument("unknown character in pattern");
        ++k;
    }
    return ExclusionConfig(z_min, std::move(labels));
}

void ExclusionConfig::tag(Site x) {
    if (!in_window(x) || is_hole(x)) throw std::invalid_argument("tag must sit on a particle in the window");
    tagged_.push_back(id_at(x));
}

void ExclusionConfig::set_left_reservoir(double label) {
    left_ = TasepLeft::Reservoir;
    reservoir_label_ = label;
}

void ExclusionConfig::set_site(Site x, double label, ParticleId id) {
    const auto k = static_cast<std::size_t>(x - z_min_);
    labels_[k] = label;
    ids_[k] = id;
    if (id != kNoParticle) positions_[id] = x;
}

bool ExclusionConfig::bond_active(Site x) const {
    if (x == z_min_ - 1) return left_ == TasepLeft::Reservoir && reservoir_label_ < labels_.front();
    if (x == z_max()) return right_ == TasepRight::Open && labels_.back() != kHole;
    return labels_[static_cast<std::size_t>(x - z_min_)] < labels_[static_cast<std::size_t>(x + 1 - z_min_)];
}

Move ExclusionConfig::ring(Site x) {
    Move m;
    if (x < z_min_ - 1 || x > z_max()) throw std::out_of_range("bond outside window");
    if (!bond_active(x)) return m;
    m.moved = true;
    m.from = x;
    m.to = x + 1;
    if (x == z_min_ - 1) {
        // Whatever sat at the left edge leaves the window: the frozen
        // first-class region assumption is broken from here on.
        const ParticleId out = ids_.front();
        if (out != kNoParticle) exited_[out] = 1;
        const auto id = static_cast<ParticleId>(positions_.size());
        positions_.push_back(z_min_);
        exited_.push_back(0);
        set_site(z_min_, reservoir_label_, id);
        m.id = id;
        m.emitted = true;
        tainted_ = true;
        return m;
    }
    if (x == z_max()) {
        const ParticleId id = ids_.back();
        exited_[id] = 1;
        ++exits_;
        set_site(x, kHole, kNoParticle);
        m.id = id;
        m.absorbed = true;
        tainted_ = true;
        return m;
    }
    const double a = label(x);
    const double b = label(x + 1);
    const ParticleId ia = id_at(x);
    const ParticleId ib = id_at(x + 1);
    set_site(x, b, ib);
    set_site(x + 1, a, ia);
    m.id = ia;
    return m;
}

}  // namespace tazrp

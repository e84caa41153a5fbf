#include "tazrp/harris.hpp"

#include <ostream>

namespace tazrp {

ClockQueue::ClockQueue(const EventStream& stream, Site first, Site last) : stream_(&stream), first_(first) {
    if (!stream.covers(first, last)) throw std::invalid_argument("stream/window mismatch");
    slots_.resize(static_cast<std::size_t>(last - first + 1));
}

void ClockQueue::activate(Site s, double now) {
    Slot& sl = slot(s);
    if (sl.active) return;
    if (!sl.started) {
        sl.clock = stream_->clock(s);
        sl.started = true;
    }
    sl.active = true;
    ++sl.version;
    sl.clock.skip_past(now);
    const double t = sl.clock.peek();
    if (t != SiteClock::kNever) heap_.push(Entry{t, s, sl.version});
}

void ClockQueue::deactivate(Site s) {
    Slot& sl = slot(s);
    if (!sl.active) return;
    sl.active = false;
    ++sl.version;
}

bool ClockQueue::next(double horizon, Ring& out) {
    while (!heap_.empty()) {
        const Entry e = heap_.top();
        Slot& sl = slot(e.site);
        if (e.version != sl.version) {
            heap_.pop();
            continue;
        }
        if (e.time > horizon) return false;
        heap_.pop();
        sl.clock.advance();
        const double t = sl.clock.peek();
        if (t != SiteClock::kNever) heap_.push(Entry{t, e.site, sl.version});
        out = Ring{e.time, e.site};
        return true;
    }
    return false;
}

namespace {
Site zrp_first(const ZrpConfig& c) { return c.left_reservoir() ? c.z_min() - 1 : c.z_min(); }
}  // namespace

ZrpRunner::ZrpRunner(ZrpConfig& config, const EventStream& stream)
    : config_(&config), queue_(stream, zrp_first(config), config.z_max()) {
    for (Site z = zrp_first(config); z <= config.z_max(); ++z)
        if (config.active(z)) queue_.activate(z, 0.0);
}

TasepRunner::TasepRunner(ExclusionConfig& config, const EventStream& stream)
    : config_(&config),
      first_bond_(config.left() == TasepLeft::Reservoir ? config.z_min() - 1 : config.z_min()),
      last_bond_(config.right() == TasepRight::Open ? config.z_max() : config.z_max() - 1),
      queue_(stream, first_bond_, std::max(first_bond_, last_bond_)) {
    for (Site x = first_bond_; x <= last_bond_; ++x) refresh(x, 0.0);
}

void TasepRunner::refresh(Site bond, double now) {
    if (bond < first_bond_ || bond > last_bond_) return;
    if (config_->bond_active(bond)) queue_.activate(bond, now);
    else queue_.deactivate(bond);
}

template <>
Site Trajectory<ZrpConfig>::start_site(ParticleId id) const {
    if (id < initial.registry().size()) return initial.registry()[id].site;
    return final.registry().at(id).origin.z;
}

template <>
Site Trajectory<ExclusionConfig>::start_site(ParticleId id) const {
    if (id < initial.particle_count()) return initial.position(id);
    return initial.z_min() - 1;
}

template <class Config>
void Trajectory<Config>::write_csv(std::ostream& os) const {
    os << "time,site,registry_id_moved\n";
    os.precision(17);
    for (const auto& e : events) os << e.time << ',' << e.from << ',' << e.id << '\n';
}

template struct Trajectory<ZrpConfig>;
template struct Trajectory<ExclusionConfig>;

Trajectory<ZrpConfig> evolve(const ZrpConfig& config, const EventStream& stream, double horizon) {
    Trajectory<ZrpConfig> tr;
    tr.initial = config;
    tr.final = config;
    tr.horizon = horizon;
    ZrpRunner run(tr.final, stream);
    run.advance_to(horizon, [&tr](double t, const Move& m) {
        tr.events.push_back(TrajectoryEvent{t, m.from, m.to, m.id});
        return true;
    });
    return tr;
}

Trajectory<ExclusionConfig> evolve(const ExclusionConfig& config, const EventStream& stream, double horizon) {
    Trajectory<ExclusionConfig> tr;
    tr.initial = config;
    tr.final = config;
    tr.horizon = horizon;
    TasepRunner run(tr.final, stream);
    run.advance_to(horizon, [&tr](double t, const Move& m) {
        tr.events.push_back(TrajectoryEvent{t, m.from, m.to, m.id});
        return true;
    });
    return tr;
}

std::vector<ZrpConfig> snapshots(const ZrpConfig& config, const EventStream& stream, const std::vector<double>& times) {
    std::vector<ZrpConfig> out;
    out.reserve(times.size());
    ZrpConfig c = config;
    ZrpRunner run(c, stream);
    for (double t : times) {
        run.advance_to(t);
        out.push_back(c);
    }
    return out;
}

ZrpConfig make_ring_geometric(Site width, double q, std::uint64_t seed) {
    ZrpConfig c(0, width - 1);
    c.set_right_edge(RightEdge::Periodic);
    Xoshiro256 rng(seed);
    for (Site z = 0; z < width; ++z) {
        const auto n = rng.geometric0(q);
        for (std::int64_t i = 0; i < n; ++i) c.push_top(z, {1.0}, Origin{z, i, false});
    }
    return c;
}

}  // namespace tazrp

#pragma once

#include <cstdint>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tazrp/event_stream.hpp"
#include "tazrp/lattice.hpp"

namespace tazrp {

struct Ring {
    double time = 0.0;
    Site site = 0;
};

// Global time-ordered merge of the clocks of currently active sites. Inactive
// sites are not scheduled; on activation their cursor skips the rings that
// fell while they were idle, so the realization never depends on activity.
class ClockQueue {
public:
    ClockQueue(const EventStream& stream, Site first, Site last);

    void activate(Site s, double now);
    void deactivate(Site s);
    bool is_active(Site s) const { return slot(s).active; }
    // Pops the next ring with time <= horizon; false when there is none.
    bool next(double horizon, Ring& out);

private:
    struct Slot {
        SiteClock clock;
        std::uint32_t version = 0;
        bool active = false;
        bool started = false;
    };
    struct Entry {
        double time;
        Site site;
        std::uint32_t version;
        bool operator>(const Entry& o) const { return time != o.time ? time > o.time : site > o.site; }
    };
    Slot& slot(Site s) { return slots_[static_cast<std::size_t>(s - first_)]; }
    const Slot& slot(Site s) const { return slots_[static_cast<std::size_t>(s - first_)]; }

    const EventStream* stream_;
    Site first_;
    std::vector<Slot> slots_;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
};

// Drives a ZrpConfig in place. A ring at x applies sigma_x.
class ZrpRunner {
public:
    ZrpRunner(ZrpConfig& config, const EventStream& stream);

    double now() const { return now_; }

    // Processes every ring with time <= t. on_move(time, move) returning false
    // stops the run right after that move; advance_to then returns false.
    template <class OnMove>
    bool advance_to(double t, OnMove&& on_move) {
        Ring r;
        while (queue_.next(t, r)) {
            now_ = r.time;
            const Move m = config_->sigma(r.site, r.time);
            if (!m.moved) continue;
            if (!config_->active(r.site)) queue_.deactivate(r.site);
            if (!m.absorbed) queue_.activate(m.to, r.time);
            if (!on_move(r.time, m)) return false;
        }
        now_ = t;
        return true;
    }
    void advance_to(double t) {
        advance_to(t, [](double, const Move&) { return true; });
    }

private:
    ZrpConfig* config_;
    ClockQueue queue_;
    double now_ = 0.0;
};

// Drives an ExclusionConfig in place. A ring at x acts on bond (x, x+1).
class TasepRunner {
public:
    TasepRunner(ExclusionConfig& config, const EventStream& stream);

    double now() const { return now_; }

    template <class OnMove>
    bool advance_to(double t, OnMove&& on_move) {
        Ring r;
        while (queue_.next(t, r)) {
            now_ = r.time;
            const Move m = config_->ring(r.site);
            if (!m.moved) continue;
            refresh(r.site - 1, r.time);
            refresh(r.site, r.time);
            refresh(r.site + 1, r.time);
            if (!on_move(r.time, m)) return false;
        }
        now_ = t;
        return true;
    }
    void advance_to(double t) {
        advance_to(t, [](double, const Move&) { return true; });
    }

private:
    void refresh(Site bond, double now);

    ExclusionConfig* config_;
    Site first_bond_;
    Site last_bond_;
    ClockQueue queue_;
    double now_ = 0.0;
};

struct TrajectoryEvent {
    double time = 0.0;
    Site from = 0;
    Site to = 0;
    ParticleId id = kNoParticle;
    friend bool operator==(const TrajectoryEvent&, const TrajectoryEvent&) = default;
};

// Event log of one run plus its end state. Positions are piecewise constant
// and non-decreasing (right edges may wrap on periodic windows).
template <class Config>
struct Trajectory {
    Config initial;
    Config final;
    std::vector<TrajectoryEvent> events;
    double horizon = 0.0;

    // Site of particle id at time t; ids created during the run start at
    // the site they were emitted from.
    Site position(ParticleId id, double t) const {
        Site x = start_site(id);
        for (const auto& e : events) {
            if (e.time > t) break;
            if (e.id == id) x = e.to;
        }
        return x;
    }
    void write_csv(std::ostream& os) const;

private:
    Site start_site(ParticleId id) const;
};

template <>
Site Trajectory<ZrpConfig>::start_site(ParticleId id) const;
template <>
Site Trajectory<ExclusionConfig>::start_site(ParticleId id) const;
extern template struct Trajectory<ZrpConfig>;
extern template struct Trajectory<ExclusionConfig>;

Trajectory<ZrpConfig> evolve(const ZrpConfig& config, const EventStream& stream, double horizon);
Trajectory<ExclusionConfig> evolve(const ExclusionConfig& config, const EventStream& stream, double horizon);

template <class Config>
std::pair<Trajectory<Config>, Trajectory<Config>> evolve_coupled(const Config& a, const Config& b,
                                                                 const EventStream& stream, double horizon) {
    if (a.z_min() != b.z_min() || a.z_max() != b.z_max()) throw std::invalid_argument("window mismatch");
    return {evolve(a, stream, horizon), evolve(b, stream, horizon)};
}

// Configuration copies at each of the requested (sorted) times.
std::vector<ZrpConfig> snapshots(const ZrpConfig& config, const EventStream& stream, const std::vector<double>& times);

// Periodic window started from i.i.d. Geom0 occupancies with P(k) = (1-q) q^k.
ZrpConfig make_ring_geometric(Site width, double q, std::uint64_t seed);

}  // namespace tazrp

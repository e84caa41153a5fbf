#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <json.hpp>

#include "tazrp/lattice.hpp"
#include "tazrp/rng.hpp"

namespace tazrp {

// Cursor over one site's ring times. Times are produced block by block: block
// k covers [kB, (k+1)B) and is drawn from a generator keyed by (seed, site, k),
// so any prefix can be skipped in O(1) without changing the realization.
class SiteClock {
public:
    static constexpr double kBlock = 4.0;

    SiteClock() = default;
    SiteClock(std::uint64_t site_seed, double horizon);
    SiteClock(const std::vector<double>* list, double horizon);

    // Next ring time, or +inf once past the horizon.
    double peek() const { return cur_ <= horizon_ ? cur_ : kNever; }
    void advance();
    // Moves the cursor to the first ring strictly after t.
    void skip_past(double t);

    static constexpr double kNever = std::numeric_limits<double>::infinity();

private:
    void enter_block(std::int64_t k);

    std::uint64_t site_seed_ = 0;
    double horizon_ = 0.0;
    std::int64_t block_ = 0;
    double cur_ = kNever;
    Xoshiro256 rng_;
    const std::vector<double>* list_ = nullptr;
    std::size_t pos_ = 0;
};

// Independent rate-1 Poisson clocks on an interval of sites, fully determined
// by the seed. Streams can also be given explicitly for hand-built tests.
class EventStream {
public:
    EventStream() = default;
    EventStream(std::uint64_t seed, double horizon, Site first, Site last);
    static EventStream from_lists(double horizon, Site first, Site last,
                                  std::map<Site, std::vector<double>> lists);

    std::uint64_t seed() const { return seed_; }
    double horizon() const { return horizon_; }
    Site first_site() const { return first_; }
    Site last_site() const { return last_; }
    bool covers(Site a, Site b) const { return a >= first_ && b <= last_; }

    SiteClock clock(Site s) const;
    std::vector<double> times(Site s) const;
    nlohmann::json manifest() const;

private:
    std::uint64_t seed_ = 0;
    double horizon_ = 0.0;
    Site first_ = 0;
    Site last_ = -1;
    std::shared_ptr<const std::map<Site, std::vector<double>>> lists_;
};

EventStream sample_event_stream(Site first, Site last, double horizon, std::uint64_t seed);

}  // namespace tazrp

#include "tazrp/event_stream.hpp"

#include <cmath>
#include <stdexcept>

namespace tazrp {

namespace {
const std::vector<double> kEmptyList;
}

SiteClock::SiteClock(std::uint64_t site_seed, double horizon) : site_seed_(site_seed), horizon_(horizon) {
    if (horizon_ > 0.0) enter_block(0);
}

SiteClock::SiteClock(const std::vector<double>* list, double horizon) : horizon_(horizon), list_(list) {
    cur_ = list_->empty() ? kNever : (*list_)[0];
}

void SiteClock::enter_block(std::int64_t k) {
    // Skip empty blocks; stop as soon as a ring lands inside its block or we
    // are past the horizon.
    for (;;) {
        const double start = static_cast<double>(k) * kBlock;
        if (start > horizon_) {
            block_ = k;
            cur_ = kNever;
            return;
        }
        rng_.reseed(derive_seed(site_seed_, static_cast<std::uint64_t>(k)));
        const double t = start + rng_.exponential();
        if (t < start + kBlock) {
            block_ = k;
            cur_ = t;
            return;
        }
        ++k;
    }
}

void SiteClock::advance() {
    if (list_) {
        ++pos_;
        cur_ = pos_ < list_->size() ? (*list_)[pos_] : kNever;
        return;
    }
    if (cur_ == kNever) return;
    const double t = cur_ + rng_.exponential();
    if (t < static_cast<double>(block_ + 1) * kBlock) {
        cur_ = t;
    } else {
        enter_block(block_ + 1);
    }
}

void SiteClock::skip_past(double t) {
    if (!list_ && cur_ != kNever) {
        const auto k = static_cast<std::int64_t>(std::floor(t / kBlock));
        if (k > block_) enter_block(k);
    }
    while (cur_ <= t && cur_ != kNever) advance();
}

EventStream::EventStream(std::uint64_t seed, double horizon, Site first, Site last)
    : seed_(seed), horizon_(horizon), first_(first), last_(last) {
    if (horizon < 0.0) throw std::invalid_argument("negative horizon");
}

EventStream EventStream::from_lists(double horizon, Site first, Site last,
                                    std::map<Site, std::vector<double>> lists) {
    for (const auto& [s, v] : lists) {
        if (s < first || s > last) throw std::invalid_argument("listed site outside stream interval");
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!(v[k] > 0.0) || v[k] > horizon || (k > 0 && !(v[k] > v[k - 1])))
                throw std::invalid_argument("listed ring times must be strictly increasing in (0,T]");
    }
    EventStream e(0, horizon, first, last);
    e.lists_ = std::make_shared<const std::map<Site, std::vector<double>>>(std::move(lists));
    return e;
}

SiteClock EventStream::clock(Site s) const {
    if (s < first_ || s > last_) throw std::out_of_range("site outside stream interval");
    if (lists_) {
        auto it = lists_->find(s);
        return SiteClock(it == lists_->end() ? &kEmptyList : &it->second, horizon_);
    }
    return SiteClock(derive_seed(seed_, static_cast<std::uint64_t>(s)), horizon_);
}

std::vector<double> EventStream::times(Site s) const {
    std::vector<double> out;
    SiteClock c = clock(s);
    for (double t = c.peek(); t != SiteClock::kNever; c.advance(), t = c.peek()) out.push_back(t);
    return out;
}

nlohmann::json EventStream::manifest() const {
    return {{"seed", seed_}, {"T", horizon_}, {"window", {first_, last_}}, {"explicit", lists_ != nullptr},
            {"block", SiteClock::kBlock}};
}

EventStream sample_event_stream(Site first, Site last, double horizon, std::uint64_t seed) {
    return EventStream(seed, horizon, first, last);
}

}  // namespace tazrp

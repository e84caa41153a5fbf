#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "tazrp/event_stream.hpp"
#include "tazrp/lattice.hpp"

namespace tazrp {

using LabelPair = std::pair<double, double>;

// Columns of label pairs; stack index 0 is the bottom. Both coordinates are
// non-increasing up each column.
class PairConfig {
public:
    PairConfig() = default;
    PairConfig(Site z_min, std::vector<std::vector<LabelPair>> stacks);
    // Pairs up two configurations stack index by stack index. Column heights
    // must agree.
    static PairConfig from_configs(const ZrpConfig& first, const ZrpConfig& second);

    Site z_min() const { return z_min_; }
    Site z_max() const { return z_min_ + static_cast<Site>(cols_.size()) - 1; }
    const std::vector<LabelPair>& column(Site z) const { return cols_.at(static_cast<std::size_t>(z - z_min_)); }
    bool valid() const;

    // Coordinate marginal as a plain configuration (fresh registry).
    ZrpConfig coordinate(int which) const;

    // Ring at z: the bottom pair moves to z+1 and both coordinates of the
    // receiving column are re-sorted and zipped. Pairs leaving z_max are dropped.
    bool ring(Site z, std::vector<LabelPair>* before = nullptr);

    friend bool operator==(const PairConfig&, const PairConfig&) = default;

private:
    Site z_min_ = 0;
    std::vector<std::vector<LabelPair>> cols_;
};

struct SortingEvent {
    double time = 0.0;
    Site from = 0;
    LabelPair moved;
    std::vector<LabelPair> before;  // receiving column before the merge
    std::vector<LabelPair> after;   // receiving column after the merge
};

struct SortingTrajectory {
    PairConfig initial;
    PairConfig final;
    std::vector<SortingEvent> events;
};

// on_event is called after each effective ring with the current configuration.
SortingTrajectory evolve_sorting(const PairConfig& pair, const EventStream& stream, double horizon,
                                 const std::function<void(const SortingEvent&, const PairConfig&)>& on_event = {});

// Runs the sorting process and, under the same stream, plain evolutions of
// both coordinates; compares the columns touched by every event and the full
// window at the end, label for label.
struct MarginalCheck {
    std::int64_t events = 0;
    std::int64_t mismatches = 0;
    double first_mismatch = -1.0;
    bool pass() const { return mismatches == 0; }
};
MarginalCheck check_sorting_marginals(const ZrpConfig& first, const ZrpConfig& second, const EventStream& stream,
                                      double horizon);

// Pads the shorter column of each site with labels weaker than everything in
// either configuration so the two can be paired.
std::pair<ZrpConfig, ZrpConfig> pad_to_pairable(const ZrpConfig& first, const ZrpConfig& second);

// Coupled runs of eta* and sigma_0 eta* on columns 0 and 1 (column -1 is a
// finite stand-in for everything to the left). i_fast is read off the sorting
// interactions; the relations are then checked on terminal positions of the
// same particles in the two runs.
struct RelationCheck {
    bool tainted = false;
    int i_fast = -1;
    int i_sort = 0;  // #{i : X_{0,i}(T) >= X_{1,0}(T)} in the eta* run
    std::int64_t checked = 0;
    std::int64_t violations = 0;
    bool holds() const { return violations == 0; }
};
RelationCheck check_jump_relations(int depth, double horizon, std::uint64_t seed);

}  // namespace tazrp

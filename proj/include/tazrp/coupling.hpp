#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tazrp/harris.hpp"
#include "tazrp/lattice.hpp"

namespace tazrp {

// Hole positions of an exclusion window, in order, plus the rank of y_0 (the
// first hole at a position > 0).
struct HoleIndexing {
    std::vector<Site> positions;
    std::int64_t zero_rank = 0;
    // Index i of the hole at positions[r].
    std::int64_t index_of_rank(std::size_t r) const { return static_cast<std::int64_t>(r) - zero_rank; }
};

HoleIndexing index_holes(const ExclusionConfig& xi);

// Particle-particle map. Column c holds the particles strictly between y_c and
// y_{c+1}; particles left of the first hole form column (first index - 1),
// particles right of the last hole are dropped. A TASEP label l becomes the
// ZRP label -l, so first-class particles are class -1.
// zero_rank overrides the rank of y_0 (used to keep hole labels fixed in time).
ZrpConfig phi_map(const ExclusionConfig& xi, std::optional<std::int64_t> zero_rank = std::nullopt);

// Lays each column out as its particles followed by one hole, placed so the
// hole that closes column -1 (that is, y_0) sits at anchor.
ExclusionConfig phi_inverse(const ZrpConfig& eta, Site anchor);

struct LiftedConfig {
    ZrpConfig config;
    std::vector<ParticleId> tags;  // ZRP ids of the lifted tags, left to right
};

// Second-class lift. Tags become holes for the purpose of indexing gaps; the
// tag sits on top of the gap that follows it, and that column gets index
// H + j for the j-th tag (0-based) where H is the index of the first hole to
// its right. With one tag this is the column i of the first hole right of it.
LiftedConfig lift_second_class(const ExclusionConfig& xi, std::optional<std::int64_t> zero_rank = std::nullopt);

// H_2 per tag: index of the first hole to the right of each tag.
std::vector<std::int64_t> hole_flux_now(const ExclusionConfig& xi, std::int64_t zero_rank);

struct FluxRecord {
    std::vector<double> times;          // jump times of H_2
    std::vector<std::int64_t> values;   // H_2 after each jump; values[0] is H_2(0) at time 0
    std::int64_t at(double t) const;
};

// H_2 along a recorded TASEP trajectory, for the first tag.
FluxRecord hole_flux(const Trajectory<ExclusionConfig>& tr);

struct Divergence {
    std::int64_t run = 0;
    double time = 0.0;
    Site site = 0;
    std::string what;
};

struct CouplingReport {
    std::int64_t runs = 0;
    std::int64_t events = 0;
    std::vector<Divergence> divergences;
    // ZRP column of the first tag: (0, start) and then one entry per move.
    std::vector<std::pair<double, Site>> tag_path;
    bool pass() const { return divergences.empty(); }
    nlohmann::json to_json() const;
};

// Evolves the TASEP on a closed window and drives the ZRP image by event
// translation; compares the lifted image with the ZRP after every event.
// With tags it also checks X_{p_j}(t) - X_{p_j}(0) = H_j(t) - H_j(0) until two
// tags become adjacent.
CouplingReport check_intertwining(const ExclusionConfig& xi, std::uint64_t seed, double horizon,
                                  std::int64_t run_index = 0);

}  // namespace tazrp

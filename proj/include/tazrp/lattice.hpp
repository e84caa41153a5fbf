#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace tazrp {

using Site = std::int64_t;
using ParticleId = std::uint32_t;
inline constexpr ParticleId kNoParticle = std::numeric_limits<ParticleId>::max();

// Particle class. In zero-range configurations larger means stronger; in
// exclusion configurations smaller means stronger.
struct ClassLabel {
    double value = 0.0;
    friend constexpr auto operator<=>(ClassLabel, ClassLabel) = default;
};

// Hole class of an n-type configuration. Weaker than every class in {-1..-n}.
constexpr ClassLabel hole_label(int n_types) { return {-(n_types + 1.0)}; }

struct Particle {
    ClassLabel label;
    ParticleId id = kNoParticle;
    friend bool operator==(const Particle&, const Particle&) = default;
};

// Initial index of a particle. Reservoir emissions get column z_min-1 and a
// running emission count as height.
struct Origin {
    Site z = 0;
    std::int64_t i = 0;
    bool reservoir = false;
    friend bool operator==(const Origin&, const Origin&) = default;
};

struct RegistryEntry {
    Origin origin;
    Site site = 0;
    bool absorbed = false;
    friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

struct Absorption {
    Site site = 0;
    double time = 0.0;
    ParticleId id = kNoParticle;
    friend bool operator==(const Absorption&, const Absorption&) = default;
};

enum class RightEdge { Absorbing, Periodic };

struct Move {
    bool moved = false;
    ParticleId id = kNoParticle;
    Site from = 0;
    Site to = 0;
    bool absorbed = false;
    bool emitted = false;  // came out of the left reservoir
};

class NTypeProjection {
public:
    explicit NTypeProjection(std::vector<double> thresholds);
    int n() const { return static_cast<int>(x_.size()); }
    const std::vector<double>& thresholds() const { return x_; }
    // -min{i : v >= x_i}, or the hole class -n-1 when v < x_n.
    ClassLabel operator()(ClassLabel v) const;

private:
    std::vector<double> x_;
};

// Finite window [z_min, z_max] of stacks. Stack index 0 is the bottom, i.e.
// the strongest particle. Storage is ascending so the strongest sits at back().
class ZrpConfig {
public:
    ZrpConfig() = default;
    ZrpConfig(Site z_min, Site z_max);

    // stacks[k] lists column z_min+k from the bottom (strongest) upwards.
    static ZrpConfig from_stacks(Site z_min, const std::vector<std::vector<double>>& stacks);

    Site z_min() const { return z_min_; }
    Site z_max() const { return z_max_; }
    std::size_t width() const { return columns_.size(); }
    bool in_window(Site z) const { return z >= z_min_ && z <= z_max_; }

    std::size_t height(Site z) const { return col(z).size(); }
    ClassLabel label(Site z, std::size_t i) const;
    ParticleId id_at(Site z, std::size_t i) const;
    std::vector<double> stack(Site z) const;
    const std::vector<Particle>& ascending(Site z) const { return col(z); }
    std::size_t particle_count() const;

    // Adds a particle on top of column z (it must not be stronger than the
    // current top). Returns its registry id.
    ParticleId push_top(Site z, ClassLabel label, Origin origin);

    bool left_reservoir() const { return left_reservoir_; }
    void set_left_reservoir(bool on);
    // Reservoir labels: increasing from next_reservoir_label by +1 when
    // reservoir_step > 0, constant when it is 0.
    double next_reservoir_label() const { return reservoir_label_; }
    double reservoir_step() const { return reservoir_step_; }
    void set_reservoir_labels(double next, double step);
    std::int64_t reservoir_emitted() const { return reservoir_emitted_; }

    bool infinite_tail(Site z) const { return tails_[index(z)] != 0; }
    void set_infinite_tail(Site z, bool on) { tails_[index(z)] = on ? 1 : 0; }
    int depth_cap() const { return depth_cap_; }
    void set_depth_cap(int d) { depth_cap_ = d; }
    RightEdge right_edge() const { return right_edge_; }
    void set_right_edge(RightEdge e) { right_edge_ = e; }
    bool tainted() const { return tainted_; }
    void mark_tainted() { tainted_ = true; }

    const std::vector<RegistryEntry>& registry() const { return registry_; }
    ParticleId find(Site z, std::int64_t i, bool reservoir = false) const;
    std::size_t stack_index(ParticleId id) const;
    const std::vector<Absorption>& absorbed() const { return absorbed_; }

    // A site holds a particle that can be served: tracked particles, or an
    // untracked infinite tail.
    bool active(Site z) const;

    // sigma_x. x may be z_min-1 when the reservoir is on. Serving an exhausted
    // column whose tail is infinite marks the configuration tainted.
    Move sigma(Site x, double time = 0.0);
    // sigma*_x: strongest of column x+1 moves into column x.
    Move sigma_star(Site x);

    bool is_monotone() const;
    // Labels equal site by site (ids and metadata ignored).
    bool same_labels(const ZrpConfig& other) const;

    // Monotone relabelling; tails and reservoir labels are mapped too.
    ZrpConfig relabeled(const std::function<ClassLabel(ClassLabel)>& g) const;
    ZrpConfig reflected() const;

    nlohmann::json to_json() const;
    static ZrpConfig from_json(const nlohmann::json& j);

    friend bool operator==(const ZrpConfig&, const ZrpConfig&);

private:
    std::size_t index(Site z) const;
    std::vector<Particle>& col(Site z) { return columns_[index(z)]; }
    const std::vector<Particle>& col(Site z) const { return columns_[index(z)]; }
    static void insert_sorted(std::vector<Particle>& c, Particle p);
    static std::uint64_t key(Site z, std::int64_t i, bool reservoir);
    ParticleId register_particle(Origin origin, Site site);

    Site z_min_ = 0;
    Site z_max_ = -1;
    std::vector<std::vector<Particle>> columns_;
    std::vector<char> tails_;
    bool left_reservoir_ = false;
    double reservoir_label_ = 1.0;
    double reservoir_step_ = 1.0;
    std::int64_t reservoir_emitted_ = 0;
    int depth_cap_ = 0;
    RightEdge right_edge_ = RightEdge::Absorbing;
    bool tainted_ = false;
    std::vector<RegistryEntry> registry_;
    std::unordered_multimap<std::uint64_t, ParticleId> origin_index_;
    std::vector<Absorption> absorbed_;
};

// Fully ordered initial condition restricted to the window: p_{z,i} is
// stronger than p_{w,j} iff z < w, or z = w and i < j. Labels lie in (0,1),
// tails are infinite and the left reservoir is on.
ZrpConfig make_eta_star(Site z_min, Site z_max, int depth_cap);

ZrpConfig apply_sigma(ZrpConfig config, Site x);
ZrpConfig apply_sigma_star(ZrpConfig config, Site x);
ZrpConfig relabel_monotone(const ZrpConfig& config, const NTypeProjection& proj);
ZrpConfig reflect(const ZrpConfig& config);

// Multi-type TASEP window. Smaller label is stronger; holes carry +inf.
enum class TasepLeft { Closed, Reservoir };
enum class TasepRight { Closed, Open };

class ExclusionConfig {
public:
    static constexpr double kHole = std::numeric_limits<double>::infinity();

    ExclusionConfig() = default;
    ExclusionConfig(Site z_min, std::vector<double> labels);
    // '1' or '#' or the filled circle for a first-class particle, '.' '0' or
    // the open circle for a hole, '2'..'9' for higher classes.
    static ExclusionConfig from_string(Site z_min, const std::string& pattern);

    Site z_min() const { return z_min_; }
    Site z_max() const { return z_min_ + static_cast<Site>(labels_.size()) - 1; }
    std::size_t size() const { return labels_.size(); }
    bool in_window(Site x) const { return x >= z_min_ && x <= z_max(); }

    double label(Site x) const { return labels_[static_cast<std::size_t>(x - z_min_)]; }
    ParticleId id_at(Site x) const { return ids_[static_cast<std::size_t>(x - z_min_)]; }
    bool is_hole(Site x) const { return label(x) == kHole; }
    const std::vector<double>& labels() const { return labels_; }

    // Registry: current site of each particle id (ids assigned left to right).
    Site position(ParticleId id) const { return positions_[id]; }
    std::size_t particle_count() const { return positions_.size(); }
    bool exited(ParticleId id) const { return exited_[id] != 0; }

    const std::vector<ParticleId>& tagged() const { return tagged_; }
    void tag(Site x);

    TasepLeft left() const { return left_; }
    TasepRight right() const { return right_; }
    void set_left_reservoir(double label);
    void set_right_open(bool open) { right_ = open ? TasepRight::Open : TasepRight::Closed; }
    bool tainted() const { return tainted_; }
    std::size_t exits() const { return exits_; }

    // Bond keyed by its left endpoint x (x = z_min-1 for the reservoir bond).
    bool bond_active(Site x) const;
    Move ring(Site x);

    friend bool operator==(const ExclusionConfig&, const ExclusionConfig&) = default;

private:
    void set_site(Site x, double label, ParticleId id);

    Site z_min_ = 0;
    std::vector<double> labels_;
    std::vector<ParticleId> ids_;
    std::vector<Site> positions_;
    std::vector<char> exited_;
    std::vector<ParticleId> tagged_;
    TasepLeft left_ = TasepLeft::Closed;
    TasepRight right_ = TasepRight::Closed;
    double reservoir_label_ = 1.0;
    bool tainted_ = false;
    std::size_t exits_ = 0;
};

}  // namespace tazrp

#pragma once

#include <cstdint>
#include <vector>

#include "tazrp/rng.hpp"

namespace tazrp {

// Classes are 1..n; class 1 has the highest priority.
struct TypedPoint {
    double time = 0.0;
    int cls = 1;
    friend bool operator==(const TypedPoint&, const TypedPoint&) = default;
};

struct TypedPointProcess {
    std::vector<TypedPoint> events;
    double start = 0.0;
    double horizon = 0.0;
    std::vector<double> lambda;

    // Inter-event times of the points whose class is in [lo, hi].
    std::vector<double> gaps(int lo, int hi) const;
};

struct BerGeomParams {
    double p = 0.0;
    double alpha = 0.0;
};

// (1-p) at 0 and p(1-alpha)alpha^(k-1) for k >= 1.
double ber_geom_pmf(BerGeomParams params, std::int64_t k);

struct ServeResult {
    TypedPointProcess departures;
    std::vector<double> unused;                          // service epochs with nobody present
    std::vector<std::pair<double, std::int64_t>> path;   // total queue length after each change
    std::vector<double> sojourn;                         // per departure, FIFO within class
    bool work_conserving = true;
};

// Rate-`rate` exponential server, strict priority across classes, FIFO within.
ServeResult priority_queue_serve(const TypedPointProcess& arrivals, double rate, std::uint64_t seed, double horizon);

// Streaming form of the fixed-point recursion: level 1 is Poisson(lambda_1);
// level k serves level k-1 at rate lambda_1+...+lambda_k and turns unused
// services into class-k points. Every call returns the next point in time.
class FixedPointSource {
public:
    FixedPointSource(std::vector<double> lambda, std::uint64_t seed);
    TypedPoint next();
    int classes() const { return static_cast<int>(lambda_.size()); }

private:
    struct Level {
        double rate = 0.0;
        double next_service = 0.0;
        std::vector<std::int64_t> queue;  // counts per class 1..k-1
        TypedPoint pending;               // buffered upstream point
        bool has_pending = false;
        Xoshiro256 rng;
    };
    TypedPoint pull(std::size_t level);

    std::vector<double> lambda_;
    std::vector<Level> levels_;
};

TypedPointProcess build_fixed_point(const std::vector<double>& lambda, double horizon, double burn_in,
                                    std::uint64_t seed);

// Flat table of queue-length vectors.
struct QueueSamples {
    int classes = 0;
    std::vector<std::int32_t> data;
    std::size_t size() const { return classes == 0 ? 0 : data.size() / static_cast<std::size_t>(classes); }
    // cls is 1-based.
    std::int32_t at(std::size_t row, int cls) const { return data[row * static_cast<std::size_t>(classes) + cls - 1]; }
};

struct StationaryPlan {
    double burn_in = 0.0;
    double spacing = 0.0;
};
// Burn-in 20/(s - sum lambda) and spacing 10/(s - sum lambda).
StationaryPlan default_plan(const std::vector<double>& lambda, double service_rate);

// Queue lengths of a rate-s server fed the fixed point, observed at
// burn_in + k * spacing.
QueueSamples sample_queue_lengths(const std::vector<double>& lambda, double service_rate, std::size_t n_samples,
                                  double spacing, std::uint64_t seed, double burn_in = -1.0);

struct TandemSamples {
    QueueSamples q0;
    QueueSamples q1;
};

// Queue 0 fed the fixed point, queue 1 fed queue 0's departures, both rate 1.
TandemSamples tandem_two_queues(const std::vector<double>& lambda, std::size_t n_samples, std::uint64_t seed);

}  // namespace tazrp

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tazrp/lattice.hpp"

namespace tazrp {

struct SpeedRunSpec {
    Site z_lo = 0;       // first tracked column
    Site z_hi = 0;       // last tracked column
    int depth = 40;
    double horizon = 300.0;
    double margin_sigmas = 5.0;  // right run-out of T + margin*sqrt(T) sites
};

// Finite-horizon speed estimates (X_{z,i}(T) - z) / T of the tracked part of
// the fully ordered configuration.
struct SpeedMatrix {
    Site z_lo = 0;
    Site z_hi = 0;
    int depth = 0;
    double horizon = 0.0;
    bool tainted = false;
    std::vector<double> u;
    std::vector<Site> x;  // terminal positions

    std::size_t slot(Site z, int i) const { return static_cast<std::size_t>(z - z_lo) * depth + i; }
    double at(Site z, int i) const { return u[slot(z, i)]; }
    Site position(Site z, int i) const { return x[slot(z, i)]; }
};

SpeedMatrix estimate_speeds(const SpeedRunSpec& spec, std::uint64_t seed);
// Replica r uses derive_seed(seed, r).
std::vector<SpeedMatrix> speed_ensemble(const SpeedRunSpec& spec, std::size_t runs, std::uint64_t seed);

struct ColumnCounts {
    double threshold = 0.0;
    std::vector<std::int64_t> counts;  // per run
    std::int64_t saturated = 0;        // runs where every tracked particle exceeded the threshold
};

// N_a = #{i : u_{z,i} > a} per run, skipping tainted runs.
std::vector<ColumnCounts> column_counts(const std::vector<SpeedMatrix>& ensemble, const std::vector<double>& thresholds,
                                        Site z = 0);

struct Cluster {
    double value = 0.0;  // mean estimate of the members
    int size = 0;
};

struct IntervalStats {
    double cluster_gap = 0.0;
    std::vector<std::int64_t> counts;  // clusters with value in (a, b], per run
    std::vector<Cluster> clusters;     // every cluster with value in (a, b]
    double mean_count() const;
};

// Groups consecutive column-z particles whose terminal positions differ by at
// most cluster_gap.
std::vector<Cluster> clusters_of(const SpeedMatrix& m, double cluster_gap, Site z = 0);
IntervalStats interval_statistics(const std::vector<SpeedMatrix>& ensemble, double a, double b, double cluster_gap,
                                  Site z = 0);
double default_cluster_gap(double horizon);

double joint_cdf_estimate(const std::vector<SpeedMatrix>& ensemble, int i, int j, double x1, double x2);
// Frequency of {u_{0,0} >= x1, u_{-1,j-1} >= x1 > u_{-1,j}, u_{-1,j+k-1} >= x2}:
// one first-class particle in column 0 and, in column -1, exactly j speeds
// above x1 followed by at least k in [x2, x1).
double two_column_event_estimate(const std::vector<SpeedMatrix>& ensemble, int j, int k, double x1, double x2);
// Mean over runs of sum_{i<depth} u_{0,i}.
double speed_sum(const std::vector<SpeedMatrix>& ensemble, Site z = 0);

// ---------------------------------------------------------------------------
// Overtaking.

struct Scenario {
    std::string name;  // tasep_PQ, zrp_case1, zrp_case2, zrp_case3
    int i = 1;         // column of the slower particle (case 3)
    int j = 0;         // stack index of the faster particle in column 0
    int k = 0;         // stack index of the slower particle
    int depth = 30;    // tracked depth for case 3
};
Scenario parse_scenario(const std::string& name);

struct OvertakeRun {
    double meet_time = -1.0;  // < 0 when no overtaking happened by the horizon
    bool tainted = false;
};

OvertakeRun overtake_once(const Scenario& sc, double horizon, std::uint64_t seed);

struct OvertakeCurve {
    std::vector<double> horizons;
    std::vector<double> frequency;  // over untainted runs
    std::int64_t runs = 0;
    std::int64_t tainted = 0;
    std::vector<double> meet_times;
};

// Each run goes to the largest horizon; the frequency at T counts runs whose
// overtaking time is <= T.
OvertakeCurve overtaking_curve(const Scenario& sc, const std::vector<double>& horizons, std::size_t runs,
                               std::uint64_t seed);
double overtaking_experiment(const Scenario& sc, double horizon, std::size_t runs, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reservoir run for the density profile.

struct HydroPoint {
    double u = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double theory = 0.0;
};

// Ensemble-mean occupancy at sites floor(u t) + [-half_width, half_width].
std::vector<HydroPoint> hydro_profile(double t, std::size_t replicas, const std::vector<double>& u_grid,
                                      int half_width, std::uint64_t seed);

}  // namespace tazrp

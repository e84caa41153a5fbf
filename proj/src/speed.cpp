#include "tazrp/speed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tazrp/harris.hpp"
#include "tazrp/laws.hpp"
#include "tazrp/parallel.hpp"
#include "tazrp/rng.hpp"

namespace tazrp {

namespace {

Site run_out(double horizon, double sigmas) {
    return static_cast<Site>(std::ceil(horizon + sigmas * std::sqrt(horizon))) + 1;
}

// eta* on columns z_lo..z_hi with `depth` tracked particles each, inside a
// window reaching z_max. Columns right of z_hi start empty: their particles
// are weaker than everything tracked and cannot influence it. For the same
// reason the last tracked column needs no tail.
ZrpConfig tracked_eta_star(Site z_lo, Site z_hi, int depth, Site z_max) {
    if (z_hi < z_lo || depth < 1 || z_max < z_hi) throw std::invalid_argument("invalid tracked window");
    ZrpConfig c(z_lo, z_max);
    const double total = static_cast<double>(z_hi - z_lo + 1) * depth;
    for (Site z = z_lo; z <= z_hi; ++z) {
        for (int i = 0; i < depth; ++i) {
            const double rank = static_cast<double>(z - z_lo) * depth + i;
            c.push_top(z, {1.0 - (rank + 1.0) / (total + 1.0)}, Origin{z, i, false});
        }
        c.set_infinite_tail(z, z < z_hi);
    }
    c.set_depth_cap(depth);
    c.set_left_reservoir(true);
    c.set_reservoir_labels(1.0, 1.0);
    return c;
}

}  // namespace

SpeedMatrix estimate_speeds(const SpeedRunSpec& spec, std::uint64_t seed) {
    if (spec.horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
    const Site z_max = spec.z_hi + run_out(spec.horizon, spec.margin_sigmas);
    ZrpConfig c = tracked_eta_star(spec.z_lo, spec.z_hi, spec.depth, z_max);
    const EventStream stream(seed, spec.horizon, spec.z_lo - 1, z_max);
    ZrpRunner run(c, stream);
    run.advance_to(spec.horizon);

    SpeedMatrix m;
    m.z_lo = spec.z_lo;
    m.z_hi = spec.z_hi;
    m.depth = spec.depth;
    m.horizon = spec.horizon;
    m.tainted = c.tainted();
    const std::size_t n = static_cast<std::size_t>(spec.z_hi - spec.z_lo + 1) * spec.depth;
    m.u.resize(n);
    m.x.resize(n);
    for (Site z = spec.z_lo; z <= spec.z_hi; ++z) {
        for (int i = 0; i < spec.depth; ++i) {
            const auto& e = c.registry()[c.find(z, i)];
            if (e.absorbed) m.tainted = true;
            m.x[m.slot(z, i)] = e.site;
            m.u[m.slot(z, i)] = static_cast<double>(e.site - z) / spec.horizon;
        }
    }
    return m;
}

std::vector<SpeedMatrix> speed_ensemble(const SpeedRunSpec& spec, std::size_t runs, std::uint64_t seed) {
    std::vector<SpeedMatrix> out(runs);
    parallel_for(runs, [&](std::size_t r) { out[r] = estimate_speeds(spec, derive_seed(seed, r)); });
    return out;
}

std::vector<ColumnCounts> column_counts(const std::vector<SpeedMatrix>& ensemble, const std::vector<double>& thresholds,
                                        Site z) {
    std::vector<ColumnCounts> out;
    for (double a : thresholds) {
        ColumnCounts cc;
        cc.threshold = a;
        for (const auto& m : ensemble) {
            if (m.tainted) continue;
            std::int64_t n = 0;
            for (int i = 0; i < m.depth; ++i)
                if (m.at(z, i) > a) ++n;
            if (n == m.depth) ++cc.saturated;
            cc.counts.push_back(n);
        }
        out.push_back(std::move(cc));
    }
    return out;
}

double IntervalStats::mean_count() const {
    if (counts.empty()) return 0.0;
    double s = 0.0;
    for (auto c : counts) s += static_cast<double>(c);
    return s / static_cast<double>(counts.size());
}

double default_cluster_gap(double horizon) { return 0.4 * std::sqrt(horizon); }

std::vector<Cluster> clusters_of(const SpeedMatrix& m, double cluster_gap, Site z) {
    std::vector<Cluster> out;
    int start = 0;
    double sum = m.at(z, 0);
    for (int i = 1; i <= m.depth; ++i) {
        const bool split = i == m.depth || std::abs(static_cast<double>(m.position(z, i) - m.position(z, i - 1))) >
                                               cluster_gap;
        if (split) {
            out.push_back(Cluster{sum / (i - start), i - start});
            if (i == m.depth) break;
            start = i;
            sum = 0.0;
        }
        sum += m.at(z, i);
    }
    return out;
}

IntervalStats interval_statistics(const std::vector<SpeedMatrix>& ensemble, double a, double b, double cluster_gap,
                                  Site z) {
    if (!(a > 0.0 && a < b && b <= 1.0)) throw std::invalid_argument("degenerate interval");
    IntervalStats st;
    st.cluster_gap = cluster_gap;
    for (const auto& m : ensemble) {
        if (m.tainted) continue;
        std::int64_t n = 0;
        for (const auto& c : clusters_of(m, cluster_gap, z)) {
            if (c.value > a && c.value <= b) {
                ++n;
                st.clusters.push_back(c);
            }
        }
        st.counts.push_back(n);
    }
    return st;
}

double joint_cdf_estimate(const std::vector<SpeedMatrix>& ensemble, int i, int j, double x1, double x2) {
    if (!(i >= 0 && i < j)) throw std::invalid_argument("joint_cdf_estimate: need 0 <= i < j");
    if (x1 < x2) throw std::invalid_argument("joint_cdf_estimate: need x1 >= x2");
    std::int64_t hit = 0, n = 0;
    for (const auto& m : ensemble) {
        if (m.tainted) continue;
        if (j >= m.depth) throw std::invalid_argument("joint_cdf_estimate: j beyond tracked depth");
        ++n;
        if (m.at(0, i) <= x1 && m.at(0, j) <= x2) ++hit;
    }
    return n == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(n);
}

double two_column_event_estimate(const std::vector<SpeedMatrix>& ensemble, int j, int k, double x1, double x2) {
    if (!(j >= 1 && k >= 1)) throw std::invalid_argument("two_column_event_estimate: j, k >= 1");
    if (x1 < x2) throw std::invalid_argument("two_column_event_estimate: need x1 >= x2");
    std::int64_t hit = 0, n = 0;
    for (const auto& m : ensemble) {
        if (m.tainted) continue;
        if (m.z_lo > -1 || m.z_hi < 0 || j + k > m.depth) throw std::invalid_argument("ensemble lacks columns -1, 0");
        ++n;
        const bool ok = m.at(0, 0) >= x1 && m.at(-1, j - 1) >= x1 && m.at(-1, j) < x1 && m.at(-1, j + k - 1) >= x2;
        if (ok) ++hit;
    }
    return n == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(n);
}

double speed_sum(const std::vector<SpeedMatrix>& ensemble, Site z) {
    double s = 0.0;
    std::int64_t n = 0;
    for (const auto& m : ensemble) {
        if (m.tainted) continue;
        ++n;
        for (int i = 0; i < m.depth; ++i) s += m.at(z, i);
    }
    return n == 0 ? 0.0 : s / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

Scenario parse_scenario(const std::string& name) {
    Scenario sc;
    sc.name = name;
    if (name == "tasep_PQ" || name == "zrp_case1") return sc;
    if (name == "zrp_case2") {
        sc.j = 1;
        sc.k = 1;
        return sc;
    }
    if (name == "zrp_case3") {
        sc.i = 1;
        sc.j = 0;
        sc.k = 0;
        return sc;
    }
    throw std::invalid_argument("unknown scenario: " + name);
}

namespace {

OvertakeRun overtake_tasep(double horizon, std::uint64_t seed) {
    // First-class particles fill the left, P = 2 at 0, Q = 3 at 1, holes to
    // the right. The window is wide enough that its ends are not reached.
    const Site reach = run_out(horizon, 5.0);
    std::vector<double> labels;
    for (Site x = -reach; x <= reach; ++x)
        labels.push_back(x < 0 ? 1.0 : x == 0 ? 2.0 : x == 1 ? 3.0 : ExclusionConfig::kHole);
    ExclusionConfig c(-reach, labels);
    c.set_left_reservoir(1.0);
    c.set_right_open(true);
    const ParticleId p = c.id_at(0);
    const ParticleId q = c.id_at(1);
    const EventStream stream(seed, horizon, -reach - 1, reach);
    TasepRunner run(c, stream);
    OvertakeRun out;
    run.advance_to(horizon, [&](double t, const Move& m) {
        if (m.id == p && c.id_at(m.from) == q) {
            out.meet_time = t;
            return false;
        }
        return true;
    });
    out.tainted = c.tainted() && out.meet_time < 0.0;
    return out;
}

OvertakeRun overtake_zrp(const Scenario& sc, double horizon, std::uint64_t seed) {
    const Site z_max = std::max<Site>(sc.i, 1) + run_out(horizon, 5.0);
    ZrpConfig c;
    ParticleId p = kNoParticle, q = kNoParticle;
    if (sc.name == "zrp_case3") {
        if (sc.i < 1) throw std::invalid_argument("zrp_case3 needs i >= 1");
        const int depth = std::max({sc.j, sc.k, 0}) + sc.depth;
        c = tracked_eta_star(0, sc.i, depth, z_max);
        p = c.find(0, sc.j);
        q = c.find(sc.i, sc.k);
    } else {
        // Classes: first class 3, P 2, Q 1; empty sites are holes.
        const int j = sc.name == "zrp_case2" ? sc.j : 0;
        const int k = sc.name == "zrp_case2" ? sc.k : 0;
        c = ZrpConfig(0, z_max);
        for (int n = 0; n < j; ++n) c.push_top(0, {3.0}, Origin{0, n, false});
        p = c.push_top(0, {2.0}, Origin{0, j, false});
        for (int n = 0; n < k; ++n) c.push_top(1, {3.0}, Origin{1, n, false});
        q = c.push_top(1, {1.0}, Origin{1, k, false});
        c.set_left_reservoir(true);
        c.set_reservoir_labels(3.0, 0.0);
    }
    const EventStream stream(seed, horizon, -1, z_max);
    ZrpRunner run(c, stream);
    OvertakeRun out;
    run.advance_to(horizon, [&](double t, const Move& m) {
        if ((m.id == p || m.id == q) && c.registry()[p].site == c.registry()[q].site) {
            out.meet_time = t;
            return false;
        }
        return true;
    });
    out.tainted = (c.tainted() || c.registry()[q].absorbed) && out.meet_time < 0.0;
    return out;
}

}  // namespace

OvertakeRun overtake_once(const Scenario& sc, double horizon, std::uint64_t seed) {
    if (horizon <= 0.0) return {};
    if (sc.name == "tasep_PQ") return overtake_tasep(horizon, seed);
    if (sc.name == "zrp_case1" || sc.name == "zrp_case2" || sc.name == "zrp_case3") return overtake_zrp(sc, horizon, seed);
    throw std::invalid_argument("unknown scenario: " + sc.name);
}

OvertakeCurve overtaking_curve(const Scenario& sc, const std::vector<double>& horizons, std::size_t runs,
                               std::uint64_t seed) {
    if (horizons.empty()) throw std::invalid_argument("no horizons");
    OvertakeCurve curve;
    curve.horizons = horizons;
    std::sort(curve.horizons.begin(), curve.horizons.end());
    const double t_max = curve.horizons.back();
    std::vector<OvertakeRun> res(runs);
    parallel_for(runs, [&](std::size_t r) { res[r] = overtake_once(sc, t_max, derive_seed(seed, r)); });
    curve.runs = static_cast<std::int64_t>(runs);
    std::vector<std::int64_t> hits(curve.horizons.size(), 0);
    for (const auto& r : res) {
        if (r.tainted) {
            ++curve.tainted;
            continue;
        }
        curve.meet_times.push_back(r.meet_time);
        if (r.meet_time < 0.0) continue;
        for (std::size_t h = 0; h < curve.horizons.size(); ++h)
            if (r.meet_time <= curve.horizons[h]) ++hits[h];
    }
    const double n = static_cast<double>(curve.runs - curve.tainted);
    for (auto h : hits) curve.frequency.push_back(n > 0 ? static_cast<double>(h) / n : 0.0);
    return curve;
}

double overtaking_experiment(const Scenario& sc, double horizon, std::size_t runs, std::uint64_t seed) {
    if (horizon <= 0.0) return 0.0;
    return overtaking_curve(sc, {horizon}, runs, seed).frequency.front();
}

// ---------------------------------------------------------------------------

std::vector<HydroPoint> hydro_profile(double t, std::size_t replicas, const std::vector<double>& u_grid,
                                      int half_width, std::uint64_t seed) {
    if (t <= 0.0 || replicas < 2 || half_width < 0) throw std::invalid_argument("invalid hydro parameters");
    const Site z_max = run_out(t, 5.0);
    // Per replica: mean occupancy over each window.
    std::vector<std::vector<double>> per(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        ZrpConfig c(0, z_max);
        c.set_left_reservoir(true);
        c.set_reservoir_labels(1.0, 0.0);
        const EventStream stream(derive_seed(seed, r), t, -1, z_max);
        ZrpRunner run(c, stream);
        run.advance_to(t);
        std::vector<double> v;
        for (double u : u_grid) {
            const Site centre = static_cast<Site>(std::floor(u * t));
            double s = 0.0;
            int n = 0;
            for (Site x = centre - half_width; x <= centre + half_width; ++x) {
                if (x < 0 || x > z_max) continue;
                s += static_cast<double>(c.height(x));
                ++n;
            }
            v.push_back(n ? s / n : 0.0);
        }
        per[r] = std::move(v);
    });

    std::vector<HydroPoint> out;
    for (std::size_t g = 0; g < u_grid.size(); ++g) {
        HydroPoint pt;
        pt.u = u_grid[g];
        double s = 0.0, s2 = 0.0;
        for (const auto& v : per) {
            s += v[g];
            s2 += v[g] * v[g];
        }
        const double n = static_cast<double>(replicas);
        pt.estimate = s / n;
        pt.std_error = std::sqrt(std::max(0.0, (s2 / n - pt.estimate * pt.estimate) / (n - 1.0)));
        // Theory averaged over the same sites, so curvature does not bias the comparison.
        const Site centre = static_cast<Site>(std::floor(pt.u * t));
        double th = 0.0;
        int m = 0;
        for (Site x = centre - half_width; x <= centre + half_width; ++x) {
            if (x <= 0) continue;
            const double v = static_cast<double>(x) / t;
            th += laws::hydrodynamic_profile(v);
            ++m;
        }
        pt.theory = m ? th / m : 0.0;
        out.push_back(pt);
    }
    return out;
}

}  // namespace tazrp

#include "tazrp/queueing.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tazrp {

namespace {

void check_lambda(const std::vector<double>& lambda, double rate) {
    if (lambda.empty()) throw std::invalid_argument("need at least one class");
    double s = 0.0;
    for (double l : lambda) {
        if (!(l > 0.0)) throw std::invalid_argument("intensities must be positive");
        s += l;
    }
    if (!(s < rate)) throw std::invalid_argument("intensity constraint violated: sum of lambda must be below the service rate");
}

// Index of the highest-priority nonempty class, or -1.
int top_class(const std::vector<std::int64_t>& q) {
    for (std::size_t c = 0; c < q.size(); ++c)
        if (q[c] > 0) return static_cast<int>(c);
    return -1;
}

}  // namespace

std::vector<double> TypedPointProcess::gaps(int lo, int hi) const {
    std::vector<double> out;
    double last = std::numeric_limits<double>::quiet_NaN();
    for (const auto& e : events) {
        if (e.cls < lo || e.cls > hi) continue;
        if (!std::isnan(last)) out.push_back(e.time - last);
        last = e.time;
    }
    return out;
}

double ber_geom_pmf(BerGeomParams params, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("negative k");
    if (params.p < 0.0 || params.p > 1.0 || params.alpha < 0.0 || params.alpha >= 1.0)
        throw std::invalid_argument("invalid Bernoulli-geometric parameters");
    if (k == 0) return 1.0 - params.p;
    return params.p * (1.0 - params.alpha) * std::pow(params.alpha, static_cast<double>(k - 1));
}

ServeResult priority_queue_serve(const TypedPointProcess& arrivals, double rate, std::uint64_t seed, double horizon) {
    if (!(rate > 0.0)) throw std::invalid_argument("service rate must be positive");
    int n = 0;
    for (const auto& e : arrivals.events) n = std::max(n, e.cls);
    n = std::max<int>(n, static_cast<int>(arrivals.lambda.size()));
    std::vector<std::deque<double>> waiting(static_cast<std::size_t>(std::max(n, 1)));
    std::int64_t total = 0;

    ServeResult out;
    out.departures.start = arrivals.start;
    out.departures.horizon = horizon;
    out.departures.lambda = arrivals.lambda;
    Xoshiro256 rng(seed);
    double s = arrivals.start + rng.exponential(rate);
    std::size_t a = 0;
    for (;;) {
        const double ta = a < arrivals.events.size() ? arrivals.events[a].time : std::numeric_limits<double>::infinity();
        if (std::min(ta, s) > horizon) break;
        if (ta < s) {
            waiting[static_cast<std::size_t>(arrivals.events[a].cls - 1)].push_back(ta);
            ++total;
            out.path.emplace_back(ta, total);
            ++a;
            continue;
        }
        int c = -1;
        for (std::size_t k = 0; k < waiting.size(); ++k)
            if (!waiting[k].empty()) {
                c = static_cast<int>(k);
                break;
            }
        if (c < 0) {
            if (total != 0) out.work_conserving = false;
            out.unused.push_back(s);
        } else {
            auto& w = waiting[static_cast<std::size_t>(c)];
            out.sojourn.push_back(s - w.front());
            w.pop_front();
            --total;
            out.departures.events.push_back(TypedPoint{s, c + 1});
            out.path.emplace_back(s, total);
        }
        s += rng.exponential(rate);
    }
    return out;
}

FixedPointSource::FixedPointSource(std::vector<double> lambda, std::uint64_t seed) : lambda_(std::move(lambda)) {
    // Every level is stable for any positive intensities; the consuming queue
    // checks its own rate.
    check_lambda(lambda_, std::numeric_limits<double>::infinity());
    double cum = 0.0;
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
        cum += lambda_[k];
        Level lv;
        lv.rate = cum;
        lv.queue.assign(k, 0);
        lv.rng.reseed(derive_seed(seed, k));
        lv.next_service = lv.rng.exponential(lv.rate);
        levels_.push_back(std::move(lv));
    }
}

TypedPoint FixedPointSource::next() { return pull(levels_.size() - 1); }

TypedPoint FixedPointSource::pull(std::size_t k) {
    Level& lv = levels_[k];
    if (k == 0) {
        // Level 1 is plain Poisson: every service epoch is a class-1 point.
        const TypedPoint p{lv.next_service, 1};
        lv.next_service += lv.rng.exponential(lv.rate);
        return p;
    }
    for (;;) {
        if (!lv.has_pending) {
            lv.pending = pull(k - 1);
            lv.has_pending = true;
        }
        if (lv.pending.time < lv.next_service) {
            ++lv.queue[static_cast<std::size_t>(lv.pending.cls - 1)];
            lv.has_pending = false;
            continue;
        }
        const double t = lv.next_service;
        lv.next_service += lv.rng.exponential(lv.rate);
        const int c = top_class(lv.queue);
        if (c >= 0) {
            --lv.queue[static_cast<std::size_t>(c)];
            return TypedPoint{t, c + 1};
        }
        return TypedPoint{t, static_cast<int>(k) + 1};
    }
}

TypedPointProcess build_fixed_point(const std::vector<double>& lambda, double horizon, double burn_in,
                                    std::uint64_t seed) {
    check_lambda(lambda, 1.0);
    FixedPointSource src(lambda, seed);
    TypedPointProcess out;
    out.start = burn_in;
    out.horizon = horizon;
    out.lambda = lambda;
    for (TypedPoint p = src.next(); p.time <= horizon; p = src.next())
        if (p.time >= burn_in) out.events.push_back(p);
    return out;
}

StationaryPlan default_plan(const std::vector<double>& lambda, double service_rate) {
    const double slack = service_rate - std::accumulate(lambda.begin(), lambda.end(), 0.0);
    return {20.0 / slack, 10.0 / slack};
}

QueueSamples sample_queue_lengths(const std::vector<double>& lambda, double service_rate, std::size_t n_samples,
                                  double spacing, std::uint64_t seed, double burn_in) {
    check_lambda(lambda, service_rate);
    if (burn_in < 0.0) burn_in = default_plan(lambda, service_rate).burn_in;
    const int n = static_cast<int>(lambda.size());
    QueueSamples out;
    out.classes = n;
    out.data.reserve(n_samples * static_cast<std::size_t>(n));

    FixedPointSource src(lambda, derive_seed(seed, 1));
    Xoshiro256 rng(derive_seed(seed, 2));
    std::vector<std::int64_t> q(static_cast<std::size_t>(n), 0);
    TypedPoint a = src.next();
    double s = rng.exponential(service_rate);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double tau = burn_in + static_cast<double>(k) * spacing;
        for (;;) {
            if (a.time <= s && a.time <= tau) {
                ++q[static_cast<std::size_t>(a.cls - 1)];
                a = src.next();
            } else if (s < a.time && s <= tau) {
                const int c = top_class(q);
                if (c >= 0) --q[static_cast<std::size_t>(c)];
                s += rng.exponential(service_rate);
            } else {
                break;
            }
        }
        for (auto v : q) out.data.push_back(static_cast<std::int32_t>(v));
    }
    return out;
}

TandemSamples tandem_two_queues(const std::vector<double>& lambda, std::size_t n_samples, std::uint64_t seed) {
    check_lambda(lambda, 1.0);
    const auto plan = default_plan(lambda, 1.0);
    const int n = static_cast<int>(lambda.size());
    TandemSamples out;
    out.q0.classes = n;
    out.q1.classes = n;
    out.q0.data.reserve(n_samples * static_cast<std::size_t>(n));
    out.q1.data.reserve(n_samples * static_cast<std::size_t>(n));

    FixedPointSource src(lambda, derive_seed(seed, 1));
    Xoshiro256 r0(derive_seed(seed, 2));
    Xoshiro256 r1(derive_seed(seed, 3));
    std::vector<std::int64_t> q0(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> q1(static_cast<std::size_t>(n), 0);
    TypedPoint a = src.next();
    double s0 = r0.exponential();
    double s1 = r1.exponential();
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double tau = plan.burn_in + static_cast<double>(k) * plan.spacing;
        for (;;) {
            const double t = std::min({a.time, s0, s1});
            if (t > tau) break;
            if (t == a.time) {
                ++q0[static_cast<std::size_t>(a.cls - 1)];
                a = src.next();
            } else if (t == s0) {
                const int c = top_class(q0);
                if (c >= 0) {
                    --q0[static_cast<std::size_t>(c)];
                    ++q1[static_cast<std::size_t>(c)];
                }
                s0 += r0.exponential();
            } else {
                const int c = top_class(q1);
                if (c >= 0) --q1[static_cast<std::size_t>(c)];
                s1 += r1.exponential();
            }
        }
        for (auto v : q0) out.q0.data.push_back(static_cast<std::int32_t>(v));
        for (auto v : q1) out.q1.data.push_back(static_cast<std::int32_t>(v));
    }
    return out;
}

}  // namespace tazrp

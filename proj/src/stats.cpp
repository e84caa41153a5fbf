#include "tazrp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace tazrp::stats {

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.2) return 1.0;  // series converges slowly; Q is 1 to double precision here
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double F = cdf(samples[k]);
        d = std::max({d, (k + 1) / n - F, F - k / n});
    }
    return d;
}

namespace {
double stephens_p(double d, double n_eff) {
    const double r = std::sqrt(n_eff);
    return kolmogorov_q((r + 0.12 + 0.11 / r) * d);
}
}  // namespace

TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, double alpha) {
    if (samples.size() < 100) throw std::invalid_argument("ks_test: insufficient data (need >= 100 samples)");
    TestResult r;
    const double n = static_cast<double>(samples.size());
    r.statistic = ks_statistic(std::move(samples), cdf);
    r.p_value = stephens_p(r.statistic, n);
    r.pass = r.p_value >= alpha;
    return r;
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
    if (a.size() < 100 || b.size() < 100) throw std::invalid_argument("ks_two_sample: insufficient data");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    TestResult r;
    r.statistic = d;
    r.p_value = stephens_p(d, na * nb / (na + nb));
    r.pass = r.p_value >= alpha;
    return r;
}

TestResult chi_square(const std::vector<std::int64_t>& counts, const std::function<double(std::int64_t)>& pmf,
                      double alpha, double min_expected) {
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    if (n <= 0.0) throw std::invalid_argument("chi_square: no observations");

    std::vector<double> obs;
    std::vector<double> expv;
    double o = 0.0, e = 0.0, used = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double p = pmf(static_cast<std::int64_t>(k));
        o += static_cast<double>(counts[k]);
        e += n * p;
        used += p;
        if (e >= min_expected) {
            obs.push_back(o);
            expv.push_back(e);
            o = e = 0.0;
        }
    }
    // Remaining tail mass (beyond the observed range) joins the last cell.
    const double tail = std::max(0.0, 1.0 - used) * n;
    e += tail;
    if (e > 0.0 || o > 0.0) {
        if (!expv.empty() && e < min_expected) {
            obs.back() += o;
            expv.back() += e;
        } else {
            obs.push_back(o);
            expv.push_back(e);
        }
    }
    if (obs.size() < 2) throw std::invalid_argument("chi_square: insufficient data after pooling");
    TestResult r;
    for (std::size_t k = 0; k < obs.size(); ++k) r.statistic += (obs[k] - expv[k]) * (obs[k] - expv[k]) / expv[k];
    r.dof = static_cast<int>(obs.size()) - 1;
    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
    r.pass = r.p_value >= alpha;
    return r;
}

double tv_distance(const std::vector<double>& empirical, const std::function<double(std::int64_t)>& pmf) {
    double sum = 0.0, used = 0.0;
    for (std::size_t k = 0; k < empirical.size(); ++k) {
        const double q = pmf(static_cast<std::int64_t>(k));
        used += q;
        sum += std::abs(empirical[k] - q);
    }
    sum += std::max(0.0, 1.0 - used);
    return 0.5 * sum;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t n = std::max(p.size(), q.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = k < p.size() ? p[k] : 0.0;
        const double b = k < q.size() ? q[k] : 0.0;
        sum += std::abs(a - b);
    }
    return 0.5 * sum;
}

std::vector<std::int64_t> histogram(const std::vector<std::int64_t>& values) {
    std::vector<std::int64_t> h;
    for (auto v : values) {
        if (v < 0) throw std::invalid_argument("histogram: negative value");
        if (static_cast<std::size_t>(v) >= h.size()) h.resize(static_cast<std::size_t>(v) + 1, 0);
        ++h[static_cast<std::size_t>(v)];
    }
    return h;
}

std::vector<double> normalize(const std::vector<std::int64_t>& counts) {
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    std::vector<double> p;
    for (auto c : counts) p.push_back(n > 0.0 ? static_cast<double>(c) / n : 0.0);
    return p;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("correlation: size mismatch");
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace tazrp::stats

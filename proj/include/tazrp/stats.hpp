#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace tazrp::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool pass = true;
    int dof = 0;
};

// Kolmogorov limiting survival function Q(l) = 2 sum (-1)^(k-1) exp(-2 k^2 l^2).
double kolmogorov_q(double lambda);

// sup |F_n - F|; samples are sorted internally.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Requires at least 100 samples. The p-value uses Stephens' small-sample
// correction of the Kolmogorov limit.
TestResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf, double alpha = 0.01);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = 0.01);

// counts[k] is the number of observations equal to k. Adjacent cells are
// pooled until every expected count is at least min_expected; the tail beyond
// the last count is folded into the last cell.
TestResult chi_square(const std::vector<std::int64_t>& counts, const std::function<double(std::int64_t)>& pmf,
                      double alpha = 0.01, double min_expected = 5.0);

// Half the L1 distance; mass of pmf beyond the empirical support counts fully.
double tv_distance(const std::vector<double>& empirical, const std::function<double(std::int64_t)>& pmf);
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

std::vector<std::int64_t> histogram(const std::vector<std::int64_t>& values);
std::vector<double> normalize(const std::vector<std::int64_t>& counts);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace tazrp::stats

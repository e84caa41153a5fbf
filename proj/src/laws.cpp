#include "tazrp/laws.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tazrp::laws {

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw std::domain_error(what);
}
}  // namespace

double f(double x) { return 1.0 - std::sqrt(x); }

double cdf_speed_single(double v, int j) {
    require(v >= 0.0 && v <= 1.0 && j >= 0, "cdf_speed_single: v in [0,1], j >= 0");
    return 1.0 - std::pow(f(v), j + 1);
}

double cdf_joint(double x1, double x2, int i, int j) {
    require(i >= 0 && i < j, "cdf_joint: need 0 <= i < j");
    require(x1 >= x2 && x2 >= 0.0 && x1 <= 1.0, "cdf_joint: need 1 >= x1 >= x2 >= 0");
    const double f1 = f(x1);
    const double f2 = f(x2);
    if (f2 == 0.0) return 1.0 - std::pow(f1, i + 1);
    return 1.0 - std::pow(f1, i + 1) - std::pow(f2, j + 1) * (1.0 - std::pow(f1 / f2, i + 1));
}

double density_diagonal(double x, int i, int j) {
    require(x > 0.0 && x < 1.0, "density_diagonal: x in (0,1)");
    require(i >= 0 && i < j, "density_diagonal: need 0 <= i < j");
    return (i + 1) * std::pow(f(x), j) / (2.0 * std::sqrt(x));
}

double atom_mass_quadrature(int i, int j) {
    // dx = 2s ds cancels the 1/(2 sqrt x) singularity.
    auto g = [i, j](double s) {
        if (s <= 0.0) return (i + 1) * 1.0;
        return density_diagonal(s * s, i, j) * 2.0 * s;
    };
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 20, 1e-12, &err);
}

double atom_mass_queue_identity(int i, int j) {
    // Cells are uniform in f-space; within a cell (x2, x1], both speeds lie in
    // the cell exactly when Q1 <= i and Q1 + Q2 >= j+1 for the projection at
    // thresholds (x1, x2).
    auto riemann = [i, j](int cells) {
        double sum = 0.0;
        for (int m = 0; m < cells; ++m) {
            const double f1 = static_cast<double>(m) / cells;      // f(x1), x1 upper
            const double f2 = static_cast<double>(m + 1) / cells;  // f(x2)
            sum += queue_identity(f1, f2 - f1, i, j);
        }
        return sum;
    };
    const double a = riemann(1 << 14);
    const double b = riemann(1 << 15);
    return 2.0 * b - a;
}

double queue_identity(double l1, double l2, int i, int j) {
    require(l1 >= 0.0 && l2 > 0.0 && l1 + l2 <= 1.0, "queue_identity: invalid intensities");
    const double s = l1 + l2;
    return std::pow(s, j + 1) * (1.0 - std::pow(l1 / s, i + 1));
}

double prob_two_column(double x1, double x2, int j, int k, TwoColumnVariant variant) {
    require(x1 >= x2 && x2 >= 0.0 && x1 <= 1.0, "prob_two_column: need 1 >= x1 >= x2 >= 0");
    require(j >= 1 && k >= 1, "prob_two_column: j, k >= 1");
    const double f1 = f(x1);
    const double f2 = f(x2);
    const double d = f2 - f1;
    switch (variant) {
        case TwoColumnVariant::Stated:
            return d * std::pow(f1, j) * std::pow(f2, k);
        case TwoColumnVariant::Proof:
            return d * std::pow(f1, j) * std::pow(f2, k - 1);
        case TwoColumnVariant::Chain:
            return d * std::pow(f1, j + 1) * std::pow(f2, k - 1);
        case TwoColumnVariant::Lemma:
            return d * std::pow(f1, j + 1) * std::pow(f2, k);
    }
    return 0.0;
}

const char* variant_name(TwoColumnVariant v) {
    switch (v) {
        case TwoColumnVariant::Stated: return "stated";
        case TwoColumnVariant::Proof: return "proof";
        case TwoColumnVariant::Chain: return "chain";
        case TwoColumnVariant::Lemma: return "lemma";
    }
    return "?";
}

double tandem_lemma(double l1, double l2, int a, int b, bool minus_one) {
    require(l1 > 0.0 && l2 > 0.0 && l1 + l2 < 1.0 && a >= 0 && b >= 1, "tandem_lemma: invalid arguments");
    return l2 * std::pow(l1, a + 1) * std::pow(l1 + l2, minus_one ? b - 1 : b);
}

double law_flux_speed(double u) {
    require(u >= -1.0 && u <= 1.0, "law_flux_speed: u in [-1,1]");
    const double h = (1.0 + u) / 2.0;
    return h * h;
}

double hydrodynamic_profile(double u) {
    require(u > 0.0, "hydrodynamic_profile: u > 0");
    if (u >= 1.0) return 0.0;
    const double r = std::sqrt(u);
    return (1.0 - r) / r;
}

double geom0_pmf(double q, std::int64_t k) {
    require(q >= 0.0 && q < 1.0 && k >= 0, "geom0_pmf: q in [0,1), k >= 0");
    return (1.0 - q) * std::pow(q, static_cast<double>(k));
}

double occupancy_pmf(double a, std::int64_t k) {
    require(a > 0.0 && a <= 1.0, "occupancy_pmf: a in (0,1]");
    return geom0_pmf(f(a), k);
}

double mark_pmf(double x, std::int64_t k) {
    require(x > 0.0 && x <= 1.0 && k >= 1, "mark_pmf: x in (0,1], k >= 1");
    const double r = std::sqrt(x);
    return r * std::pow(1.0 - r, static_cast<double>(k - 1));
}

double cluster_intensity_mass(double a, double b) {
    require(a > 0.0 && a < b && b <= 1.0, "cluster_intensity_mass: 0 < a < b <= 1");
    return 0.5 * std::log(b / a);
}

double mean_speed(int i) {
    require(i >= 0, "mean_speed: i >= 0");
    return 2.0 / ((i + 2.0) * (i + 3.0));
}

double sample_speed_single(int j, Xoshiro256& rng) {
    require(j >= 0, "sample_speed_single: j >= 0");
    const double r = 1.0 - std::pow(1.0 - rng.uniform(), 1.0 / (j + 1.0));
    return r * r;
}

double sample_flux_speed(Xoshiro256& rng) { return law_flux_speed(2.0 * rng.uniform() - 1.0); }

std::int64_t sample_geom0(double q, Xoshiro256& rng) {
    require(q >= 0.0 && q < 1.0, "sample_geom0: q in [0,1)");
    return q == 0.0 ? 0 : rng.geometric0(q);
}

std::int64_t sample_ber_geom(double p, double alpha, Xoshiro256& rng) {
    require(p >= 0.0 && p <= 1.0 && alpha >= 0.0 && alpha < 1.0, "sample_ber_geom: invalid parameters");
    if (!rng.bernoulli(p)) return 0;
    return 1 + sample_geom0(alpha, rng);
}

const std::map<std::string, LawEntry>& catalog() {
    static const std::map<std::string, LawEntry> c = [] {
        std::map<std::string, LawEntry> m;
        auto ip = [](const std::vector<double>& p, std::size_t k, double dflt) {
            return k < p.size() ? p[k] : dflt;
        };
        m["speed_single"] = {"P(U_{0,j} <= x); params: j",
                             [ip](double x, const std::vector<double>& p) {
                                 return cdf_speed_single(x, static_cast<int>(ip(p, 0, 0)));
                             }};
        m["joint_cdf"] = {"P(U_{0,i} <= x, U_{0,j} <= x2); params: x2, i, j",
                          [ip](double x, const std::vector<double>& p) {
                              return cdf_joint(x, ip(p, 0, 0.0), static_cast<int>(ip(p, 1, 0)),
                                               static_cast<int>(ip(p, 2, 1)));
                          }};
        m["diagonal_density"] = {"density of the common value of U_{0,i} = U_{0,j}; params: i, j",
                                 [ip](double x, const std::vector<double>& p) {
                                     return density_diagonal(x, static_cast<int>(ip(p, 0, 0)),
                                                             static_cast<int>(ip(p, 1, 1)));
                                 }};
        m["two_column_stated"] = {"two-column probability, stated form; params: x2, j, k",
                                  [ip](double x, const std::vector<double>& p) {
                                      return prob_two_column(x, ip(p, 0, 0.0), static_cast<int>(ip(p, 1, 1)),
                                                             static_cast<int>(ip(p, 2, 1)), TwoColumnVariant::Stated);
                                  }};
        m["two_column_proof"] = {"two-column probability, k-1 form; params: x2, j, k",
                                 [ip](double x, const std::vector<double>& p) {
                                     return prob_two_column(x, ip(p, 0, 0.0), static_cast<int>(ip(p, 1, 1)),
                                                            static_cast<int>(ip(p, 2, 1)), TwoColumnVariant::Proof);
                                 }};
        m["occupancy"] = {"P(N_a = k) at a = x; params: k",
                          [ip](double x, const std::vector<double>& p) {
                              return occupancy_pmf(x, static_cast<std::int64_t>(ip(p, 0, 0)));
                          }};
        m["ber_geom"] = {"Bernoulli-geometric pmf at k = x; params: p, alpha",
                         [ip](double x, const std::vector<double>& p) {
                             const double pp = ip(p, 0, 0.0);
                             const double a = ip(p, 1, 0.0);
                             const auto k = static_cast<std::int64_t>(x);
                             return k == 0 ? 1.0 - pp : pp * (1.0 - a) * std::pow(a, static_cast<double>(k - 1));
                         }};
        m["flux_speed"] = {"((1+u)/2)^2",
                           [](double x, const std::vector<double>&) { return law_flux_speed(x); }};
        m["tasep_uniform"] = {"CDF of U[-1,1]",
                              [](double x, const std::vector<double>&) {
                                  return x <= -1.0 ? 0.0 : (x >= 1.0 ? 1.0 : (x + 1.0) / 2.0);
                              }};
        m["hydro"] = {"(1 - sqrt u) / sqrt u on (0,1)",
                      [](double x, const std::vector<double>&) { return hydrodynamic_profile(x); }};
        m["mark"] = {"convoy size pmf at speed x; params: k",
                     [ip](double x, const std::vector<double>& p) {
                         return mark_pmf(x, static_cast<std::int64_t>(ip(p, 0, 1)));
                     }};
        return m;
    }();
    return c;
}

}  // namespace tazrp::laws

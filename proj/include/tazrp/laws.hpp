#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tazrp/rng.hpp"

namespace tazrp::laws {

// f(x) = 1 - sqrt(x): the mass of column speeds above x.
double f(double x);

// P(U_{0,j} <= v) = 1 - (1 - sqrt v)^{j+1}.
double cdf_speed_single(double v, int j);

// P(U_{0,i} <= x1, U_{0,j} <= x2) for i < j and x1 >= x2.
double cdf_joint(double x1, double x2, int i, int j);

// Density of the common value on {U_{0,i} = U_{0,j}}: (i+1) f(x)^j / (2 sqrt x).
double density_diagonal(double x, int i, int j);

// Integral of density_diagonal over (0,1) by adaptive Gauss-Kronrod after x = s^2.
double atom_mass_quadrature(int i, int j);
// Same atom through the column queue identity: sum over a partition of [0,1]
// of P(both speeds fall in one cell), refined and Richardson-extrapolated.
double atom_mass_queue_identity(int i, int j);

// P(Q1 <= i, Q1 + Q2 >= j+1) = (l1+l2)^{j+1} (1 - (l1/(l1+l2))^{i+1}).
double queue_identity(double l1, double l2, int i, int j);

enum class TwoColumnVariant {
    Stated,  // (f2 - f1) f1^j f2^k
    Proof,   // (f2 - f1) f1^j f2^(k-1)
    Chain,   // (f2 - f1) f1^(j+1) f2^(k-1): tandem lemma with b-1 evaluated at a = j
    Lemma,   // (f2 - f1) f1^(j+1) f2^k: tandem lemma as printed, at a = j, b = k
};
double prob_two_column(double x1, double x2, int j, int k, TwoColumnVariant variant);
const char* variant_name(TwoColumnVariant v);

// Tandem lemma candidates for P(Q1^0 >= 1, Q1^1 = a, Q2^1 >= b).
double tandem_lemma(double l1, double l2, int a, int b, bool minus_one);

double law_flux_speed(double u);
double hydrodynamic_profile(double u);

// Geometric on {0,1,...}: (1-q) q^k.
double geom0_pmf(double q, std::int64_t k);
// Column occupancy above threshold a: Geom0 with q = 1 - sqrt(a).
double occupancy_pmf(double a, std::int64_t k);
// Convoy size at speed x: sqrt(x) (1 - sqrt x)^(k-1), k >= 1.
double mark_pmf(double x, std::int64_t k);
// Expected number of distinct speeds in (a, b]: integral of 1/(2x).
double cluster_intensity_mass(double a, double b);
// E[U_{0,i}] = 2 / ((i+2)(i+3)).
double mean_speed(int i);

// Exact samplers by inversion.
double sample_speed_single(int j, Xoshiro256& rng);
// ((1 + V) / 2)^2 with V uniform on [-1, 1].
double sample_flux_speed(Xoshiro256& rng);
std::int64_t sample_geom0(double q, Xoshiro256& rng);
std::int64_t sample_ber_geom(double p, double alpha, Xoshiro256& rng);

// String-keyed catalog for the CLI. Each entry evaluates at (x, params).
struct LawEntry {
    std::string description;
    std::function<double(double, const std::vector<double>&)> eval;
};
const std::map<std::string, LawEntry>& catalog();

}  // namespace tazrp::laws

#pragma once

#include <cstdint>
#include <vector>

#include "horolab/common.hpp"
#include "horolab/orbit.hpp"
#include "horolab/pillai.hpp"

namespace horolab::sieve {

/// Primes and smallest prime factors on [2, bound], bound inclusive.
/// spf[1] = 1 by convention; spf[k] is the least prime dividing k.
struct PrimeTable {
    long long bound = 0;
    std::vector<std::int32_t> primes;
    std::vector<std::int32_t> spf;

    static PrimeTable up_to(long long bound);
    bool is_prime(long long k) const;
    /// Number of primes <= x.
    long long count_up_to(double x) const;
};

/// Partial sum sum_{p <= x} log p / p.
double mertens_sum(double x, const PrimeTable& table);

struct MertensScan {
    double sup_dev = -1e300;
    double inf_dev = 1e300;
    long long argmax = 0;
};

/// Deviation sum_{p <= x} log p / p - log x scanned over every integer x in
/// [2, x_max].
MertensScan mertens_deviation_scan(long long x_max, const PrimeTable& table);

/// Local density of the divisibility count at a prime: g(p) = 1 - (1-1/p)^d.
double g_of_prime(int d, long long p);

struct Axiom1Report {
    int d = 0;
    double c1 = 0.0;  // 2^{d+1}
    double max_g = 0.0;
    long long worst_p = 0;
    bool ok = false;
};

/// Verifies 0 < g(p) <= 1 - 2^{-d} for all primes p < z.
Axiom1Report axiom1_check(int d, double z, const PrimeTable& table);

struct Axiom3Report {
    int d = 0;
    double sup_dev = 0.0;
    double worst_w = 0.0, worst_z = 0.0;
    double c2_config = 0.0;
    bool ok = false;
};

/// Sup over a log-spaced grid of windows [w, z] of
/// |sum_{w <= p <= z} g(p) log p - d log(z/w)|, compared against the
/// configured constant.
Axiom3Report axiom3_check(int d, double lo, double hi, int grid_points, double c2_config,
                          const PrimeTable& table);

enum class RoughConvention {
    StrictBelow,  // no prime factor p < z
    AtOrBelow,    // no prime factor p <= z
};

/// Count of 1 <= k <= x free of small prime factors, by scanning the
/// smallest-prime-factor table. 1 always counts.
long long rough_count(long long x, double z, RoughConvention convention, const PrimeTable& table);

/// Buchstab's function on [1, u_max]: 1/u on [1, 2], then extended by the
/// delay relation (u w(u))' = w(u-1) with a fixed-step trapezoid march.
/// The extension beyond [1, 2] is the standard definition.
class Buchstab {
  public:
    explicit Buchstab(double u_max = 16.0, double step = 1e-4);
    double omega(double u) const;
    double u_max() const { return u_max_; }

  private:
    double u_max_;
    double step_;
    long long per_unit_;
    std::vector<double> w_;  // w_[k] = u omega(u) at u = 1 + k step
};

/// (x omega(log x / log y) - y) / log y, the leading term of the rough
/// counting function.
double buchstab_phi_estimate(double x, double y, const Buchstab& buchstab);

/// If k < T has no prime factor below T^alpha then it has fewer than
/// 1/alpha prime factors with multiplicity; returns that implication.
bool omega_count_check(long long k, double T, double alpha, const PrimeTable& table);

struct SieveRow {
    long long modulus = 0;  // squarefree K
    double s_k = 0.0;       // lattice sum over K | k_1...k_d
    double g_x = 0.0;       // g(K) X
    double remainder = 0.0; // s_k - g_x
};

struct SieveExperiment {
    int d = 0;
    double T = 0.0;
    double level = 0.0;  // D
    double z = 0.0;
    double s = 0.0;  // log D / log z
    double x_mass = 0.0;  // X = T^d * invariant mean of f
    std::vector<SieveRow> rows;
    double sum_abs_remainder = 0.0;
    double epsilon = 0.0;
    double remainder_ratio = 0.0;  // sum |r_K| / X^{1-eps}
    Axiom1Report axiom1;
    Axiom3Report axiom3;
};

/// Decomposition of the orbit sums S_K over squarefree moduli K < D:
/// S_K = g(K) X + r_K with g(K) = G_d(K)/K^d, X = T^d * haar_mean.
/// Exact lattice sums over integer points of (0,T]^d (abelian chart).
SieveExperiment sieve_decompose(const orbit::OrbitConfig& config, double level, double z,
                                double haar_mean, double epsilon, const PrimeTable& table);

struct AlmostPrimeResult {
    double sum = 0.0;
    long long rough_per_axis = 0;
    double z = 0.0;
    double ratio = 0.0;  // sum / ((T/log T)^d * haar_mean)
};

/// Sum of f over integer points of (0,T]^d whose coordinate product has no
/// prime factor below z. Rough flags come from direct multiple-marking over
/// the prime list, independent of the spf scan behind rough_count; a
/// constant f factorizes into per-axis rough counts.
AlmostPrimeResult almost_prime_sum(const orbit::OrbitConfig& config, double z, double haar_mean,
                                   const PrimeTable& table);

/// Legendre cross-check: S(A,P) computed directly as the rough sum vs the
/// inclusion-exclusion sum over squarefree divisors of the prime product.
struct LegendreCheck {
    double direct = 0.0;
    double inclusion_exclusion = 0.0;
};
LegendreCheck legendre_check(const orbit::OrbitConfig& config, double z, const PrimeTable& table);

}  // namespace horolab::sieve

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "horolab/common.hpp"

namespace horolab::pillai {

using Int = mpz_class;

/// Positive integer with its prime factorization, primes increasing.
struct FactoredInteger {
    long long value = 1;
    std::vector<std::pair<long long, int>> factors;

    static FactoredInteger of(long long k);
    bool squarefree() const;
    int omega() const { return static_cast<int>(factors.size()); }
};

/// Values of an arithmetic function on 1..bound (index 0 unused).
struct ArithmeticTable {
    std::string name;
    long long bound = 0;
    std::vector<Int> values;

    const Int& at(long long k) const { return values[static_cast<std::size_t>(k)]; }
};

/// Count of d-tuples in (0,K]^d whose product is divisible by K, computed
/// through the iterated gcd-sum formula (K^{d-1} gcd evaluations).
Int gd_direct(long long k, int d, std::uint64_t budget = work_budget());

/// Test oracle: the K^d tuple counter, budget capped.
Int gd_count_naive(long long k, int d, std::uint64_t budget = 100'000'000ULL);

/// Tables of G_1..G_d on 1..x via the convolution recursion
/// G_{e+1} = Id^e * (phi . G_e), divisor-major loops.
std::vector<ArithmeticTable> gd_convolution_tables(int d_max, long long x);

/// Overflow-checked fast path for a single G_d table (values must fit in 64
/// bits, i.e. x^d < 2^63).
std::vector<std::uint64_t> gd_table_u64(int d, long long x);

/// Product over prime powers, each evaluated by the convolution recursion
/// restricted to the divisor chain 1, p, ..., p^e.
Int gd_multiplicative(const FactoredInteger& k, int d);
Int gd_prime_power(long long p, int e, int d);

std::vector<long long> phi_table(long long x);
std::vector<int> mu_table(long long x);
std::vector<long long> tau_table(long long x);

struct PhiMuTables {
    std::vector<long long> phi;
    std::vector<int> mu;
    std::vector<long long> tau;
    /// G_2 == mu * (Id . tau) verified exactly on 1..min(x, 10^4).
    bool convolution_identity_ok = false;
};
PhiMuTables phi_mu_tables(long long x);

/// Both sides of sum_{i<=K} f(gcd(K,i)) == sum_{j|K} f(j) phi(K/j).
std::pair<Int, Int> cesaro_check(long long k, const std::function<Int(long long)>& f);

struct DirichletSum {
    double sum = 0.0;
    double bound_ratio = 0.0;  // sum / (x^{d-s} (log x)^{d-1})
};
DirichletSum dirichlet_partial_sum(int d, double s, long long x);
DirichletSum dirichlet_partial_sum(const std::vector<std::uint64_t>& gd_values, int d, double s,
                                   long long x);

/// G_d(K) <= K^{d-1} d^{omega(K)} for squarefree K; throws if K is not
/// squarefree.
bool squarefree_bound_check(long long k, int d);

/// Divisors of k with the totient of each, from the factorization.
std::vector<std::pair<long long, long long>> divisors_with_phi(const FactoredInteger& k);

}  // namespace horolab::pillai

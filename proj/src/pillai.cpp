#include "horolab/pillai.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace horolab::pillai {

FactoredInteger FactoredInteger::of(long long k) {
    if (k < 1) throw std::invalid_argument("FactoredInteger: need a positive integer");
    FactoredInteger out;
    out.value = k;
    for (long long p = 2; p * p <= k; ++p) {
        if (k % p == 0) {
            int e = 0;
            while (k % p == 0) {
                k /= p;
                ++e;
            }
            out.factors.emplace_back(p, e);
        }
    }
    if (k > 1) out.factors.emplace_back(k, 1);
    return out;
}

bool FactoredInteger::squarefree() const {
    for (const auto& f : factors) {
        if (f.second > 1) return false;
    }
    return true;
}

Int gd_direct(long long k, int d, std::uint64_t budget) {
    if (k < 1 || d < 1) throw std::invalid_argument("gd_direct: need K, d >= 1");
    if (std::pow(static_cast<double>(k), d - 1) > static_cast<double>(budget)) {
        throw ResourceLimitError("gd_direct: K^{d-1} exceeds the work budget");
    }
    if (d == 1 || k == 1) return 1;

    // gcd(K, r) by residue; gcd(K, 0) = K
    std::vector<std::uint32_t> gcd_of(static_cast<std::size_t>(k));
    for (long long r = 0; r < k; ++r) {
        gcd_of[static_cast<std::size_t>(r)] = static_cast<std::uint32_t>(std::gcd(k, r == 0 ? k : r));
    }

    Int total = 0;
    unsigned long long acc = 0;
    const unsigned long long flush_at = 1ULL << 62;
    const std::uint32_t ku = static_cast<std::uint32_t>(k);

    // depth-first over the d-1 free coordinates, carrying the running
    // product mod K
    auto descend = [&](auto&& self, int level, std::uint32_t prod) -> void {
        if (level == d - 1) {
            std::uint64_t row = 0;
            for (std::uint32_t kk = 1; kk <= ku; ++kk) {
                row += gcd_of[static_cast<std::size_t>(
                    static_cast<std::uint64_t>(prod) * kk % ku)];
            }
            acc += row;
            if (acc > flush_at) {
                total += Int(static_cast<unsigned long>(acc));
                acc = 0;
            }
            return;
        }
        for (std::uint32_t kk = 1; kk <= ku; ++kk) {
            self(self, level + 1, static_cast<std::uint32_t>(static_cast<std::uint64_t>(prod) * kk % ku));
        }
    };
    descend(descend, 1, 1 % ku);
    total += Int(static_cast<unsigned long>(acc));
    return total;
}

Int gd_count_naive(long long k, int d, std::uint64_t budget) {
    if (k < 1 || d < 1) throw std::invalid_argument("gd_count_naive: need K, d >= 1");
    if (std::pow(static_cast<double>(k), d) > static_cast<double>(budget)) {
        throw ResourceLimitError("gd_count_naive: K^d exceeds the work budget");
    }
    std::vector<long long> tuple(static_cast<std::size_t>(d), 1);
    unsigned long long count = 0;
    for (;;) {
        long long prod = 1;
        for (long long v : tuple) prod = prod * v % k;
        if (prod % k == 0) ++count;
        int i = d - 1;
        while (i >= 0 && tuple[static_cast<std::size_t>(i)] == k) {
            tuple[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++tuple[static_cast<std::size_t>(i)];
    }
    return Int(static_cast<unsigned long>(count));
}

std::vector<long long> phi_table(long long x) {
    if (x < 1) throw std::invalid_argument("phi_table: need x >= 1");
    std::vector<long long> phi(static_cast<std::size_t>(x) + 1);
    std::iota(phi.begin(), phi.end(), 0LL);
    for (long long i = 2; i <= x; ++i) {
        if (phi[static_cast<std::size_t>(i)] == i) {  // prime
            for (long long m = i; m <= x; m += i) {
                phi[static_cast<std::size_t>(m)] -= phi[static_cast<std::size_t>(m)] / i;
            }
        }
    }
    return phi;
}

std::vector<int> mu_table(long long x) {
    if (x < 1) throw std::invalid_argument("mu_table: need x >= 1");
    std::vector<int> mu(static_cast<std::size_t>(x) + 1, 0);
    std::vector<long long> primes;
    std::vector<bool> composite(static_cast<std::size_t>(x) + 1, false);
    mu[1] = 1;
    for (long long i = 2; i <= x; ++i) {
        if (!composite[static_cast<std::size_t>(i)]) {
            primes.push_back(i);
            mu[static_cast<std::size_t>(i)] = -1;
        }
        for (long long p : primes) {
            if (i * p > x) break;
            composite[static_cast<std::size_t>(i * p)] = true;
            if (i % p == 0) {
                mu[static_cast<std::size_t>(i * p)] = 0;
                break;
            }
            mu[static_cast<std::size_t>(i * p)] = -mu[static_cast<std::size_t>(i)];
        }
    }
    return mu;
}

std::vector<long long> tau_table(long long x) {
    if (x < 1) throw std::invalid_argument("tau_table: need x >= 1");
    std::vector<long long> tau(static_cast<std::size_t>(x) + 1, 0);
    for (long long j = 1; j <= x; ++j) {
        for (long long m = j; m <= x; m += j) ++tau[static_cast<std::size_t>(m)];
    }
    return tau;
}

std::vector<ArithmeticTable> gd_convolution_tables(int d_max, long long x) {
    if (d_max < 1 || x < 1) throw std::invalid_argument("gd_convolution_tables: need d, x >= 1");
    if (static_cast<double>(x) * (d_max + 1) > 5e7) {
        throw ResourceLimitError("gd_convolution_tables: table memory exceeds the budget");
    }
    const std::vector<long long> phi = phi_table(x);

    std::vector<ArithmeticTable> tables;
    tables.reserve(static_cast<std::size_t>(d_max));
    ArithmeticTable g1{"G_1", x, std::vector<Int>(static_cast<std::size_t>(x) + 1, 1)};
    g1.values[0] = 0;
    tables.push_back(std::move(g1));

    for (int e = 1; e < d_max; ++e) {
        // phi . G_e pointwise, then Id^e * (phi . G_e) by divisor-major loops
        std::vector<Int> phig(static_cast<std::size_t>(x) + 1);
        for (long long m = 1; m <= x; ++m) {
            phig[static_cast<std::size_t>(m)] =
                tables.back().values[static_cast<std::size_t>(m)] *
                static_cast<long>(phi[static_cast<std::size_t>(m)]);
        }
        std::vector<Int> next(static_cast<std::size_t>(x) + 1, 0);
        Int je;
        for (long long j = 1; j <= x; ++j) {
            mpz_ui_pow_ui(je.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(e));
            for (long long m = j; m <= x; m += j) {
                next[static_cast<std::size_t>(m)] += je * phig[static_cast<std::size_t>(m / j)];
            }
        }
        tables.push_back(ArithmeticTable{"G_" + std::to_string(e + 1), x, std::move(next)});
        if (tables.back().values[1] != 1) {
            throw std::logic_error("gd_convolution_tables: G_d(1) != 1");
        }
    }
    return tables;
}

std::vector<std::uint64_t> gd_table_u64(int d, long long x) {
    if (d < 1 || x < 1) throw std::invalid_argument("gd_table_u64: need d, x >= 1");
    if (d * std::log2(static_cast<double>(x) + 1.0) >= 63.0) {
        throw ResourceLimitError("gd_table_u64: values may overflow 64 bits; use the mpz tables");
    }
    const std::vector<long long> phi = phi_table(x);
    std::vector<std::uint64_t> cur(static_cast<std::size_t>(x) + 1, 1);
    cur[0] = 0;
    for (int e = 1; e < d; ++e) {
        std::vector<std::uint64_t> phig(static_cast<std::size_t>(x) + 1);
        for (long long m = 1; m <= x; ++m) {
            phig[static_cast<std::size_t>(m)] =
                cur[static_cast<std::size_t>(m)] * static_cast<std::uint64_t>(phi[static_cast<std::size_t>(m)]);
        }
        std::vector<std::uint64_t> next(static_cast<std::size_t>(x) + 1, 0);
        for (long long j = 1; j <= x; ++j) {
            std::uint64_t je = 1;
            for (int t = 0; t < e; ++t) je *= static_cast<std::uint64_t>(j);
            for (long long m = j; m <= x; m += j) {
                next[static_cast<std::size_t>(m)] += je * phig[static_cast<std::size_t>(m / j)];
            }
        }
        cur = std::move(next);
    }
    return cur;
}

Int gd_prime_power(long long p, int e, int d) {
    if (e < 0 || d < 1) throw std::invalid_argument("gd_prime_power: need e >= 0, d >= 1");
    // phi(p^i) for i = 0..e
    std::vector<Int> phip(static_cast<std::size_t>(e) + 1);
    phip[0] = 1;
    Int pw = 1;
    for (int i = 1; i <= e; ++i) {
        pw *= static_cast<long>(p);
        phip[static_cast<std::size_t>(i)] = pw - pw / static_cast<long>(p);
    }
    std::vector<Int> cur(static_cast<std::size_t>(e) + 1, 1);  // G_1(p^i) = 1
    for (int level = 1; level < d; ++level) {
        std::vector<Int> next(static_cast<std::size_t>(e) + 1, 0);
        for (int i = 0; i <= e; ++i) {
            for (int a = 0; a <= i; ++a) {
                Int pad;  // (p^a)^level
                mpz_ui_pow_ui(pad.get_mpz_t(), static_cast<unsigned long>(p),
                              static_cast<unsigned long>(a) * static_cast<unsigned long>(level));
                next[static_cast<std::size_t>(i)] +=
                    pad * phip[static_cast<std::size_t>(i - a)] * cur[static_cast<std::size_t>(i - a)];
            }
        }
        cur = std::move(next);
    }
    return cur[static_cast<std::size_t>(e)];
}

Int gd_multiplicative(const FactoredInteger& k, int d) {
    if (d < 1) throw std::invalid_argument("gd_multiplicative: need d >= 1");
    Int out = 1;
    for (const auto& f : k.factors) {
        out *= gd_prime_power(f.first, f.second, d);
    }
    return out;
}

std::vector<std::pair<long long, long long>> divisors_with_phi(const FactoredInteger& k) {
    std::vector<std::pair<long long, long long>> divs{{1, 1}};
    for (const auto& [p, e] : k.factors) {
        const std::size_t base = divs.size();
        long long pw = 1;
        long long phi_pw = 1;
        for (int i = 1; i <= e; ++i) {
            phi_pw = (i == 1) ? p - 1 : phi_pw * p;
            pw *= p;
            for (std::size_t b = 0; b < base; ++b) {
                divs.emplace_back(divs[b].first * pw, divs[b].second * phi_pw);
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::pair<Int, Int> cesaro_check(long long k, const std::function<Int(long long)>& f) {
    if (k < 1) throw std::invalid_argument("cesaro_check: need K >= 1");
    Int lhs = 0;
    for (long long i = 1; i <= k; ++i) lhs += f(std::gcd(k, i));

    const auto divs = divisors_with_phi(FactoredInteger::of(k));
    // phi(K/j) looked up from the divisor list
    Int rhs = 0;
    for (const auto& [j, phi_j] : divs) {
        (void)phi_j;
        const long long co = k / j;
        const auto it = std::lower_bound(divs.begin(), divs.end(), std::make_pair(co, 0LL));
        rhs += f(j) * static_cast<long>(it->second);
    }
    return {lhs, rhs};
}

DirichletSum dirichlet_partial_sum(const std::vector<std::uint64_t>& gd_values, int d, double s,
                                   long long x) {
    if (!(s < d)) throw std::invalid_argument("dirichlet_partial_sum: need s < d");
    if (!(static_cast<double>(x) > std::exp(1.0))) {
        throw std::invalid_argument("dirichlet_partial_sum: need x > e");
    }
    if (static_cast<long long>(gd_values.size()) <= x) {
        throw std::invalid_argument("dirichlet_partial_sum: table too short");
    }
    KahanSum acc;
    for (long long k = 1; k <= x; ++k) {
        acc.add(static_cast<double>(gd_values[static_cast<std::size_t>(k)]) /
                std::pow(static_cast<double>(k), s));
    }
    const double xd = static_cast<double>(x);
    const double envelope = std::pow(xd, d - s) * std::pow(std::log(xd), d - 1);
    return {acc.value(), acc.value() / envelope};
}

DirichletSum dirichlet_partial_sum(int d, double s, long long x) {
    return dirichlet_partial_sum(gd_table_u64(d, x), d, s, x);
}

bool squarefree_bound_check(long long k, int d) {
    const FactoredInteger f = FactoredInteger::of(k);
    if (!f.squarefree()) throw std::invalid_argument("squarefree_bound_check: K is not squarefree");
    Int rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(d - 1));
    Int dw;
    mpz_ui_pow_ui(dw.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(f.omega()));
    return gd_multiplicative(f, d) <= rhs * dw;
}

PhiMuTables phi_mu_tables(long long x) {
    PhiMuTables out;
    out.phi = phi_table(x);
    out.mu = mu_table(x);
    out.tau = tau_table(x);

    const long long limit = std::min<long long>(x, 10'000);
    const std::vector<std::uint64_t> g2 = gd_table_u64(2, limit);
    out.convolution_identity_ok = true;
    // (mu * (Id . tau))(m) accumulated divisor-major
    std::vector<long long> conv(static_cast<std::size_t>(limit) + 1, 0);
    for (long long j = 1; j <= limit; ++j) {
        if (out.mu[static_cast<std::size_t>(j)] == 0) continue;
        for (long long m = j; m <= limit; m += j) {
            const long long q = m / j;
            conv[static_cast<std::size_t>(m)] +=
                out.mu[static_cast<std::size_t>(j)] * q * out.tau[static_cast<std::size_t>(q)];
        }
    }
    for (long long m = 1; m <= limit; ++m) {
        if (conv[static_cast<std::size_t>(m)] !=
            static_cast<long long>(g2[static_cast<std::size_t>(m)])) {
            out.convolution_identity_ok = false;
            break;
        }
    }
    return out;
}

}  // namespace horolab::pillai

#include "horolab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace horolab::sieve {

PrimeTable PrimeTable::up_to(long long bound) {
    if (bound < 1) throw std::invalid_argument("PrimeTable: need bound >= 1");
    PrimeTable out;
    out.bound = bound;
    out.spf.assign(static_cast<std::size_t>(bound) + 1, 0);
    if (bound >= 1) out.spf[1] = 1;
    for (long long i = 2; i <= bound; ++i) {
        if (out.spf[static_cast<std::size_t>(i)] == 0) {
            out.primes.push_back(static_cast<std::int32_t>(i));
            for (long long m = i; m <= bound; m += i) {
                if (out.spf[static_cast<std::size_t>(m)] == 0) {
                    out.spf[static_cast<std::size_t>(m)] = static_cast<std::int32_t>(i);
                }
            }
        }
    }
    return out;
}

bool PrimeTable::is_prime(long long k) const {
    if (k < 2 || k > bound) return false;
    return spf[static_cast<std::size_t>(k)] == k;
}

long long PrimeTable::count_up_to(double x) const {
    if (x > static_cast<double>(bound)) {
        throw std::invalid_argument("PrimeTable::count_up_to: x beyond the table bound");
    }
    const auto it = std::upper_bound(primes.begin(), primes.end(), x,
                                     [](double v, std::int32_t p) { return v < p; });
    return it - primes.begin();
}

double mertens_sum(double x, const PrimeTable& table) {
    if (!(x >= 2.0)) throw std::invalid_argument("mertens_sum: need x >= 2");
    if (x > static_cast<double>(table.bound)) {
        throw std::invalid_argument("mertens_sum: x beyond the table bound");
    }
    KahanSum acc;
    for (std::int32_t p : table.primes) {
        if (p > x) break;
        acc.add(std::log(static_cast<double>(p)) / static_cast<double>(p));
    }
    return acc.value();
}

MertensScan mertens_deviation_scan(long long x_max, const PrimeTable& table) {
    if (x_max < 2 || x_max > table.bound) {
        throw std::invalid_argument("mertens_deviation_scan: bad range");
    }
    MertensScan out;
    KahanSum acc;
    std::size_t next = 0;
    for (long long x = 2; x <= x_max; ++x) {
        if (next < table.primes.size() && table.primes[next] == x) {
            acc.add(std::log(static_cast<double>(x)) / static_cast<double>(x));
            ++next;
        }
        const double dev = acc.value() - std::log(static_cast<double>(x));
        if (dev > out.sup_dev) {
            out.sup_dev = dev;
            out.argmax = x;
        }
        out.inf_dev = std::min(out.inf_dev, dev);
    }
    return out;
}

double g_of_prime(int d, long long p) {
    return 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(p), d);
}

Axiom1Report axiom1_check(int d, double z, const PrimeTable& table) {
    if (d < 1) throw std::invalid_argument("axiom1_check: need d >= 1");
    if (z > static_cast<double>(table.bound) + 1.0) {
        throw std::invalid_argument("axiom1_check: z beyond the table bound");
    }
    Axiom1Report rep;
    rep.d = d;
    rep.c1 = std::pow(2.0, d + 1);
    const double bound = 1.0 - std::pow(2.0, -d);
    rep.ok = true;
    for (std::int32_t p : table.primes) {
        if (p >= z) break;
        const double g = g_of_prime(d, p);
        if (g > rep.max_g) {
            rep.max_g = g;
            rep.worst_p = p;
        }
        if (!(g > 0.0) || g > bound + 1e-12) rep.ok = false;
    }
    return rep;
}

Axiom3Report axiom3_check(int d, double lo, double hi, int grid_points, double c2_config,
                          const PrimeTable& table) {
    if (!(2.0 <= lo && lo <= hi)) throw std::invalid_argument("axiom3_check: need 2 <= lo <= hi");
    if (hi > static_cast<double>(table.bound)) {
        throw std::invalid_argument("axiom3_check: range beyond the table bound");
    }
    if (grid_points < 2) throw std::invalid_argument("axiom3_check: need >= 2 grid points");

    // prefix[i] = sum over the first i primes of g(p) log p
    std::vector<double> prefix(table.primes.size() + 1, 0.0);
    {
        KahanSum acc;
        for (std::size_t i = 0; i < table.primes.size(); ++i) {
            acc.add(g_of_prime(d, table.primes[i]) * std::log(static_cast<double>(table.primes[i])));
            prefix[i + 1] = acc.value();
        }
    }
    auto sum_up_to = [&](double x) {  // sum over p <= x
        const auto it = std::upper_bound(table.primes.begin(), table.primes.end(), x,
                                         [](double v, std::int32_t p) { return v < p; });
        return prefix[static_cast<std::size_t>(it - table.primes.begin())];
    };
    auto sum_below = [&](double x) {  // sum over p < x
        const auto it = std::lower_bound(table.primes.begin(), table.primes.end(), x,
                                         [](std::int32_t p, double v) { return p < v; });
        return prefix[static_cast<std::size_t>(it - table.primes.begin())];
    };

    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(grid_points - 1));
    }

    Axiom3Report rep;
    rep.d = d;
    rep.c2_config = c2_config;
    for (int i = 0; i < grid_points; ++i) {
        const double w = grid[static_cast<std::size_t>(i)];
        const double base = sum_below(w);
        for (int j = i; j < grid_points; ++j) {
            const double z = grid[static_cast<std::size_t>(j)];
            const double window = sum_up_to(z) - base;  // w <= p <= z, inclusive
            const double dev = std::abs(window - d * std::log(z / w));
            if (dev > rep.sup_dev) {
                rep.sup_dev = dev;
                rep.worst_w = w;
                rep.worst_z = z;
            }
        }
    }
    rep.ok = std::isfinite(rep.sup_dev) && rep.sup_dev <= c2_config;
    return rep;
}

long long rough_count(long long x, double z, RoughConvention convention, const PrimeTable& table) {
    if (x < 1) throw std::invalid_argument("rough_count: need x >= 1");
    if (x > table.bound) throw std::invalid_argument("rough_count: x beyond the table bound");
    long long count = 1;  // k = 1 has no prime factors at all
    for (long long k = 2; k <= x; ++k) {
        const double spf = static_cast<double>(table.spf[static_cast<std::size_t>(k)]);
        const bool rough = convention == RoughConvention::StrictBelow ? spf >= z : spf > z;
        if (rough) ++count;
    }
    return count;
}

Buchstab::Buchstab(double u_max, double step) : u_max_(u_max), step_(step) {
    if (!(u_max > 2.0) || !(step > 0.0)) throw std::invalid_argument("Buchstab: bad parameters");
    per_unit_ = std::llround(1.0 / step);
    if (per_unit_ < 10) throw std::invalid_argument("Buchstab: step too coarse");
    const long long total = static_cast<long long>(std::ceil((u_max - 1.0) / step)) + 1;
    w_.resize(static_cast<std::size_t>(total));
    auto u_of = [&](long long k) { return 1.0 + static_cast<double>(k) * step_; };
    // w = u omega(u); on [1,2] omega = 1/u so w = 1
    for (long long k = 0; k < total; ++k) {
        if (u_of(k) <= 2.0 + 1e-15) {
            w_[static_cast<std::size_t>(k)] = 1.0;
        } else {
            // trapezoid step of w'(u) = w(u-1)/(u-1); u-1 lands exactly
            // per_unit_ indices back
            const double prev = w_[static_cast<std::size_t>(k - 1)];
            const double f_prev =
                w_[static_cast<std::size_t>(k - 1 - per_unit_)] / (u_of(k - 1) - 1.0);
            const double f_here = w_[static_cast<std::size_t>(k - per_unit_)] / (u_of(k) - 1.0);
            w_[static_cast<std::size_t>(k)] = prev + step_ * 0.5 * (f_prev + f_here);
        }
    }
}

double Buchstab::omega(double u) const {
    if (u < 1.0) throw OutOfDomainError("Buchstab::omega: u < 1");
    if (u <= 2.0) return 1.0 / u;
    if (u > u_max_) throw OutOfDomainError("Buchstab::omega: beyond the tabulated range");
    const double pos = (u - 1.0) / step_;
    const long long k = std::min<long long>(static_cast<long long>(pos),
                                            static_cast<long long>(w_.size()) - 2);
    const double frac = pos - static_cast<double>(k);
    const double w = w_[static_cast<std::size_t>(k)] * (1.0 - frac) +
                     w_[static_cast<std::size_t>(k + 1)] * frac;
    return w / u;
}

double buchstab_phi_estimate(double x, double y, const Buchstab& buchstab) {
    if (!(x >= y && y >= 2.0)) throw std::invalid_argument("buchstab_phi_estimate: need x >= y >= 2");
    const double u = std::log(x) / std::log(y);
    return (x * buchstab.omega(u) - y) / std::log(y);
}

bool omega_count_check(long long k, double T, double alpha, const PrimeTable& table) {
    if (k < 1 || !(static_cast<double>(k) < T)) {
        throw std::invalid_argument("omega_count_check: need 1 <= k < T");
    }
    if (k > table.bound) throw std::invalid_argument("omega_count_check: k beyond the table bound");
    const double z = std::pow(T, alpha);
    long long m = k;
    int big_omega = 0;
    bool hypothesis = true;
    while (m > 1) {
        const long long p = table.spf[static_cast<std::size_t>(m)];
        if (static_cast<double>(p) < z) hypothesis = false;
        while (m % p == 0) {
            m /= p;
            ++big_omega;
        }
    }
    if (!hypothesis) return true;  // vacuous
    return static_cast<double>(big_omega) < 1.0 / alpha;
}

namespace {

// f evaluated on the integer points of (0, Ti]^d, cached when the grid is
// small enough to hold
class IntegerOrbit {
  public:
    IntegerOrbit(const orbit::OrbitConfig& config, long long ti)
        : config_(config), ti_(ti), d_(config.chart.dim()) {
        double total = 1.0;
        for (int k = 0; k < d_; ++k) total *= static_cast<double>(ti_);
        if (total <= 2e7) {
            cache_.assign(static_cast<std::size_t>(total), std::nan(""));
            cached_ = true;
        }
        if (total > static_cast<double>(work_budget())) {
            throw ResourceLimitError("integer orbit sums over Ti^d points exceed the work budget; "
                                     "no partial results were produced");
        }
    }

    long long ti() const { return ti_; }
    int dim() const { return d_; }

    double value(const std::vector<long long>& k) {
        if (cached_) {
            std::size_t idx = 0;
            for (int i = 0; i < d_; ++i) {
                idx = idx * static_cast<std::size_t>(ti_) +
                      static_cast<std::size_t>(k[static_cast<std::size_t>(i)] - 1);
            }
            double& slot = cache_[idx];
            if (std::isnan(slot)) slot = evaluate(k);
            return slot;
        }
        return evaluate(k);
    }

  private:
    double evaluate(const std::vector<long long>& k) {
        std::vector<double> t(static_cast<std::size_t>(d_));
        for (int i = 0; i < d_; ++i) {
            t[static_cast<std::size_t>(i)] = static_cast<double>(k[static_cast<std::size_t>(i)]);
        }
        return orbit::eval_at(config_, t);
    }

    const orbit::OrbitConfig& config_;
    long long ti_;
    int d_;
    bool cached_ = false;
    std::vector<double> cache_;
};

// S_K: sum of f over integer points of (0,Ti]^d with K | k_1 ... k_d.
// The first d-1 coordinates run freely; the last is constrained to
// multiples of K / gcd(K, product).
double modulus_sum(IntegerOrbit& grid, long long modulus) {
    const int d = grid.dim();
    const long long ti = grid.ti();
    KahanSum acc;
    std::vector<long long> k(static_cast<std::size_t>(d), 1);
    std::vector<long long> prod_mod(static_cast<std::size_t>(d), 1 % modulus);

    // odometer over the first d-1 coordinates with running product mod K
    for (;;) {
        long long prefix = d >= 2 ? prod_mod[static_cast<std::size_t>(d - 2)] : 1 % modulus;
        const long long g = std::gcd(modulus, prefix == 0 ? modulus : prefix);
        const long long m = modulus / g;
        for (long long last = m; last <= ti; last += m) {
            k[static_cast<std::size_t>(d - 1)] = last;
            acc.add(grid.value(k));
        }
        if (d == 1) break;
        int i = d - 2;
        while (i >= 0 && k[static_cast<std::size_t>(i)] == ti) {
            k[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 0) break;
        ++k[static_cast<std::size_t>(i)];
        for (int j = i; j < d - 1; ++j) {
            const long long before = j == 0 ? 1 % modulus : prod_mod[static_cast<std::size_t>(j - 1)];
            prod_mod[static_cast<std::size_t>(j)] =
                before * (k[static_cast<std::size_t>(j)] % modulus) % modulus;
        }
    }
    return acc.value();
}

std::vector<long long> squarefree_moduli(double level) {
    const long long top = static_cast<long long>(std::ceil(level)) - 1;
    std::vector<long long> out;
    if (top < 1) return out;
    const std::vector<int> mu = pillai::mu_table(top);
    for (long long k = 1; k <= top; ++k) {
        if (mu[static_cast<std::size_t>(k)] != 0) out.push_back(k);
    }
    return out;
}

}  // namespace

SieveExperiment sieve_decompose(const orbit::OrbitConfig& config, double level, double z,
                                double haar_mean, double epsilon, const PrimeTable& table) {
    if (!config.chart.spec().is_abelian()) {
        throw UnsupportedConfigError("sieve_decompose: needs an abelian chart");
    }
    if (!(level > 1.0)) throw std::invalid_argument("sieve_decompose: need D > 1");
    const long long ti = static_cast<long long>(std::floor(config.T + 1e-9));
    if (ti < 1) throw std::invalid_argument("sieve_decompose: need T >= 1");

    SieveExperiment exp;
    exp.d = config.chart.dim();
    exp.T = config.T;
    exp.level = level;
    exp.z = z;
    exp.s = z > 1.0 ? std::log(level) / std::log(z) : 0.0;
    exp.epsilon = epsilon;
    exp.x_mass = std::pow(config.T, exp.d) * haar_mean;

    IntegerOrbit grid(config, ti);
    KahanSum abs_r;
    for (long long modulus : squarefree_moduli(level)) {
        SieveRow row;
        row.modulus = modulus;
        row.s_k = modulus_sum(grid, modulus);
        const pillai::Int gd = pillai::gd_multiplicative(pillai::FactoredInteger::of(modulus), exp.d);
        const double g = gd.get_d() / std::pow(static_cast<double>(modulus), exp.d);
        row.g_x = g * exp.x_mass;
        row.remainder = row.s_k - row.g_x;
        abs_r.add(std::abs(row.remainder));
        exp.rows.push_back(row);
    }
    exp.sum_abs_remainder = abs_r.value();
    exp.remainder_ratio = exp.sum_abs_remainder / std::pow(exp.x_mass, 1.0 - epsilon);
    exp.axiom1 = axiom1_check(exp.d, std::max(z, 3.0), table);
    exp.axiom3 = axiom3_check(exp.d, 2.0, std::max(z, 4.0), 64, 6.0 * exp.d, table);
    return exp;
}

AlmostPrimeResult almost_prime_sum(const orbit::OrbitConfig& config, double z, double haar_mean,
                                   const PrimeTable& table) {
    if (!config.chart.spec().is_abelian()) {
        throw UnsupportedConfigError("almost_prime_sum: needs an abelian chart");
    }
    const long long ti = static_cast<long long>(std::floor(config.T + 1e-9));
    if (ti < 1) throw std::invalid_argument("almost_prime_sum: need T >= 1");
    const int d = config.chart.dim();

    // z-rough flags by direct multiple marking over the prime list; this is
    // an independent mechanism from the spf scan in rough_count
    std::vector<char> rough(static_cast<std::size_t>(ti) + 1, 1);
    rough[0] = 0;
    for (std::int32_t p : table.primes) {
        if (static_cast<double>(p) >= z) break;
        for (long long m = p; m <= ti; m += p) rough[static_cast<std::size_t>(m)] = 0;
    }
    std::vector<long long> values;
    for (long long k = 1; k <= ti; ++k) {
        if (rough[static_cast<std::size_t>(k)]) values.push_back(k);
    }

    AlmostPrimeResult out;
    out.z = z;
    out.rough_per_axis = static_cast<long long>(values.size());

    if (config.f.is_constant()) {
        // product over independent coordinates
        out.sum = config.f.constant_value() * std::pow(static_cast<double>(values.size()), d);
    } else {
        double total = std::pow(static_cast<double>(values.size()), d);
        if (total > static_cast<double>(work_budget())) {
            throw ResourceLimitError("almost_prime_sum: rough grid exceeds the work budget");
        }
        KahanSum acc;
        std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
        std::vector<long long> k(static_cast<std::size_t>(d));
        if (!values.empty()) {
            IntegerOrbit grid(config, ti);
            for (;;) {
                for (int i = 0; i < d; ++i) {
                    k[static_cast<std::size_t>(i)] = values[idx[static_cast<std::size_t>(i)]];
                }
                acc.add(grid.value(k));
                int i = d - 1;
                while (i >= 0 && idx[static_cast<std::size_t>(i)] == values.size() - 1) {
                    idx[static_cast<std::size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
                ++idx[static_cast<std::size_t>(i)];
            }
        }
        out.sum = acc.value();
    }

    const double denom = std::pow(config.T / std::log(config.T), d) * haar_mean;
    out.ratio = denom != 0.0 ? out.sum / denom : std::nan("");
    return out;
}

LegendreCheck legendre_check(const orbit::OrbitConfig& config, double z, const PrimeTable& table) {
    if (!config.chart.spec().is_abelian()) {
        throw UnsupportedConfigError("legendre_check: needs an abelian chart");
    }
    std::vector<long long> small_primes;
    for (std::int32_t p : table.primes) {
        if (static_cast<double>(p) >= z) break;
        small_primes.push_back(p);
    }
    if (small_primes.size() > 20) {
        throw ResourceLimitError("legendre_check: too many primes below z for inclusion-exclusion");
    }
    const long long ti = static_cast<long long>(std::floor(config.T + 1e-9));
    IntegerOrbit grid(config, ti);

    LegendreCheck out;
    out.direct = almost_prime_sum(config, z, 0.0, table).sum;

    // sum over squarefree divisors K of the product of primes below z
    const std::size_t subsets = 1ULL << small_primes.size();
    KahanSum acc;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        long long modulus = 1;
        int bits = 0;
        for (std::size_t b = 0; b < small_primes.size(); ++b) {
            if (mask & (1ULL << b)) {
                modulus *= small_primes[b];
                ++bits;
            }
        }
        const double sign = bits % 2 == 0 ? 1.0 : -1.0;
        acc.add(sign * modulus_sum(grid, modulus));
    }
    out.inclusion_exclusion = acc.value();
    return out;
}

}  // namespace horolab::sieve

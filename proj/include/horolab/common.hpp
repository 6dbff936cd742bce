#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace horolab {

// A computation would exceed the configured work/memory budget.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Floating-point state degraded past the module's tolerance (determinant
// drift, ill-conditioned decomposition).
struct NumericDegradationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of the operation.
struct OutOfDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Elementary-operation budget for enumeration-style routines.
/// Override with the HOROLAB_WORK_BUDGET environment variable.
inline std::uint64_t work_budget() {
    if (const char* env = std::getenv("HOROLAB_WORK_BUDGET")) {
        const unsigned long long v = std::strtoull(env, nullptr, 10);
        if (v > 0) return v;
    }
    return 400'000'000ULL;
}

/// Deterministic RNG. Doubles come from the top 53 bits of an mt19937_64
/// draw, so streams are reproducible for a fixed (seed, partition) pair.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  private:
    std::mt19937_64 eng_;
};

/// Stream seed for partition `part` of a run seeded with `seed`
/// (splitmix64 step keeps nearby seeds decorrelated).
inline std::uint64_t partition_seed(std::uint64_t seed, unsigned part) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (part + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

/// Runs fn(part, begin, end) for each of `partitions` fixed index ranges of
/// [0, count) and returns the per-partition results in partition order.
/// Results depend only on (count, partitions), never on thread scheduling,
/// so callers combining them in order get bit-identical totals.
template <typename T, typename Fn>
std::vector<T> map_partitions(std::uint64_t count, unsigned partitions, Fn fn) {
    if (partitions == 0) partitions = 1;
    std::vector<T> results(partitions);
    unsigned workers = std::min<unsigned>(partitions, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (unsigned p = 0; p < partitions; ++p) {
            const std::uint64_t b = count * p / partitions;
            const std::uint64_t e = count * (p + 1) / partitions;
            results[p] = fn(p, b, e);
        }
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<unsigned> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const unsigned p = next.fetch_add(1);
                if (p >= partitions) return;
                const std::uint64_t b = count * p / partitions;
                const std::uint64_t e = count * (p + 1) / partitions;
                results[p] = fn(p, b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace horolab

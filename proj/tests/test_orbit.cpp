#include <doctest.h>

#include <cmath>

#include "horolab/orbit.hpp"

using namespace horolab;
using flow::FlowSpec;
using flow::HorosphericalChart;
using group::GroupElement;
using orbit::OrbitConfig;
using orbit::TestFunction;

namespace {

// Simpson quadrature of the plane integral of a bump in the shortest
// length: on the fundamental domain the shortest Euclidean length is
// y^{-1/2} independently of x and the frame angle, so
// int f dm = (3/pi) int bump((y^{-1/2}-c)/w) y^{-2} dy over the support.
double bump_haar_oracle(double center, double width) {
    const double y_lo = 1.0 / ((center + width) * (center + width));
    const double y_hi = 1.0 / ((center - width) * (center - width));
    const int steps = 4000;  // even
    const double h = (y_hi - y_lo) / steps;
    double sum = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double y = y_lo + h * i;
        const double f = orbit::bump_profile((1.0 / std::sqrt(y) - center) / width) / (y * y);
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    return (3.0 / M_PI) * sum * h / 3.0;
}

}  // namespace

TEST_CASE("haar sampler normalization and strip mass") {
    orbit::HaarSampler2 sampler(424242);
    const std::uint64_t n = 200000;
    std::uint64_t above2 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto c = sampler.next_coords();
        CHECK(std::abs(c.x) <= 0.5);
        CHECK(c.x * c.x + c.y * c.y >= 1.0 - 1e-12);
        CHECK(c.theta >= 0.0);
        CHECK(c.theta < M_PI);
        if (c.y > 2.0) ++above2;
    }
    // P(y > 2) = (3/pi) * 1/2
    const double p = static_cast<double>(above2) / static_cast<double>(n);
    const double expect = 3.0 / (2.0 * M_PI);
    const double sigma = std::sqrt(expect * (1 - expect) / static_cast<double>(n));
    CHECK(std::abs(p - expect) <= 3.5 * sigma);
    CHECK(sampler.tail_mass() < 1e-6);
    CHECK_THROWS_AS(orbit::HaarSampler2(1, 1000.0), ConfigError);
}

TEST_CASE("short-vector mass decays toward the cusp scale") {
    orbit::HaarSampler2 sampler(7);
    int short_half = 0, short_quarter = 0, short_eighth = 0;
    for (int i = 0; i < 20000; ++i) {
        const double s = sampler.next().shortest(lattice::Norm::Max);
        if (s < 0.5) ++short_half;
        if (s < 0.25) ++short_quarter;
        if (s < 0.125) ++short_eighth;
    }
    CHECK(short_half > short_quarter);
    CHECK(short_quarter > short_eighth);
    CHECK(short_eighth < 500);
}

TEST_CASE("haar integral") {
    // constant surrogate integrates to itself with zero error
    const auto one = orbit::haar_integral(TestFunction::constant(1.0), 20000, 5);
    CHECK(one.mean == 1.0);
    CHECK(one.stderr == 0.0);

    // bump centered beyond the densest-lattice length has empty support
    const auto empty = orbit::haar_integral(TestFunction::shortest_bump(1.5, 0.2), 20000, 5);
    CHECK(empty.mean == 0.0);

    // bump matches the plane quadrature oracle
    const auto est = orbit::haar_integral(TestFunction::shortest_bump(0.8, 0.1), 400000, 99);
    const double oracle = bump_haar_oracle(0.8, 0.1);
    CHECK(est.stderr > 0.0);
    CHECK(std::abs(est.mean - oracle) <= 3.5 * est.stderr + 1e-4);

    // determinism per (seed, partitions)
    const auto again = orbit::haar_integral(TestFunction::shortest_bump(0.8, 0.1), 400000, 99);
    CHECK(again.mean == est.mean);
    CHECK(again.stderr == est.stderr);
}

TEST_CASE("window averages") {
    const OrbitConfig config{orbit::dio_basepoint2(), HorosphericalChart(FlowSpec::horocycle()),
                             50.0, TestFunction::shortest_bump(0.8, 0.1)};

    // constant observable averages to itself
    const OrbitConfig cconf{config.basepoint, config.chart, 50.0, TestFunction::constant(0.7)};
    CHECK(orbit::birkhoff_average(cconf, 64).value == doctest::Approx(0.7).epsilon(1e-14));

    // midpoint grid agrees with an independent loop at the same resolution
    const long long res = 257;
    double direct = 0.0;
    for (long long i = 0; i < res; ++i) {
        const double t = 50.0 * ((static_cast<double>(i) + 0.5) / static_cast<double>(res));
        direct += orbit::eval_at(config, {t});
    }
    direct /= static_cast<double>(res);
    CHECK(orbit::birkhoff_average(config, res).value == doctest::Approx(direct).epsilon(1e-12));

    // window average stays inside the range of f
    const auto q = orbit::birkhoff_average(config, 512);
    CHECK(q.value >= 0.0);
    CHECK(q.value <= config.f.sup_bound());

    // random-mode agrees with the grid at matching scale
    const auto mc = orbit::birkhoff_average_random(config, 200000, 11);
    CHECK(std::abs(mc.mean - q.value) <= 4.0 * mc.stderr + 0.02);
}

TEST_CASE("window average approaches the invariant mean at a generic basepoint") {
    const TestFunction f = TestFunction::shortest_bump(0.8, 0.1);
    const auto haar = orbit::haar_integral(f, 400000, 3);
    const OrbitConfig config{orbit::dio_basepoint2(), HorosphericalChart(FlowSpec::horocycle()),
                             2000.0, f};
    const auto nu = orbit::birkhoff_average_adaptive(config, 1e-3, 1 << 16);
    CHECK(std::abs(nu.value - haar.mean) < 0.05);
}

TEST_CASE("character averages") {
    const TestFunction f = TestFunction::shortest_bump(0.8, 0.1);
    const OrbitConfig config{orbit::dio_basepoint2(), HorosphericalChart(FlowSpec::horocycle()),
                             200.0, f};
    const double haar_mean = 0.134;  // any centering constant works here

    // frequency zero reproduces the centered window average bit-for-bit
    const auto plain = orbit::birkhoff_average(config, 1024);
    const auto zero = orbit::character_average(config, orbit::Character{{0.0}}, haar_mean, 1024);
    CHECK(zero.value.real() == plain.value - haar_mean);
    CHECK(zero.value.imag() == 0.0);

    // centered constant surrogate vanishes
    const OrbitConfig cconf{config.basepoint, config.chart, 200.0, TestFunction::constant(0.4)};
    const auto cc = orbit::character_average(cconf, orbit::Character{{2.7}}, 0.4, 512);
    CHECK(std::abs(cc.value) < 1e-13);

    CHECK_THROWS_AS(orbit::character_average(config, orbit::Character{{1.0, 2.0}}, 0.0, 64),
                    std::invalid_argument);
}

TEST_CASE("arithmetic sums over spaced integer points") {
    const TestFunction f = TestFunction::shortest_bump(0.8, 0.1);
    const OrbitConfig config{orbit::dio_basepoint2(), HorosphericalChart(FlowSpec::horocycle()),
                             500.0, f};

    // spacing 1 is the plain integer-time sum
    const auto s1 = orbit::arithmetic_sum(config, {1}, 0.134);
    double direct = 0.0;
    for (long long k = 1; k <= 500; ++k) direct += orbit::eval_at(config, {static_cast<double>(k)});
    CHECK(s1.sum == doctest::Approx(direct).epsilon(1e-12));
    CHECK(s1.terms == 500);

    // constant surrogate counts lattice points exactly
    const OrbitConfig cconf{config.basepoint, config.chart, 500.0, TestFunction::constant(1.0)};
    const auto s7 = orbit::arithmetic_sum(cconf, {7}, 1.0);
    CHECK(s7.sum == static_cast<double>(500 / 7));
    CHECK(s7.terms == 500 / 7);

    // spaced-window deviation shrinks relative to T as the window grows
    const TestFunction fb = TestFunction::shortest_bump(0.8, 0.1);
    const auto haar = orbit::haar_integral(fb, 400000, 17);
    const OrbitConfig small{orbit::dio_basepoint2(), config.chart, 500.0, fb};
    const OrbitConfig large{orbit::dio_basepoint2(), config.chart, 8000.0, fb};
    const auto dev_small = orbit::arithmetic_sum(small, {5}, haar.mean);
    const auto dev_large = orbit::arithmetic_sum(large, {5}, haar.mean);
    CHECK(dev_large.deviation / 8000.0 < dev_small.deviation / 500.0);

    // non-abelian chart is rejected
    const HorosphericalChart full(FlowSpec({1.0, 0.0, -1.0}, {1, 1, 1}));
    Eigen::MatrixXd id3 = Eigen::MatrixXd::Identity(3, 3);
    const OrbitConfig bad{GroupElement(id3), full, 100.0, TestFunction::constant(1.0)};
    CHECK_THROWS_AS(orbit::arithmetic_sum(bad, {2, 2, 2}, 1.0), UnsupportedConfigError);
}

TEST_CASE("diophantine profile") {
    const HorosphericalChart horo(FlowSpec::horocycle());
    const TestFunction f = TestFunction::constant(1.0);

    // identity basepoint: the chart-invariant integral vector pins the
    // profile at 1, so delta_hat = 0
    const OrbitConfig ident{GroupElement::identity(2), horo, 1000.0, f};
    const auto p0 = orbit::diophantine_profile(ident, 20, 400);
    CHECK(p0.min_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p0.delta_hat == doctest::Approx(0.0).epsilon(1e-9));

    // generic shear: grows with T, matches a direct evaluation oracle
    const OrbitConfig dio{orbit::dio_basepoint2(), horo, 1000.0, f};
    const auto p1 = orbit::diophantine_profile(dio, 8, 400);
    CHECK(p1.min_sup > 1.0);

    double oracle = std::numeric_limits<double>::infinity();
    const double s = std::sqrt(2.0);
    for (int a = -8; a <= 8; ++a) {
        for (int b = -8; b <= 8; ++b) {
            if ((a == 0 && b == 0) || std::gcd(std::abs(a), std::abs(b)) != 1) continue;
            // w g0 = (a + s b, b); u(t) sends it to (a + s b, (a + s b) t + b)
            const double v1 = a + s * b;
            double best = 0.0;
            for (long long i = 0; i < 400; ++i) {
                const double t = 1000.0 * ((static_cast<double>(i) + 0.5) / 400.0);
                best = std::max(best, std::max(std::abs(v1), std::abs(v1 * t + b)));
            }
            oracle = std::min(oracle, best);
        }
    }
    CHECK(p1.min_sup == doctest::Approx(oracle).epsilon(1e-9));

    // profile is monotone nondecreasing in T
    const OrbitConfig dio_small{orbit::dio_basepoint2(), horo, 100.0, f};
    CHECK(orbit::diophantine_profile(dio_small, 8, 400).min_sup <= p1.min_sup + 1e-12);
}

TEST_CASE("nondivergence fractions") {
    const HorosphericalChart horo(FlowSpec::horocycle());
    const GroupElement id = GroupElement::identity(2);

    // identity basepoint renormalized by a_log R: shortest max-norm is
    // 1/sqrt(R) at every window point
    const double r = 4.0;
    CHECK(orbit::nondiv_fraction(id, horo, 100.0, r, 0.6, 200) == doctest::Approx(1.0));
    CHECK(orbit::nondiv_fraction(id, horo, 100.0, r, 0.45, 200) == doctest::Approx(0.0));

    // monotone in eps
    const GroupElement dio = orbit::dio_basepoint2();
    double prev = 0.0;
    for (double eps : {0.05, 0.1, 0.2, 0.4}) {
        const double frac = orbit::nondiv_fraction(dio, horo, 1000.0, 10.0, eps, 400);
        CHECK(frac >= prev - 1e-12);
        CHECK(frac >= 0.0);
        CHECK(frac <= 1.0);
        prev = frac;
    }
    CHECK_THROWS_AS(orbit::nondiv_fraction(id, horo, 10.0, 20.0, 0.5, 10), std::invalid_argument);
}

TEST_CASE("correlation under the diagonal flow") {
    const TestFunction f = TestFunction::shortest_bump(0.8, 0.15);

    // t = 0 with equal observables is a variance
    const auto var = orbit::correlation(f, f, 0.0, 40000, 21);
    CHECK(var.mean >= -1e-12);

    // constant second factor centers away
    const auto flat = orbit::correlation(f, TestFunction::constant(1.0), 1.0, 40000, 21);
    CHECK(std::abs(flat.mean) <= 2.0 * flat.stderr + 1e-12);

    // mixing trend: |corr| at t = 4 below |corr| at t = 0 plus noise
    const auto c0 = orbit::correlation(f, f, 0.0, 60000, 33);
    const auto c4 = orbit::correlation(f, f, 4.0, 60000, 33);
    CHECK(std::abs(c4.mean) <= std::abs(c0.mean) + 2.0 * (c0.stderr + c4.stderr));
}

TEST_CASE("log-log rate fits") {
    const std::vector<double> xs{10.0, 100.0, 1000.0, 10000.0};
    std::vector<double> inv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) inv[i] = 1.0 / xs[i];
    auto fit = orbit::rate_fit(xs, inv);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    std::vector<double> flat(xs.size(), 3.5);
    fit = orbit::rate_fit(xs, flat);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));

    // synthetic noisy power law
    std::vector<double> noisy(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        noisy[i] = 2.0 * std::pow(xs[i], -0.5) * (1.0 + 0.01 * std::sin(static_cast<double>(i)));
    }
    fit = orbit::rate_fit(xs, noisy);
    CHECK(std::abs(fit.slope + 0.5) < 0.05);

    CHECK_THROWS_AS(orbit::rate_fit({1.0, 2.0}, {1.0, 1.0}), InsufficientDataError);
    CHECK_THROWS_AS(orbit::rate_fit({1.0, 2.0, 3.0}, {-1.0, -1.0, 1.0}), InsufficientDataError);
}

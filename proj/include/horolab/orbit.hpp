#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "horolab/common.hpp"
#include "horolab/flow.hpp"
#include "horolab/group.hpp"
#include "horolab/lattice.hpp"

namespace horolab::orbit {

/// Observable on the lattice space. The stock family is bumps in the
/// Euclidean shortest-vector length: Gamma-invariant, rotation-invariant in
/// the frame coordinate (so integrals reduce to plane quadrature), and
/// compactly supported whenever center - width > 0.
class TestFunction {
  public:
    static TestFunction shortest_bump(double center, double width);
    static TestFunction constant(double value);

    TestFunction product(const TestFunction& other) const;
    TestFunction sum(const TestFunction& other) const;

    double operator()(const lattice::LatticePoint& x) const { return eval_(x); }

    double sup_bound() const { return sup_; }
    bool is_constant() const { return constant_; }
    double constant_value() const { return const_value_; }
    const std::string& description() const { return desc_; }

  private:
    TestFunction(std::function<double(const lattice::LatticePoint&)> eval, double sup,
                 std::string desc, bool constant = false, double const_value = 0.0);

    std::function<double(const lattice::LatticePoint&)> eval_;
    double sup_ = 1.0;
    std::string desc_;
    bool constant_ = false;
    double const_value_ = 0.0;
};

/// Smooth flat-edged bump profile: exp(1 - 1/(1-r^2)) on |r| < 1, else 0.
double bump_profile(double r);

/// n(x) a(y) k(theta) representative of the frame with plane coordinates
/// x + iy and frame angle theta.
group::GroupElement frame_rep2(double x, double y, double theta = 0.0);

/// Lower shear [[1,0],[s,1]]; with a badly approximable s this is the stock
/// generic basepoint for orbit experiments.
group::GroupElement lower_shear2(double s);

/// sqrt(2) lower shear: the documented generic basepoint.
group::GroupElement dio_basepoint2();

/// i.i.d. sampler for the normalized invariant measure on the n = 2 lattice
/// space: (x, y) from density (3/pi) dx dy / y^2 on the fundamental domain
/// via rejection, truncated at y_max; frame angle uniform on [0, pi).
class HaarSampler2 {
  public:
    explicit HaarSampler2(std::uint64_t seed, double y_max = 1e7);

    struct Coords {
        double x, y, theta;
    };
    Coords next_coords();
    lattice::LatticePoint next();

    double tail_mass() const { return tail_mass_; }
    std::uint64_t proposals() const { return proposals_; }
    std::uint64_t accepted() const { return accepted_; }

  private:
    Rng rng_;
    double y_max_;
    double tail_mass_;
    std::uint64_t proposals_ = 0;
    std::uint64_t accepted_ = 0;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr = 0.0;
};

/// Monte Carlo mean of f over the invariant probability measure (n = 2).
/// Deterministic for fixed (seed, partitions); partials combine in
/// partition order with compensated sums.
MeanStderr haar_integral(const TestFunction& f, std::uint64_t count, std::uint64_t seed,
                         unsigned partitions = 8, double y_max = 1e7);

/// One orbit experiment: basepoint, chart, window scale, observable.
struct OrbitConfig {
    group::GroupElement basepoint;
    flow::HorosphericalChart chart;
    double T = 10.0;
    TestFunction f;
};

double eval_at(const OrbitConfig& config, const std::vector<double>& t);

struct QuadratureResult {
    double value = 0.0;
    double quad_error = 0.0;  // |value - value at half resolution|
    long long resolution = 0;
    std::uint64_t evaluations = 0;
};

/// Midpoint-grid window average (1/|B_T|) int_{B_T} f(x0 u(t)) dt.
QuadratureResult birkhoff_average(const OrbitConfig& config, long long resolution_per_side,
                                  unsigned partitions = 8);

/// Doubles the grid until the doubling estimate drops below target_error
/// (or the resolution cap); reports both the value and the estimate.
QuadratureResult birkhoff_average_adaptive(const OrbitConfig& config, double target_error,
                                           long long max_resolution_per_side = 1 << 21,
                                           unsigned partitions = 8);

MeanStderr birkhoff_average_random(const OrbitConfig& config, std::uint64_t count,
                                   std::uint64_t seed, unsigned partitions = 8);

struct Character {
    std::vector<double> frequency;  // psi(t) = exp(i a . t)
};

struct ComplexQuadrature {
    std::complex<double> value{0.0, 0.0};
    double quad_error = 0.0;
    long long resolution = 0;
};

/// Character-twisted centered window average
/// (1/|B_T|) int_{B_T} psi(t) (f(x0 u(t)) - haar_mean) dt.
ComplexQuadrature character_average(const OrbitConfig& config, const Character& psi,
                                    double haar_mean, long long resolution_per_side,
                                    unsigned partitions = 8);

struct ArithmeticSumResult {
    double sum = 0.0;
    double prediction = 0.0;
    double deviation = 0.0;
    std::uint64_t terms = 0;
};

/// Lattice-point sum over the spaced integer grid K.k inside (0,T]^d,
/// against the invariant-mean prediction T^d/|K| * haar_mean.
/// Requires an abelian chart.
ArithmeticSumResult arithmetic_sum(const OrbitConfig& config, const std::vector<long long>& spacing,
                                   double haar_mean);

struct DiophantineProfile {
    double min_sup = 0.0;    // min over primitive w of max over the grid
    double delta_hat = 0.0;  // log(min_sup) / log(T)
    int height = 0;
    std::uint64_t vectors = 0;
};

/// Orbit-stretch profile of the basepoint: for every primitive integral w
/// of degree j <= n-1 with sup norm <= height, the max over a grid in B_T
/// of ||w g0 u(t)||; reports the min over w. Truncated at the given height,
/// so the true infimum may be smaller.
DiophantineProfile diophantine_profile(const OrbitConfig& config, int height,
                                       long long grid_resolution);

/// Fraction of grid points t in [0,1]^d whose renormalized image
/// x0 a_{log T} u(t) a_{-log T} a_{log R} leaves L_eps.
double nondiv_fraction(const group::GroupElement& basepoint, const flow::HorosphericalChart& chart,
                       double T, double R, double eps, long long resolution_per_side);

/// Monte Carlo estimate of int f1(x a_t) f2(x) - int f1 int f2 with shared
/// samples across t values (n = 2); stderr from batch means.
MeanStderr correlation(const TestFunction& f1, const TestFunction& f2, double t,
                       std::uint64_t count, std::uint64_t seed,
                       const flow::FlowSpec& spec = flow::FlowSpec::horocycle(),
                       unsigned partitions = 8, double y_max = 1e7);

struct RateReport {
    std::vector<double> abscissas;
    std::vector<double> values;
    std::vector<double> stderrs;  // optional, filled by the caller
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
    int used = 0;
};

/// Least-squares slope of log|value| against log(abscissa). Nonpositive
/// values are dropped; fewer than 3 surviving points is an error.
RateReport rate_fit(const std::vector<double>& abscissas, const std::vector<double>& values);

}  // namespace horolab::orbit

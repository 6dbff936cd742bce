#include "horolab/orbit.hpp"

#include <algorithm>
#include <cmath>

namespace horolab::orbit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// midpoint coordinates of linear grid cell `index` in a res^d grid over the
// box with the given sides
std::vector<double> grid_point(std::uint64_t index, long long res, const std::vector<double>& sides) {
    std::vector<double> t(sides.size());
    for (std::size_t k = sides.size(); k-- > 0;) {
        const long long i = static_cast<long long>(index % static_cast<std::uint64_t>(res));
        index /= static_cast<std::uint64_t>(res);
        t[k] = sides[k] * ((static_cast<double>(i) + 0.5) / static_cast<double>(res));
    }
    return t;
}

std::uint64_t grid_size(long long res, int d, std::uint64_t budget) {
    double total = 1.0;
    for (int k = 0; k < d; ++k) total *= static_cast<double>(res);
    if (total > static_cast<double>(budget)) {
        throw ResourceLimitError("grid of ~" + std::to_string(total) +
                                 " points exceeds the work budget");
    }
    return static_cast<std::uint64_t>(total);
}

struct PairSum {
    KahanSum sum;
    KahanSum sumsq;
    std::uint64_t n = 0;
};

MeanStderr combine_mean_stderr(const std::vector<PairSum>& parts) {
    KahanSum total, totalsq;
    std::uint64_t n = 0;
    for (const auto& p : parts) {
        total.add(p.sum.value());
        totalsq.add(p.sumsq.value());
        n += p.n;
    }
    MeanStderr out;
    if (n == 0) return out;
    out.mean = total.value() / static_cast<double>(n);
    if (n > 1) {
        const double var =
            std::max(0.0, (totalsq.value() - total.value() * out.mean) / static_cast<double>(n - 1));
        out.stderr = std::sqrt(var / static_cast<double>(n));
    }
    return out;
}

}  // namespace

double bump_profile(double r) {
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

TestFunction::TestFunction(std::function<double(const lattice::LatticePoint&)> eval, double sup,
                           std::string desc, bool constant, double const_value)
    : eval_(std::move(eval)), sup_(sup), desc_(std::move(desc)), constant_(constant),
      const_value_(const_value) {}

TestFunction TestFunction::shortest_bump(double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("shortest_bump: width must be positive");
    return TestFunction(
        [center, width](const lattice::LatticePoint& x) {
            return bump_profile((x.shortest(lattice::Norm::Euclidean) - center) / width);
        },
        1.0, "bump(" + std::to_string(center) + "," + std::to_string(width) + ")");
}

TestFunction TestFunction::constant(double value) {
    return TestFunction([value](const lattice::LatticePoint&) { return value; }, std::abs(value),
                        "const(" + std::to_string(value) + ")", true, value);
}

TestFunction TestFunction::product(const TestFunction& other) const {
    auto a = eval_;
    auto b = other.eval_;
    return TestFunction([a, b](const lattice::LatticePoint& x) { return a(x) * b(x); },
                        sup_ * other.sup_, desc_ + "*" + other.desc_,
                        constant_ && other.constant_, const_value_ * other.const_value_);
}

TestFunction TestFunction::sum(const TestFunction& other) const {
    auto a = eval_;
    auto b = other.eval_;
    return TestFunction([a, b](const lattice::LatticePoint& x) { return a(x) + b(x); },
                        sup_ + other.sup_, desc_ + "+" + other.desc_,
                        constant_ && other.constant_, const_value_ + other.const_value_);
}

group::GroupElement frame_rep2(double x, double y, double theta) {
    if (!(y > 0.0)) throw std::invalid_argument("frame_rep2: need y > 0");
    const double ry = std::sqrt(y);
    Eigen::MatrixXd m(2, 2);
    m << ry, x / ry, 0.0, 1.0 / ry;
    if (theta != 0.0) {
        Eigen::MatrixXd k(2, 2);
        k << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
        m = m * k;
    }
    return group::GroupElement(m);
}

group::GroupElement lower_shear2(double s) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.0, s, 1.0;
    return group::GroupElement(m);
}

group::GroupElement dio_basepoint2() { return lower_shear2(std::sqrt(2.0)); }

HaarSampler2::HaarSampler2(std::uint64_t seed, double y_max)
    : rng_(seed), y_max_(y_max), tail_mass_(3.0 / kPi / y_max) {
    if (tail_mass_ > 1e-6) {
        throw ConfigError("HaarSampler2: y_max misses more than 1e-6 of the measure");
    }
}

HaarSampler2::Coords HaarSampler2::next_coords() {
    const double y0 = std::sqrt(3.0) / 2.0;
    for (;;) {
        ++proposals_;
        const double x = rng_.uniform(-0.5, 0.5);
        // y from density prop. to 1/y^2 on [y0, y_max]
        const double u = rng_.uniform01();
        const double y = 1.0 / (1.0 / y0 - u * (1.0 / y0 - 1.0 / y_max_));
        if (x * x + y * y < 1.0) continue;
        ++accepted_;
        const double theta = kPi * rng_.uniform01();
        return {x, y, theta};
    }
}

lattice::LatticePoint HaarSampler2::next() {
    const Coords c = next_coords();
    return lattice::LatticePoint(frame_rep2(c.x, c.y, c.theta));
}

MeanStderr haar_integral(const TestFunction& f, std::uint64_t count, std::uint64_t seed,
                         unsigned partitions, double y_max) {
    if (count < 1) throw std::invalid_argument("haar_integral: need count >= 1");
    auto parts = map_partitions<PairSum>(
        count, partitions, [&](unsigned p, std::uint64_t b, std::uint64_t e) {
            HaarSampler2 sampler(partition_seed(seed, p), y_max);
            PairSum acc;
            for (std::uint64_t i = b; i < e; ++i) {
                const double v = f(sampler.next());
                acc.sum.add(v);
                acc.sumsq.add(v * v);
                ++acc.n;
            }
            return acc;
        });
    return combine_mean_stderr(parts);
}

double eval_at(const OrbitConfig& config, const std::vector<double>& t) {
    return config.f(lattice::LatticePoint(config.basepoint * config.chart.embed(t)));
}

namespace {

// one midpoint-grid pass: sums of f and (optionally) of psi-weighted f and
// bare psi, in partition order
struct WindowSums {
    KahanSum f_sum;
    KahanSum re_f, im_f;
    KahanSum re_1, im_1;
    std::uint64_t n = 0;
};

WindowSums window_pass(const OrbitConfig& config, long long res, const Character* psi,
                       unsigned partitions) {
    const flow::BallSpec box = flow::ball_box(config.chart, config.T);
    const int d = config.chart.dim();
    const std::uint64_t total = grid_size(res, d, work_budget());

    auto parts = map_partitions<WindowSums>(
        total, partitions, [&](unsigned, std::uint64_t b, std::uint64_t e) {
            WindowSums acc;
            for (std::uint64_t i = b; i < e; ++i) {
                const std::vector<double> t = grid_point(i, res, box.sides);
                const double v = eval_at(config, t);
                acc.f_sum.add(v);
                if (psi) {
                    double phase = 0.0;
                    for (std::size_t k = 0; k < t.size(); ++k) {
                        phase += psi->frequency[k] * t[k];
                    }
                    const double c = std::cos(phase);
                    const double s = std::sin(phase);
                    acc.re_f.add(c * v);
                    acc.im_f.add(s * v);
                    acc.re_1.add(c);
                    acc.im_1.add(s);
                }
                ++acc.n;
            }
            return acc;
        });

    WindowSums out;
    for (const auto& p : parts) {
        out.f_sum.add(p.f_sum.value());
        out.re_f.add(p.re_f.value());
        out.im_f.add(p.im_f.value());
        out.re_1.add(p.re_1.value());
        out.im_1.add(p.im_1.value());
        out.n += p.n;
    }
    return out;
}

}  // namespace

QuadratureResult birkhoff_average(const OrbitConfig& config, long long resolution_per_side,
                                  unsigned partitions) {
    if (resolution_per_side < 1) {
        throw std::invalid_argument("birkhoff_average: need resolution >= 1");
    }
    QuadratureResult out;
    out.resolution = resolution_per_side;
    const WindowSums fine = window_pass(config, resolution_per_side, nullptr, partitions);
    out.value = fine.f_sum.value() / static_cast<double>(fine.n);
    out.evaluations = fine.n;
    if (resolution_per_side >= 2) {
        const long long half = resolution_per_side / 2;
        const WindowSums coarse = window_pass(config, half, nullptr, partitions);
        out.quad_error = std::abs(out.value - coarse.f_sum.value() / static_cast<double>(coarse.n));
        out.evaluations += coarse.n;
    }
    return out;
}

QuadratureResult birkhoff_average_adaptive(const OrbitConfig& config, double target_error,
                                           long long max_resolution_per_side, unsigned partitions) {
    const int d = config.chart.dim();
    long long res = d >= 3 ? 8 : (d == 2 ? 32 : 256);
    QuadratureResult out;
    for (;;) {
        out = birkhoff_average(config, res, partitions);
        if (out.quad_error <= target_error || res >= max_resolution_per_side) return out;
        res = std::min(res * 2, max_resolution_per_side);
    }
}

MeanStderr birkhoff_average_random(const OrbitConfig& config, std::uint64_t count,
                                   std::uint64_t seed, unsigned partitions) {
    const flow::BallSpec box = flow::ball_box(config.chart, config.T);
    const int d = config.chart.dim();
    auto parts = map_partitions<PairSum>(
        count, partitions, [&](unsigned p, std::uint64_t b, std::uint64_t e) {
            Rng rng(partition_seed(seed, p));
            PairSum acc;
            std::vector<double> t(static_cast<std::size_t>(d));
            for (std::uint64_t i = b; i < e; ++i) {
                for (int k = 0; k < d; ++k) {
                    t[static_cast<std::size_t>(k)] =
                        rng.uniform01() * box.sides[static_cast<std::size_t>(k)];
                }
                const double v = eval_at(config, t);
                acc.sum.add(v);
                acc.sumsq.add(v * v);
                ++acc.n;
            }
            return acc;
        });
    return combine_mean_stderr(parts);
}

ComplexQuadrature character_average(const OrbitConfig& config, const Character& psi,
                                    double haar_mean, long long resolution_per_side,
                                    unsigned partitions) {
    if (static_cast<int>(psi.frequency.size()) != config.chart.dim()) {
        throw std::invalid_argument("character_average: frequency dimension mismatch");
    }
    auto twisted = [&](long long res) -> std::complex<double> {
        const WindowSums s = window_pass(config, res, &psi, partitions);
        const double n = static_cast<double>(s.n);
        return {s.re_f.value() / n - haar_mean * (s.re_1.value() / n),
                s.im_f.value() / n - haar_mean * (s.im_1.value() / n)};
    };

    ComplexQuadrature out;
    out.resolution = resolution_per_side;
    out.value = twisted(resolution_per_side);
    if (resolution_per_side >= 2) {
        out.quad_error = std::abs(out.value - twisted(resolution_per_side / 2));
    }
    return out;
}

ArithmeticSumResult arithmetic_sum(const OrbitConfig& config, const std::vector<long long>& spacing,
                                   double haar_mean) {
    if (!config.chart.spec().is_abelian()) {
        throw UnsupportedConfigError("arithmetic_sum: needs an abelian chart");
    }
    const int d = config.chart.dim();
    if (static_cast<int>(spacing.size()) != d) {
        throw std::invalid_argument("arithmetic_sum: spacing dimension mismatch");
    }
    double det = 1.0;
    std::vector<long long> counts(static_cast<std::size_t>(d));
    double total = 1.0;
    for (int k = 0; k < d; ++k) {
        const long long s = spacing[static_cast<std::size_t>(k)];
        if (s < 1 || static_cast<double>(s) > config.T) {
            throw std::invalid_argument("arithmetic_sum: need 1 <= K_i <= T");
        }
        counts[static_cast<std::size_t>(k)] =
            static_cast<long long>(std::floor(config.T / static_cast<double>(s) + 1e-12));
        det *= static_cast<double>(s);
        total *= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    }
    if (total > static_cast<double>(work_budget())) {
        throw ResourceLimitError("arithmetic_sum: lattice sum exceeds the work budget");
    }

    ArithmeticSumResult out;
    KahanSum acc;
    std::vector<long long> idx(static_cast<std::size_t>(d), 1);
    std::vector<double> t(static_cast<std::size_t>(d));
    bool nonempty = true;
    for (int k = 0; k < d; ++k) {
        if (counts[static_cast<std::size_t>(k)] < 1) nonempty = false;
    }
    if (nonempty) {
        for (;;) {
            for (int k = 0; k < d; ++k) {
                t[static_cast<std::size_t>(k)] = static_cast<double>(
                    spacing[static_cast<std::size_t>(k)] * idx[static_cast<std::size_t>(k)]);
            }
            acc.add(eval_at(config, t));
            ++out.terms;
            int k = d - 1;
            while (k >= 0 && idx[static_cast<std::size_t>(k)] == counts[static_cast<std::size_t>(k)]) {
                idx[static_cast<std::size_t>(k)] = 1;
                --k;
            }
            if (k < 0) break;
            ++idx[static_cast<std::size_t>(k)];
        }
    }
    out.sum = acc.value();
    out.prediction = std::pow(config.T, d) / det * haar_mean;
    out.deviation = std::abs(out.sum - out.prediction);
    return out;
}

DiophantineProfile diophantine_profile(const OrbitConfig& config, int height,
                                       long long grid_resolution) {
    if (height < 1) throw std::invalid_argument("diophantine_profile: need height >= 1");
    const int n = config.basepoint.dim();
    const flow::BallSpec box = flow::ball_box(config.chart, config.T);
    const int d = config.chart.dim();
    const std::uint64_t total = grid_size(grid_resolution, d, work_budget());

    struct Degree {
        std::vector<group::ExteriorVector> vectors;
        std::vector<double> running_max;
    };
    std::vector<Degree> degrees;
    std::uint64_t vector_count = 0;
    for (int j = 1; j <= n - 1; ++j) {
        Degree deg;
        deg.vectors = group::enumerate_primitive(j, n, height);
        if (deg.vectors.empty()) {
            throw std::invalid_argument("diophantine_profile: empty enumeration");
        }
        deg.running_max.assign(deg.vectors.size(), 0.0);
        vector_count += deg.vectors.size();
        degrees.push_back(std::move(deg));
    }

    for (std::uint64_t i = 0; i < total; ++i) {
        const std::vector<double> t = grid_point(i, grid_resolution, box.sides);
        const group::GroupElement m = config.basepoint * config.chart.embed(t);
        for (auto& deg : degrees) {
            for (std::size_t w = 0; w < deg.vectors.size(); ++w) {
                const double norm = group::sup_norm(group::exterior_action(deg.vectors[w], m));
                deg.running_max[w] = std::max(deg.running_max[w], norm);
            }
        }
    }

    DiophantineProfile out;
    out.height = height;
    out.vectors = vector_count;
    out.min_sup = std::numeric_limits<double>::infinity();
    for (const Degree& deg : degrees) {
        for (double v : deg.running_max) out.min_sup = std::min(out.min_sup, v);
    }
    out.delta_hat = std::log(out.min_sup) / std::log(config.T);
    return out;
}

double nondiv_fraction(const group::GroupElement& basepoint, const flow::HorosphericalChart& chart,
                       double T, double R, double eps, long long resolution_per_side) {
    if (!(T > R && R > 1.0)) throw std::invalid_argument("nondiv_fraction: need T > R > 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("nondiv_fraction: need 0 < eps < 1");
    const int d = chart.dim();
    const std::uint64_t total = grid_size(resolution_per_side, d, work_budget());
    const group::GroupElement a_log_r = chart.spec().diag_flow(std::log(R));

    // a_{log T} u(t) a_{-log T} applied slot-wise to avoid exp overflow
    std::vector<double> scale(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        scale[static_cast<std::size_t>(k)] = std::pow(T, chart.side_exponent(k));
    }

    std::uint64_t outside = 0;
    const std::vector<double> unit_sides(static_cast<std::size_t>(d), 1.0);
    for (std::uint64_t i = 0; i < total; ++i) {
        std::vector<double> t = grid_point(i, resolution_per_side, unit_sides);
        for (int k = 0; k < d; ++k) {
            t[static_cast<std::size_t>(k)] *= scale[static_cast<std::size_t>(k)];
        }
        const group::GroupElement g = basepoint * chart.embed(t) * a_log_r;
        if (!lattice::in_L_eps(g, eps)) ++outside;
    }
    return static_cast<double>(outside) / static_cast<double>(total);
}

MeanStderr correlation(const TestFunction& f1, const TestFunction& f2, double t,
                       std::uint64_t count, std::uint64_t seed, const flow::FlowSpec& spec,
                       unsigned partitions, double y_max) {
    if (spec.n() != 2) throw UnsupportedConfigError("correlation: Haar sampling is n = 2 only");
    const group::GroupElement a_t = spec.diag_flow(t);

    struct CorrSums {
        KahanSum a, b, ab;
        std::uint64_t n = 0;
    };
    auto parts = map_partitions<CorrSums>(
        count, partitions, [&](unsigned p, std::uint64_t begin, std::uint64_t end) {
            HaarSampler2 sampler(partition_seed(seed, p), y_max);
            CorrSums acc;
            for (std::uint64_t i = begin; i < end; ++i) {
                const lattice::LatticePoint x = sampler.next();
                const lattice::LatticePoint xa(x.rep() * a_t);
                const double va = f1(xa);
                const double vb = f2(x);
                acc.a.add(va);
                acc.b.add(vb);
                acc.ab.add(va * vb);
                ++acc.n;
            }
            return acc;
        });

    KahanSum a_tot, b_tot, ab_tot;
    std::uint64_t n = 0;
    std::vector<double> batch;
    for (const auto& p : parts) {
        a_tot.add(p.a.value());
        b_tot.add(p.b.value());
        ab_tot.add(p.ab.value());
        n += p.n;
        if (p.n > 0) {
            const double np = static_cast<double>(p.n);
            batch.push_back(p.ab.value() / np - (p.a.value() / np) * (p.b.value() / np));
        }
    }
    MeanStderr out;
    const double nd = static_cast<double>(n);
    out.mean = ab_tot.value() / nd - (a_tot.value() / nd) * (b_tot.value() / nd);
    if (batch.size() > 1) {
        double mean_b = 0.0;
        for (double v : batch) mean_b += v;
        mean_b /= static_cast<double>(batch.size());
        double var = 0.0;
        for (double v : batch) var += (v - mean_b) * (v - mean_b);
        var /= static_cast<double>(batch.size() - 1);
        out.stderr = std::sqrt(var / static_cast<double>(batch.size()));
    }
    return out;
}

RateReport rate_fit(const std::vector<double>& abscissas, const std::vector<double>& values) {
    if (abscissas.size() != values.size()) {
        throw std::invalid_argument("rate_fit: length mismatch");
    }
    RateReport out;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < abscissas.size(); ++i) {
        if (abscissas[i] > 0.0 && values[i] > 0.0) {
            lx.push_back(std::log(abscissas[i]));
            ly.push_back(std::log(values[i]));
            out.abscissas.push_back(abscissas[i]);
            out.values.push_back(values[i]);
        }
    }
    out.used = static_cast<int>(lx.size());
    if (out.used < 3) {
        throw InsufficientDataError("rate_fit: fewer than 3 positive pairs");
    }
    const double n = static_cast<double>(out.used);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < out.used; ++i) {
        sx += lx[static_cast<std::size_t>(i)];
        sy += ly[static_cast<std::size_t>(i)];
        sxx += lx[static_cast<std::size_t>(i)] * lx[static_cast<std::size_t>(i)];
        sxy += lx[static_cast<std::size_t>(i)] * ly[static_cast<std::size_t>(i)];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InsufficientDataError("rate_fit: degenerate abscissas");
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0.0;
    for (int i = 0; i < out.used; ++i) {
        const double r = ly[static_cast<std::size_t>(i)] -
                         (out.intercept + out.slope * lx[static_cast<std::size_t>(i)]);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / n);
    return out;
}

}  // namespace horolab::orbit

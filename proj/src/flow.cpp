#include "horolab/flow.hpp"

#include <cmath>

namespace horolab::flow {

FlowSpec::FlowSpec(std::vector<double> lambdas, std::vector<int> mults) {
    if (lambdas.size() != mults.size() || lambdas.empty()) {
        throw std::invalid_argument("FlowSpec: lambdas and mults must be nonempty and equal length");
    }
    double weighted = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (mults[i] < 1) throw std::invalid_argument("FlowSpec: multiplicities must be positive");
        if (i > 0 && lambdas[i] > lambdas[i - 1]) {
            throw std::invalid_argument("FlowSpec: lambdas must be nonincreasing");
        }
        weighted += lambdas[i] * mults[i];
        scale = std::max(scale, std::abs(lambdas[i]) * mults[i]);
        // merge adjacent equal-lambda blocks so block structure matches the
        // centralizer decomposition
        if (i > 0 && lambdas[i] == lambdas[i - 1]) {
            blocks_.back().second += mults[i];
        } else {
            blocks_.emplace_back(lambdas[i], mults[i]);
        }
        n_ += mults[i];
    }
    if (std::abs(weighted) > 1e-12 * std::max(1.0, scale)) {
        throw std::invalid_argument("FlowSpec: sum m_i lambda_i must vanish");
    }
    if (blocks_.size() < 2) {
        throw std::invalid_argument("FlowSpec: need at least two distinct lambdas");
    }
}

FlowSpec FlowSpec::abelian(int n, int m) {
    if (n < 2 || m < 1 || m >= n) throw std::invalid_argument("FlowSpec::abelian: need 1 <= m < n");
    const double nd = n;
    return FlowSpec({(nd - m) / nd, -m / nd}, {m, n - m});
}

int FlowSpec::dim_u() const {
    int sq = 0;
    for (const auto& b : blocks_) sq += b.second * b.second;
    return (n_ * n_ - sq) / 2;
}

double FlowSpec::exponent_p() const {
    double p = 0.0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
            p += blocks_[i].second * blocks_[j].second * (blocks_[i].first - blocks_[j].first);
        }
    }
    return p;
}

double FlowSpec::exponent_q() const {
    double q = 0.0;
    for (const auto& b : blocks_) {
        if (b.first < 0) q -= b.second * b.first;
    }
    return q;
}

group::GroupElement FlowSpec::diag_flow(double t) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    int row = 0;
    for (const auto& b : blocks_) {
        const double v = std::exp(t * b.first);
        for (int k = 0; k < b.second; ++k) m(row + k, row + k) = v;
        row += b.second;
    }
    return group::GroupElement(m);
}

nlohmann::ordered_json FlowSpec::to_json() const {
    auto ls = nlohmann::ordered_json::array();
    auto ms = nlohmann::ordered_json::array();
    for (const auto& b : blocks_) {
        ls.push_back(b.first);
        ms.push_back(b.second);
    }
    nlohmann::ordered_json j;
    j["lambdas"] = std::move(ls);
    j["mults"] = std::move(ms);
    return j;
}

FlowSpec FlowSpec::from_json(const nlohmann::ordered_json& j) {
    return FlowSpec(j.at("lambdas").get<std::vector<double>>(),
                    j.at("mults").get<std::vector<int>>());
}

HorosphericalChart::HorosphericalChart(FlowSpec spec) : spec_(std::move(spec)) {
    const int nb = spec_.num_blocks();
    std::vector<int> block_start(static_cast<std::size_t>(nb) + 1, 0);
    for (int b = 0; b < nb; ++b) block_start[static_cast<std::size_t>(b) + 1] = block_start[static_cast<std::size_t>(b)] + spec_.mult(b);

    std::vector<int> block_of(static_cast<std::size_t>(spec_.n()));
    for (int b = 0; b < nb; ++b) {
        for (int r = block_start[static_cast<std::size_t>(b)]; r < block_start[static_cast<std::size_t>(b) + 1]; ++r) {
            block_of[static_cast<std::size_t>(r)] = b;
        }
    }
    for (int r = 0; r < spec_.n(); ++r) {
        for (int c = 0; c < spec_.n(); ++c) {
            if (block_of[static_cast<std::size_t>(r)] < block_of[static_cast<std::size_t>(c)]) {
                slots_.emplace_back(r, c);
                exps_.push_back(spec_.lambda(block_of[static_cast<std::size_t>(r)]) -
                                spec_.lambda(block_of[static_cast<std::size_t>(c)]));
            }
        }
    }
    if (static_cast<int>(slots_.size()) != spec_.dim_u()) {
        throw std::logic_error("HorosphericalChart: slot count disagrees with dim U");
    }
}

double HorosphericalChart::contraction_exponent_from_slots() const {
    // every matrix column of a negative-eigenvalue block appears among the
    // slot columns, and each such column contracts by its own eigenvalue
    std::vector<char> seen(static_cast<std::size_t>(spec_.n()), 0);
    std::vector<double> col_lambda(static_cast<std::size_t>(spec_.n()), 0.0);
    {
        int col = 0;
        for (int b = 0; b < spec_.num_blocks(); ++b) {
            for (int k = 0; k < spec_.mult(b); ++k) {
                col_lambda[static_cast<std::size_t>(col++)] = spec_.lambda(b);
            }
        }
    }
    double q = 0.0;
    for (const auto& slot : slots_) {
        auto& mark = seen[static_cast<std::size_t>(slot.second)];
        if (mark) continue;
        mark = 1;
        q += std::max(0.0, -col_lambda[static_cast<std::size_t>(slot.second)]);
    }
    return q;
}

group::GroupElement HorosphericalChart::embed(const std::vector<double>& t) const {
    if (static_cast<int>(t.size()) != dim()) {
        throw std::invalid_argument("HorosphericalChart::embed: coordinate length != d");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(spec_.n(), spec_.n());
    for (std::size_t k = 0; k < slots_.size(); ++k) {
        m(slots_[k].first, slots_[k].second) = t[k];
    }
    return group::GroupElement(m);
}

BallSpec ball_box(const HorosphericalChart& chart, double T) {
    if (!(T > 1.0)) throw std::invalid_argument("ball_box: need T > 1");
    BallSpec box;
    box.T = T;
    box.sides.reserve(static_cast<std::size_t>(chart.dim()));
    for (int k = 0; k < chart.dim(); ++k) {
        box.sides.push_back(std::pow(T, chart.side_exponent(k)));
    }
    return box;
}

std::vector<std::vector<double>> sample_ball(const HorosphericalChart& chart, double T,
                                             const GridSampling& mode, bool symmetric,
                                             std::uint64_t budget) {
    const BallSpec box = ball_box(chart, T);
    const int d = chart.dim();
    const long long res = mode.resolution_per_side;
    if (res < 1) throw std::invalid_argument("sample_ball: resolution must be >= 1");
    double total = 1.0;
    for (int k = 0; k < d; ++k) total *= static_cast<double>(res);
    if (total > static_cast<double>(budget)) {
        throw ResourceLimitError("sample_ball: grid of ~" + std::to_string(total) +
                                 " points exceeds the work budget");
    }

    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<long long> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
        std::vector<double> t(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const double frac = (static_cast<double>(idx[static_cast<std::size_t>(k)]) + 0.5) / static_cast<double>(res);
            t[static_cast<std::size_t>(k)] = symmetric ? (2.0 * frac - 1.0) * box.sides[static_cast<std::size_t>(k)]
                                                       : frac * box.sides[static_cast<std::size_t>(k)];
        }
        out.push_back(std::move(t));
        int k = d - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == res - 1) {
            idx[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
    }
    return out;
}

std::vector<std::vector<double>> sample_ball(const HorosphericalChart& chart, double T,
                                             const RandomSampling& mode, bool symmetric) {
    const BallSpec box = ball_box(chart, T);
    const int d = chart.dim();
    Rng rng(mode.seed);
    std::vector<std::vector<double>> out;
    out.reserve(mode.count);
    for (std::uint64_t i = 0; i < mode.count; ++i) {
        std::vector<double> t(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const double frac = symmetric ? rng.uniform(-1.0, 1.0) : rng.uniform01();
            t[static_cast<std::size_t>(k)] = frac * box.sides[static_cast<std::size_t>(k)];
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace horolab::flow

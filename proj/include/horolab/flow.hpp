#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "horolab/common.hpp"
#include "horolab/group.hpp"

namespace horolab::flow {

/// Eigenvalue/multiplicity data (lambda_i, m_i) of the diagonal flow
/// a_t = exp(t diag(lambda_1 x m_1, ..., lambda_N x m_N)).
///
/// Invariants: lambdas nonincreasing, sum m_i lambda_i = 0 (unimodularity),
/// and at least two distinct lambdas so the expanded subgroup is nontrivial.
/// Adjacent blocks with equal lambda are merged on construction.
class FlowSpec {
  public:
    FlowSpec(std::vector<double> lambdas, std::vector<int> mults);

    /// Two-block family: lambda = (n-m)/n with multiplicity m and -m/n with
    /// multiplicity n-m. The expanded subgroup is abelian of dim m(n-m).
    static FlowSpec abelian(int n, int m);

    /// n = 2, m = 1 special case.
    static FlowSpec horocycle() { return abelian(2, 1); }

    int n() const { return n_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    double lambda(int block) const { return blocks_[static_cast<std::size_t>(block)].first; }
    int mult(int block) const { return blocks_[static_cast<std::size_t>(block)].second; }
    bool is_abelian() const { return blocks_.size() == 2; }

    /// dim U = (n^2 - sum m_i^2) / 2.
    int dim_u() const;

    /// Volume growth exponent of the expanding balls: vol B_T = T^p.
    /// Sum over chart slots of (lambda_rowblock - lambda_colblock); positive.
    double exponent_p() const;

    /// Worst contraction exponent of a_{log R} on wedge basis vectors:
    /// q = sum over lambda_i < 0 of -m_i lambda_i.
    double exponent_q() const;

    group::GroupElement diag_flow(double t) const;

    nlohmann::ordered_json to_json() const;
    static FlowSpec from_json(const nlohmann::ordered_json& j);

  private:
    std::vector<std::pair<double, int>> blocks_;
    int n_ = 0;
};

/// Coordinate chart for the block-upper unipotent subgroup expanded by the
/// flow: slot k is a matrix position (row, col) in the strictly-upper block
/// region, enumerated row-major. u(t) = identity + t placed in the slots.
class HorosphericalChart {
  public:
    explicit HorosphericalChart(FlowSpec spec);

    const FlowSpec& spec() const { return spec_; }
    int dim() const { return static_cast<int>(slots_.size()); }

    std::pair<int, int> slot(int k) const { return slots_[static_cast<std::size_t>(k)]; }

    /// lambda_{block(row)} - lambda_{block(col)} for slot k; conjugation by
    /// a_{log T} scales coordinate k by T^side_exponent(k).
    double side_exponent(int k) const { return exps_[static_cast<std::size_t>(k)]; }

    /// Contraction exponent recovered from the slot layout: each distinct
    /// slot column with a negative eigenvalue contributes -lambda once.
    /// Cross-check route for FlowSpec::exponent_q.
    double contraction_exponent_from_slots() const;

    group::GroupElement embed(const std::vector<double>& t) const;

  private:
    FlowSpec spec_;
    std::vector<std::pair<int, int>> slots_;
    std::vector<double> exps_;
};

/// Coordinate box of the expanding ball B_T pulled back to R^d:
/// side k = T^{side_exponent(k)}; the product of sides is T^p.
struct BallSpec {
    double T = 1.0;
    std::vector<double> sides;

    double volume() const {
        double v = 1.0;
        for (double s : sides) v *= s;
        return v;
    }
};

BallSpec ball_box(const HorosphericalChart& chart, double T);

struct GridSampling {
    long long resolution_per_side = 16;
};

struct RandomSampling {
    std::uint64_t seed = 0;
    std::uint64_t count = 1024;
};

/// Midpoint-grid coordinates in the B_T box ((i + 1/2)/res per side, scaled).
/// With symmetric=true the box is [-side, side]^d instead of [0, side]^d.
std::vector<std::vector<double>> sample_ball(const HorosphericalChart& chart, double T,
                                             const GridSampling& mode, bool symmetric = false,
                                             std::uint64_t budget = work_budget());

/// Uniform random coordinates in the B_T box; deterministic per seed.
std::vector<std::vector<double>> sample_ball(const HorosphericalChart& chart, double T,
                                             const RandomSampling& mode, bool symmetric = false);

}  // namespace horolab::flow

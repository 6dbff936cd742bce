#pragma once

#include <Eigen/Dense>
#include <vector>

#include <json.hpp>

#include "horolab/common.hpp"
#include "horolab/group.hpp"

namespace horolab::lattice {

enum class Norm { Max, Euclidean };

/// g = N * diag(A) * K with N unit upper triangular, A positive, K
/// orthogonal. Computed by Gram-Schmidt over the rows from the bottom up,
/// which makes A_n the length of the last row's orthogonal part.
struct IwasawaNAK {
    Eigen::MatrixXd N;
    Eigen::VectorXd A;
    Eigen::MatrixXd K;
};

IwasawaNAK iwasawa(const group::GroupElement& g);

/// Siegel set bounds: |N_ij| <= s and a_{i+1}/a_i <= t. The defaults
/// (1/2, 2/sqrt(3)) are the smallest parameters that still cover the space.
struct SiegelParams {
    double s = 0.5;
    double t = 1.1547005383792515;  // 2/sqrt(3)
};

bool in_siegel_set(const group::GroupElement& g, SiegelParams params = {}, double tol = 1e-6);

struct ReductionResult {
    /// Integer unimodular row transform: reduced = gamma * g.
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> gamma;
    group::GroupElement reduced;
};

/// Basis reduction into the Siegel set. Exact two-dimensional reduction for
/// n = 2; LLL plus bounded local repair for n >= 3 (conditions hold within
/// 1e-6 there).
ReductionResult siegel_reduce(const group::GroupElement& g);

/// Minimum over nonzero v in Z^n of ||v g|| in both norms, by reduction
/// followed by complete enumeration inside a covering Euclidean ball.
struct ShortestLengths {
    double max_norm = 0.0;
    double euclid = 0.0;
};
ShortestLengths shortest_lengths(const group::GroupElement& g);
double shortest_vector_length(const group::GroupElement& g, Norm norm = Norm::Max);

/// Whether the lattice Z^n g has no nonzero vector of max norm below eps.
bool in_L_eps(const group::GroupElement& g, double eps);

/// Operator norm of m -> g m g^{-1} on n x n matrices under the max entry
/// norm: the max absolute row sum of the n^2 x n^2 matrix of the
/// conjugation map.
double ad_operator_norm(const group::GroupElement& g);

/// Explicit constant chain for Siegel-reduced representatives of lattices
/// with shortest vector >= eps:
///   a_n >= eps/sqrt(n),  a_i >= C eps,  a_i <= (C eps)^{-(n-1)},
///   a_i/a_j <= (C eps)^{-n},  ||Ad|| <= n^4 C^{-n} eps^{-n}
/// with C = (sqrt(3)/2)^{n-1}/sqrt(n).
struct AdChainReport {
    int n = 0;
    double eps = 0.0;
    double C = 0.0;
    double a_min = 0.0, a_max = 0.0, ratio_max = 0.0, ad_norm = 0.0;
    bool last_diag_ok = false;
    bool diag_lower_ok = false;
    bool diag_upper_ok = false;
    bool ratio_ok = false;
    bool ad_ok = false;

    bool all_ok() const {
        return last_diag_ok && diag_lower_ok && diag_upper_ok && ratio_ok && ad_ok;
    }
};

AdChainReport ad_norm_bound_check(const group::GroupElement& reduced, double eps);

/// Lower-bound constant of the diagonal chain, (sqrt(3)/2)^{n-1}/sqrt(n).
double siegel_diag_constant(int n);

/// Injective-projection radius r = c2 eps^n for lattices in L_eps, with
/// c2 = 1 / (n^4 C^{-n} metric_comparison). The eps < c1 smallness
/// threshold and the metric comparison constant are configuration choices;
/// both default to the documented values (0.5 and 1).
double injectivity_radius(double eps, int n, double c1 = 0.5, double metric_comparison = 1.0);

/// All gamma in SL_2(Z) with |entries| <= bound, excluding the identity.
const std::vector<Eigen::Matrix2d>& unimodular2_list(int entry_bound);

/// min over the bounded gamma list of ||I - g^{-1} gamma g||_max; the
/// empirical counterpart of the injectivity radius (n = 2 only).
double min_conjugate_displacement(const group::GroupElement& g, int entry_bound);

/// A point of the lattice space with its reduction data computed up front:
/// Siegel-reduced representative, shortest lengths in both norms, and the
/// NAK parts of the reduced representative. Immutable after construction,
/// safe to share across threads.
class LatticePoint {
  public:
    explicit LatticePoint(group::GroupElement rep);

    const group::GroupElement& rep() const { return rep_; }
    const group::GroupElement& reduced() const { return reduction_.reduced; }
    const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& gamma() const {
        return reduction_.gamma;
    }
    double shortest(Norm norm) const {
        return norm == Norm::Max ? lengths_.max_norm : lengths_.euclid;
    }
    const IwasawaNAK& reduced_nak() const { return nak_; }

    nlohmann::ordered_json diagnostics() const;

  private:
    group::GroupElement rep_;
    ReductionResult reduction_;
    ShortestLengths lengths_;
    IwasawaNAK nak_;
};

}  // namespace horolab::lattice

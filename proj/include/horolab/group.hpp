#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "horolab/common.hpp"

namespace horolab::group {

/// Unit-determinant n x n real matrix; the coset representative of a
/// lattice Z^n * g. Row-vector convention throughout: vectors act on the
/// right, v -> v * g, so the lattice basis is the rows of g.
class GroupElement {
  public:
    /// Validates n >= 2 and |det - 1| <= 1e-9 * max(1, ||m||_max^n).
    explicit GroupElement(Eigen::MatrixXd entries);

    static GroupElement identity(int n);

    int dim() const { return n_; }
    const Eigen::MatrixXd& entries() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    GroupElement operator*(const GroupElement& rhs) const;
    GroupElement inverse() const;
    GroupElement transposed() const;

    /// |det - 1| of the stored matrix.
    double det_drift() const;

    static double det_tolerance(const Eigen::MatrixXd& m);

  private:
    struct unchecked_t {};
    GroupElement(Eigen::MatrixXd entries, unchecked_t);

    Eigen::MatrixXd m_;
    int n_;
};

/// Strictly increasing indices in [1, n]; identifies a basis wedge
/// e_{i_1} ^ ... ^ e_{i_j}.
class MultiIndex {
  public:
    MultiIndex(std::initializer_list<int> idx);
    explicit MultiIndex(std::vector<int> idx);

    int length() const { return static_cast<int>(idx_.size()); }
    int operator[](int k) const { return idx_[static_cast<std::size_t>(k)]; }
    const std::vector<int>& indices() const { return idx_; }

    bool operator==(const MultiIndex& o) const { return idx_ == o.idx_; }
    bool operator<(const MultiIndex& o) const { return idx_ < o.idx_; }

  private:
    std::vector<int> idx_;
};

/// All length-j multi-indices over [1, n] in lexicographic order. This
/// order fixes the coefficient layout of ExteriorVector.
const std::vector<MultiIndex>& multi_indices(int n, int j);

/// Element of Lambda^j(R^n) stored densely over the lexicographic
/// multi-index basis. Coefficients that were never set are 0.
class ExteriorVector {
  public:
    ExteriorVector(int n, int j);
    static ExteriorVector basis(int n, const MultiIndex& index);

    int n() const { return n_; }
    int degree() const { return j_; }

    double coeff(const MultiIndex& index) const;
    void set_coeff(const MultiIndex& index, double value);

    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

  private:
    int n_, j_;
    std::vector<double> c_;
};

/// max_I |w_I|; 0 for the zero vector.
double sup_norm(const ExteriorVector& w);

/// Right action of g: each basis wedge maps to the wedge of the
/// corresponding rows of g, extended linearly. Coefficientwise this is
/// (w g)_J = sum_I w_I det g[I, J].
ExteriorVector exterior_action(const ExteriorVector& w, const GroupElement& g);

/// All nonzero integral w in Lambda^j(Z^n) with sup_norm <= height whose
/// coefficient gcd is 1. For j = 1 this is entrywise primitivity; for
/// j >= 2 primitivity is taken coefficientwise over the wedge basis.
std::vector<ExteriorVector> enumerate_primitive(int j, int n, double height,
                                                std::uint64_t budget = work_budget());

}  // namespace horolab::group

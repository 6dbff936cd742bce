#include "horolab/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace horolab::group {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Adjugate inverse; accurate for well-scaled matrices up to 4x4.
Eigen::MatrixXd adjugate_inverse(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd adj(n, n);
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc) = m(r, c);
                    ++mc;
                }
                ++mr;
            }
            const double cof = ((i + j) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
            adj(j, i) = cof;
        }
    }
    return adj / m.determinant();
}

}  // namespace

double GroupElement::det_tolerance(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    const double scale = std::max(1.0, std::pow(max_abs(m), n));
    return 1e-9 * scale;
}

GroupElement::GroupElement(Eigen::MatrixXd entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() < 2) {
        throw std::invalid_argument("GroupElement: need a square matrix with n >= 2");
    }
    n_ = static_cast<int>(m_.rows());
    const double drift = std::abs(m_.determinant() - 1.0);
    if (!(drift <= det_tolerance(m_))) {
        throw std::invalid_argument("GroupElement: determinant " +
                                    std::to_string(m_.determinant()) + " is not 1");
    }
}

GroupElement::GroupElement(Eigen::MatrixXd entries, unchecked_t)
    : m_(std::move(entries)), n_(static_cast<int>(m_.rows())) {}

GroupElement GroupElement::identity(int n) {
    return GroupElement(Eigen::MatrixXd::Identity(n, n));
}

double GroupElement::det_drift() const { return std::abs(m_.determinant() - 1.0); }

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
    if (n_ != rhs.n_) throw std::invalid_argument("GroupElement: dimension mismatch");
    Eigen::MatrixXd prod = m_ * rhs.m_;
    if (std::abs(prod.determinant() - 1.0) > det_tolerance(prod)) {
        throw NumericDegradationError("GroupElement: determinant drift in product");
    }
    return GroupElement(std::move(prod), unchecked_t{});
}

GroupElement GroupElement::inverse() const {
    Eigen::MatrixXd inv;
    if (n_ <= 4) {
        inv = adjugate_inverse(m_);
    } else {
        inv = Eigen::PartialPivLU<Eigen::MatrixXd>(m_).inverse();
    }
    if (std::abs(inv.determinant() - 1.0) > det_tolerance(inv)) {
        throw NumericDegradationError("GroupElement: determinant drift in inverse");
    }
    return GroupElement(std::move(inv), unchecked_t{});
}

GroupElement GroupElement::transposed() const {
    return GroupElement(m_.transpose(), unchecked_t{});
}

MultiIndex::MultiIndex(std::initializer_list<int> idx) : MultiIndex(std::vector<int>(idx)) {}

MultiIndex::MultiIndex(std::vector<int> idx) : idx_(std::move(idx)) {
    if (idx_.empty()) throw std::invalid_argument("MultiIndex: empty");
    for (std::size_t k = 0; k < idx_.size(); ++k) {
        if (idx_[k] < 1) throw std::invalid_argument("MultiIndex: indices are 1-based");
        if (k > 0 && idx_[k] <= idx_[k - 1]) {
            throw std::invalid_argument("MultiIndex: indices must be strictly increasing");
        }
    }
}

const std::vector<MultiIndex>& multi_indices(int n, int j) {
    static std::map<std::pair<int, int>, std::vector<MultiIndex>> cache;
    static std::mutex mutex;
    if (j < 1 || j > n) throw std::invalid_argument("multi_indices: need 1 <= j <= n");
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({n, j});
    if (it != cache.end()) return it->second;

    std::vector<MultiIndex> out;
    std::vector<int> idx(j);
    std::iota(idx.begin(), idx.end(), 1);
    for (;;) {
        out.emplace_back(idx);
        int k = j - 1;
        while (k >= 0 && idx[k] == n - (j - 1 - k)) --k;
        if (k < 0) break;
        ++idx[k];
        for (int l = k + 1; l < j; ++l) idx[l] = idx[l - 1] + 1;
    }
    return cache.emplace(std::make_pair(n, j), std::move(out)).first->second;
}

namespace {

int index_rank(int n, const MultiIndex& index) {
    const auto& table = multi_indices(n, index.length());
    const auto it = std::lower_bound(table.begin(), table.end(), index);
    if (it == table.end() || !(*it == index)) {
        throw std::invalid_argument("MultiIndex: index out of range for n");
    }
    return static_cast<int>(it - table.begin());
}

}  // namespace

ExteriorVector::ExteriorVector(int n, int j) : n_(n), j_(j) {
    if (j < 1 || j > n) throw std::invalid_argument("ExteriorVector: need 1 <= j <= n");
    c_.assign(multi_indices(n, j).size(), 0.0);
}

ExteriorVector ExteriorVector::basis(int n, const MultiIndex& index) {
    ExteriorVector w(n, index.length());
    w.set_coeff(index, 1.0);
    return w;
}

double ExteriorVector::coeff(const MultiIndex& index) const {
    return c_[static_cast<std::size_t>(index_rank(n_, index))];
}

void ExteriorVector::set_coeff(const MultiIndex& index, double value) {
    c_[static_cast<std::size_t>(index_rank(n_, index))] = value;
}

double sup_norm(const ExteriorVector& w) {
    double m = 0.0;
    for (double c : w.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

ExteriorVector exterior_action(const ExteriorVector& w, const GroupElement& g) {
    if (w.n() != g.dim()) {
        throw std::invalid_argument("exterior_action: dimension mismatch");
    }
    const int n = w.n();
    const int j = w.degree();
    const auto& basis = multi_indices(n, j);
    const auto& m = g.entries();

    ExteriorVector out(n, j);
    Eigen::MatrixXd sub(j, j);
    for (std::size_t bi = 0; bi < basis.size(); ++bi) {
        const double wi = w.coeffs()[bi];
        if (wi == 0.0) continue;
        const MultiIndex& rows = basis[bi];
        for (std::size_t bj = 0; bj < basis.size(); ++bj) {
            const MultiIndex& cols = basis[bj];
            for (int r = 0; r < j; ++r) {
                for (int c = 0; c < j; ++c) {
                    sub(r, c) = m(rows[r] - 1, cols[c] - 1);
                }
            }
            out.coeffs()[bj] += wi * sub.determinant();
        }
    }
    return out;
}

std::vector<ExteriorVector> enumerate_primitive(int j, int n, double height,
                                                std::uint64_t budget) {
    if (j < 1 || j > n - 1) throw std::invalid_argument("enumerate_primitive: need 1 <= j <= n-1");
    if (height < 0) throw std::invalid_argument("enumerate_primitive: negative height");
    const long long h = static_cast<long long>(std::floor(height));
    const auto& basis = multi_indices(n, j);
    const int dim = static_cast<int>(basis.size());

    double estimate = 1.0;
    for (int k = 0; k < dim; ++k) estimate *= static_cast<double>(2 * h + 1);
    if (estimate > static_cast<double>(budget)) {
        throw ResourceLimitError("enumerate_primitive: ~" + std::to_string(estimate) +
                                 " candidates exceed the work budget");
    }

    std::vector<ExteriorVector> out;
    if (h < 1) return out;

    std::vector<long long> c(dim, -h);
    for (;;) {
        long long g = 0;
        for (long long v : c) g = std::gcd(g, std::abs(v));
        if (g == 1) {
            ExteriorVector w(n, j);
            for (int k = 0; k < dim; ++k) w.coeffs()[static_cast<std::size_t>(k)] = static_cast<double>(c[k]);
            out.push_back(std::move(w));
        }
        int k = dim - 1;
        while (k >= 0 && c[k] == h) c[k--] = -h;
        if (k < 0) break;
        ++c[k];
    }
    return out;
}

}  // namespace horolab::group

#include "horolab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace horolab::lattice {

namespace {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Gram-Schmidt over rows in standard (top-down) order.
// mu(i, j) for j < i; gs_sq[i] = ||b*_i||^2.
struct GramSchmidt {
    Eigen::MatrixXd star;
    Eigen::MatrixXd mu;
    Eigen::VectorXd gs_sq;
};

GramSchmidt gram_schmidt_rows(const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(b.rows());
    GramSchmidt gs;
    gs.star = b;
    gs.mu = Eigen::MatrixXd::Zero(n, n);
    gs.gs_sq = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            gs.mu(i, j) = b.row(i).dot(gs.star.row(j)) / gs.gs_sq(j);
            gs.star.row(i) -= gs.mu(i, j) * gs.star.row(j);
        }
        gs.gs_sq(i) = gs.star.row(i).squaredNorm();
        if (!(gs.gs_sq(i) > 0.0)) {
            throw NumericDegradationError("gram_schmidt_rows: degenerate basis");
        }
    }
    return gs;
}

// LLL over the rows of `basis`, tracking the integer transform.
// delta is taken close to 1 so the output lands a hair inside the Siegel
// ratio bound after row reversal.
void lll_rows(Eigen::MatrixXd& basis, IntMatrix& transform, double delta = 1.0 - 1e-9) {
    const int n = static_cast<int>(basis.rows());
    GramSchmidt gs = gram_schmidt_rows(basis);

    auto size_reduce = [&](int i, int j) {
        const long long q = std::llround(gs.mu(i, j));
        if (q != 0) {
            basis.row(i) -= static_cast<double>(q) * basis.row(j);
            transform.row(i) -= q * transform.row(j);
        }
    };

    int k = 1;
    int guard = 0;
    while (k < n) {
        if (++guard > 10000) throw NumericDegradationError("lll_rows: no convergence");
        for (int j = k - 1; j >= 0; --j) {
            size_reduce(k, j);
            gs = gram_schmidt_rows(basis);
        }
        if (gs.gs_sq(k) >= (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.gs_sq(k - 1)) {
            ++k;
        } else {
            basis.row(k).swap(basis.row(k - 1));
            transform.row(k).swap(transform.row(k - 1));
            gs = gram_schmidt_rows(basis);
            k = std::max(k - 1, 1);
        }
    }
}

// Bottom-up Gram-Schmidt used by the NAK decomposition: orthonormalizes the
// rows starting from the last one.
IwasawaNAK nak_of_rows(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    IwasawaNAK out;
    out.N = Eigen::MatrixXd::Identity(n, n);
    out.A = Eigen::VectorXd::Zero(n);
    out.K = Eigen::MatrixXd::Zero(n, n);
    for (int i = n - 1; i >= 0; --i) {
        Eigen::RowVectorXd v = m.row(i);
        for (int j = n - 1; j > i; --j) {
            const double coef = m.row(i).dot(out.K.row(j));
            out.N(i, j) = coef / out.A(j);
            v -= coef * out.K.row(j);
        }
        const double a = v.norm();
        // catastrophic cancellation against the already-orthonormalized
        // rows is the failure mode, so the test is row-relative
        if (!(a > 1e-12 * m.row(i).norm())) {
            throw NumericDegradationError("iwasawa: ill-conditioned input");
        }
        out.A(i) = a;
        out.K.row(i) = v / a;
    }
    return out;
}

struct Enumerator {
    const Eigen::MatrixXd& basis;
    const GramSchmidt& gs;
    double radius_sq;
    std::vector<long long> coeff;
    double best_max = std::numeric_limits<double>::infinity();
    double best_euclid = std::numeric_limits<double>::infinity();

    void consider() {
        Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(basis.cols());
        bool zero = true;
        for (int i = 0; i < static_cast<int>(coeff.size()); ++i) {
            if (coeff[static_cast<std::size_t>(i)] != 0) {
                zero = false;
                v += static_cast<double>(coeff[static_cast<std::size_t>(i)]) * basis.row(i);
            }
        }
        if (zero) return;
        best_max = std::min(best_max, v.cwiseAbs().maxCoeff());
        best_euclid = std::min(best_euclid, v.norm());
    }

    // Depth-first over coefficients, last row outward; partial is the
    // accumulated squared length of the processed orthogonal components.
    void run(int i, double partial) {
        if (i < 0) {
            consider();
            return;
        }
        double center = 0.0;
        for (int j = i + 1; j < static_cast<int>(coeff.size()); ++j) {
            center += static_cast<double>(coeff[static_cast<std::size_t>(j)]) * gs.mu(j, i);
        }
        const double room = (radius_sq - partial) / gs.gs_sq(i);
        if (room < 0.0) return;
        const double spread = std::sqrt(room);
        const long long lo = static_cast<long long>(std::ceil(-center - spread - 1e-12));
        const long long hi = static_cast<long long>(std::floor(-center + spread + 1e-12));
        for (long long c = lo; c <= hi; ++c) {
            coeff[static_cast<std::size_t>(i)] = c;
            const double off = static_cast<double>(c) + center;
            run(i - 1, partial + off * off * gs.gs_sq(i));
        }
        coeff[static_cast<std::size_t>(i)] = 0;
    }
};

}  // namespace

IwasawaNAK iwasawa(const group::GroupElement& g) {
    IwasawaNAK nak = nak_of_rows(g.entries());
    const Eigen::MatrixXd recomposed = nak.N * nak.A.asDiagonal() * nak.K;
    const double scale = std::max(1.0, g.entries().cwiseAbs().maxCoeff());
    if ((recomposed - g.entries()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw NumericDegradationError("iwasawa: recomposition failed tolerance");
    }
    return nak;
}

bool in_siegel_set(const group::GroupElement& g, SiegelParams params, double tol) {
    const IwasawaNAK nak = nak_of_rows(g.entries());
    const int n = g.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(nak.N(i, j)) > params.s + tol) return false;
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (nak.A(i + 1) / nak.A(i) > params.t + tol) return false;
    }
    return true;
}

ReductionResult siegel_reduce(const group::GroupElement& g) {
    const int n = g.dim();
    Eigen::MatrixXd basis = g.entries();
    IntMatrix gamma = IntMatrix::Identity(n, n);

    if (n == 2) {
        // two-dimensional reduction: exits with |mu| <= 1/2, ||r1|| >= ||r2||
        int guard = 0;
        for (;;) {
            if (++guard > 10000) throw NumericDegradationError("siegel_reduce: no convergence");
            const double mu = basis.row(0).dot(basis.row(1)) / basis.row(1).squaredNorm();
            const long long q = std::llround(mu);
            if (q != 0) {
                basis.row(0) -= static_cast<double>(q) * basis.row(1);
                gamma.row(0) -= q * gamma.row(1);
            }
            if (basis.row(0).squaredNorm() < basis.row(1).squaredNorm()) {
                basis.row(0).swap(basis.row(1));
                gamma.row(0).swap(gamma.row(1));
            } else {
                break;
            }
        }
    } else {
        lll_rows(basis, gamma);
        // Siegel orientation: shortest orthogonal component at the bottom
        for (int i = 0; i < n / 2; ++i) {
            basis.row(i).swap(basis.row(n - 1 - i));
            gamma.row(i).swap(gamma.row(n - 1 - i));
        }
        // local repair: size-reduce in NAK coordinates and swap any link
        // that still violates the diagonal ratio
        const double ratio_bound = SiegelParams{}.t;
        for (int pass = 0; pass < 200; ++pass) {
            IwasawaNAK nak = nak_of_rows(basis);
            for (int i = n - 2; i >= 0; --i) {
                for (int j = i + 1; j < n; ++j) {
                    const long long q = std::llround(nak.N(i, j));
                    if (q != 0) {
                        basis.row(i) -= static_cast<double>(q) * basis.row(j);
                        gamma.row(i) -= q * gamma.row(j);
                        nak = nak_of_rows(basis);
                    }
                }
            }
            int worst = -1;
            double worst_ratio = ratio_bound * (1.0 + 1e-9);
            for (int i = 0; i + 1 < n; ++i) {
                const double r = nak.A(i + 1) / nak.A(i);
                if (r > worst_ratio) {
                    worst = i;
                    worst_ratio = r;
                }
            }
            if (worst < 0) break;
            basis.row(worst).swap(basis.row(worst + 1));
            gamma.row(worst).swap(gamma.row(worst + 1));
        }
    }

    // keep the transform in SL_n(Z): flip the sign of the last row if needed
    const double det = gamma.cast<double>().determinant();
    if (det < 0) {
        gamma.row(n - 1) *= -1;
        basis.row(n - 1) *= -1.0;
    }

    ReductionResult out{std::move(gamma), group::GroupElement(std::move(basis))};
    if (!in_siegel_set(out.reduced)) {
        throw NumericDegradationError("siegel_reduce: result escaped the Siegel set");
    }
    return out;
}

ShortestLengths shortest_lengths(const group::GroupElement& g) {
    const int n = g.dim();
    Eigen::MatrixXd basis = g.entries();
    IntMatrix transform = IntMatrix::Identity(n, n);
    lll_rows(basis, transform);

    double best_max = std::numeric_limits<double>::infinity();
    double best_euclid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        best_max = std::min(best_max, basis.row(i).cwiseAbs().maxCoeff());
        best_euclid = std::min(best_euclid, basis.row(i).norm());
    }

    // any vector beating either norm lies in this Euclidean ball
    const double radius_sq =
        std::max(best_euclid * best_euclid, static_cast<double>(n) * best_max * best_max) *
        (1.0 + 1e-9);

    const GramSchmidt gs = gram_schmidt_rows(basis);
    Enumerator e{basis, gs, radius_sq, std::vector<long long>(static_cast<std::size_t>(n), 0),
                 best_max, best_euclid};
    e.run(n - 1, 0.0);
    return {e.best_max, e.best_euclid};
}

double shortest_vector_length(const group::GroupElement& g, Norm norm) {
    const ShortestLengths l = shortest_lengths(g);
    return norm == Norm::Max ? l.max_norm : l.euclid;
}

bool in_L_eps(const group::GroupElement& g, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("in_L_eps: eps must be positive");
    return shortest_vector_length(g, Norm::Max) >= eps;
}

double ad_operator_norm(const group::GroupElement& g) {
    const int n = g.dim();
    const Eigen::MatrixXd& m = g.entries();
    const Eigen::MatrixXd inv = g.inverse().entries();

    // conjugation as an n^2 x n^2 matrix: entry ((i,j),(k,l)) = g_ik inv_lj
    Eigen::MatrixXd conj(n * n, n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                for (int l = 0; l < n; ++l) {
                    conj(i * n + j, k * n + l) = m(i, k) * inv(l, j);
                }
            }
        }
    }
    return conj.cwiseAbs().rowwise().sum().maxCoeff();
}

double siegel_diag_constant(int n) {
    return std::pow(std::sqrt(3.0) / 2.0, n - 1) / std::sqrt(static_cast<double>(n));
}

AdChainReport ad_norm_bound_check(const group::GroupElement& reduced, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("ad_norm_bound_check: eps must be positive");
    if (!in_siegel_set(reduced)) {
        throw std::invalid_argument("ad_norm_bound_check: representative is not Siegel reduced");
    }
    if (shortest_vector_length(reduced, Norm::Max) < eps * (1.0 - 1e-9)) {
        throw std::invalid_argument("ad_norm_bound_check: lattice has a vector shorter than eps");
    }

    const int n = reduced.dim();
    AdChainReport rep;
    rep.n = n;
    rep.eps = eps;
    rep.C = siegel_diag_constant(n);

    const IwasawaNAK nak = nak_of_rows(reduced.entries());
    rep.a_min = nak.A.minCoeff();
    rep.a_max = nak.A.maxCoeff();
    rep.ratio_max = rep.a_max / rep.a_min;
    rep.ad_norm = ad_operator_norm(reduced);

    const double slack = 1.0 + 1e-9;
    rep.last_diag_ok = nak.A(n - 1) * slack >= eps / std::sqrt(static_cast<double>(n));
    rep.diag_lower_ok = rep.a_min * slack >= rep.C * eps;
    rep.diag_upper_ok = rep.a_max <= std::pow(rep.C * eps, -(n - 1)) * slack;
    rep.ratio_ok = rep.ratio_max <= std::pow(rep.C * eps, -n) * slack;
    rep.ad_ok = rep.ad_norm <= std::pow(static_cast<double>(n), 4) *
                                   std::pow(rep.C, -n) * std::pow(eps, -n) * slack;
    return rep;
}

double injectivity_radius(double eps, int n, double c1, double metric_comparison) {
    if (!(eps > 0.0) || eps >= c1) {
        throw OutOfDomainError("injectivity_radius: need 0 < eps < c1");
    }
    const double C = siegel_diag_constant(n);
    const double c2 = 1.0 / (std::pow(static_cast<double>(n), 4) * std::pow(C, -n) * metric_comparison);
    return c2 * std::pow(eps, n);
}

const std::vector<Eigen::Matrix2d>& unimodular2_list(int entry_bound) {
    static std::map<int, std::vector<Eigen::Matrix2d>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(entry_bound);
    if (it != cache.end()) return it->second;

    std::vector<Eigen::Matrix2d> list;
    const long long B = entry_bound;
    for (long long a = -B; a <= B; ++a) {
        for (long long b = -B; b <= B; ++b) {
            for (long long c = -B; c <= B; ++c) {
                if (a == 0) {
                    if (b * c != -1) continue;
                    for (long long d = -B; d <= B; ++d) {
                        Eigen::Matrix2d m;
                        m << 0, static_cast<double>(b), static_cast<double>(c), static_cast<double>(d);
                        list.push_back(m);
                    }
                } else {
                    const long long num = 1 + b * c;
                    if (num % a != 0) continue;
                    const long long d = num / a;
                    if (std::abs(d) > B) continue;
                    if (a == 1 && b == 0 && c == 0 && d == 1) continue;  // identity
                    Eigen::Matrix2d m;
                    m << static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                        static_cast<double>(d);
                    list.push_back(m);
                }
            }
        }
    }
    return cache.emplace(entry_bound, std::move(list)).first->second;
}

double min_conjugate_displacement(const group::GroupElement& g, int entry_bound) {
    if (g.dim() != 2) {
        throw UnsupportedConfigError("min_conjugate_displacement: bounded search is n = 2 only");
    }
    const Eigen::Matrix2d m = g.entries();
    const Eigen::Matrix2d inv = g.inverse().entries();
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Matrix2d& gamma : unimodular2_list(entry_bound)) {
        const double v = (id - inv * gamma * m).cwiseAbs().maxCoeff();
        best = std::min(best, v);
    }
    return best;
}

LatticePoint::LatticePoint(group::GroupElement rep)
    : rep_(std::move(rep)),
      reduction_(siegel_reduce(rep_)),
      lengths_(shortest_lengths(reduction_.reduced)),
      nak_(nak_of_rows(reduction_.reduced.entries())) {}

nlohmann::ordered_json LatticePoint::diagnostics() const {
    nlohmann::ordered_json j;
    j["n"] = rep_.dim();
    j["shortest_max_norm"] = lengths_.max_norm;
    j["shortest_euclid"] = lengths_.euclid;
    j["det_drift"] = rep_.det_drift();
    auto diag = nlohmann::ordered_json::array();
    for (int i = 0; i < rep_.dim(); ++i) diag.push_back(nak_.A(i));
    j["reduced_diag"] = diag;
    return j;
}

}  // namespace horolab::lattice

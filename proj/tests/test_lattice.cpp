#include <doctest.h>

#include <cmath>
#include <random>

#include "horolab/lattice.hpp"

using namespace horolab;
using group::GroupElement;
using lattice::Norm;

namespace {

GroupElement upper_tri2(double y, double x) {
    // NA coordinates of the upper half plane point x + iy
    Eigen::MatrixXd m(2, 2);
    m << std::sqrt(y), x / std::sqrt(y), 0, 1.0 / std::sqrt(y);
    return GroupElement(m);
}

GroupElement rotation2(double th) {
    Eigen::MatrixXd m(2, 2);
    m << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
    return GroupElement(m);
}

GroupElement diag2(double a) {
    Eigen::MatrixXd m(2, 2);
    m << a, 0, 0, 1.0 / a;
    return GroupElement(m);
}

GroupElement random_sl2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return upper_tri2(std::exp(u(rng)), u(rng)) * rotation2(u(rng) * M_PI);
}

// independent oracle: scan |v_i| <= box for the shortest image vector
lattice::ShortestLengths brute_shortest(const GroupElement& g, int box) {
    lattice::ShortestLengths best{1e300, 1e300};
    const int n = g.dim();
    std::vector<int> v(static_cast<std::size_t>(n), -box);
    for (;;) {
        bool zero = true;
        for (int c : v) zero = zero && c == 0;
        if (!zero) {
            Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(n);
            for (int i = 0; i < n; ++i) w += v[static_cast<std::size_t>(i)] * g.entries().row(i);
            best.max_norm = std::min(best.max_norm, w.cwiseAbs().maxCoeff());
            best.euclid = std::min(best.euclid, w.norm());
        }
        int k = n - 1;
        while (k >= 0 && v[static_cast<std::size_t>(k)] == box) {
            v[static_cast<std::size_t>(k)] = -box;
            --k;
        }
        if (k < 0) break;
        ++v[static_cast<std::size_t>(k)];
    }
    return best;
}

}  // namespace

TEST_CASE("shortest vector basics") {
    CHECK(lattice::shortest_vector_length(GroupElement::identity(2)) == doctest::Approx(1.0));
    CHECK(lattice::shortest_vector_length(GroupElement::identity(4)) == doctest::Approx(1.0));
    CHECK(lattice::shortest_vector_length(diag2(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("shortest vector matches brute force") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        const GroupElement g = random_sl2(rng);
        const auto fast = lattice::shortest_lengths(g);
        const auto slow = brute_shortest(g, 50);
        CHECK(fast.max_norm == doctest::Approx(slow.max_norm).epsilon(1e-10));
        CHECK(fast.euclid == doctest::Approx(slow.euclid).epsilon(1e-10));
    }
}

TEST_CASE("shortest vector is unimodular-invariant and Minkowski bounded") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> shift(-3, 3);
    for (int rep = 0; rep < 30; ++rep) {
        const GroupElement g = random_sl2(rng);
        Eigen::MatrixXd gam(2, 2);
        const double s = shift(rng);
        gam << 1, s, 0, 1;
        Eigen::MatrixXd flip(2, 2);
        flip << 0, 1, -1, 0;
        const GroupElement moved = GroupElement(flip) * GroupElement(gam) * g;
        CHECK(lattice::shortest_vector_length(moved) ==
              doctest::Approx(lattice::shortest_vector_length(g)).epsilon(1e-8));
        // max-norm Minkowski bound with the equality case Z^n
        CHECK(lattice::shortest_vector_length(g) <= 1.0 + 1e-9);
    }
    CHECK(lattice::shortest_vector_length(diag2(40.0)) <= 1.0 + 1e-9);
}

TEST_CASE("L_eps membership") {
    CHECK(lattice::in_L_eps(GroupElement::identity(2), 1.0));
    CHECK_FALSE(lattice::in_L_eps(GroupElement::identity(2), 1.01));
    CHECK_FALSE(lattice::in_L_eps(diag2(1.0 / 0.3), 0.5));  // has a vector of length 0.3
    CHECK_THROWS_AS(lattice::in_L_eps(GroupElement::identity(2), 0.0), std::invalid_argument);
}

TEST_CASE("iwasawa decomposition") {
    // unit upper triangular input: N = g, A = I, K = I
    Eigen::MatrixXd u(3, 3);
    u << 1, 0.5, -2, 0, 1, 0.25, 0, 0, 1;
    auto nak = lattice::iwasawa(GroupElement(u));
    CHECK((nak.N - u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((nak.A - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((nak.K - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

    // orthogonal input: K = g
    const GroupElement k = rotation2(0.8);
    nak = lattice::iwasawa(k);
    CHECK((nak.N - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((nak.K - k.entries()).cwiseAbs().maxCoeff() < 1e-10);

    // diagonal input
    nak = lattice::iwasawa(diag2(2.0));
    CHECK(nak.A(0) == doctest::Approx(2.0));
    CHECK(nak.A(1) == doctest::Approx(0.5));

    // strongly anisotropic but exact input decomposes fine
    nak = lattice::iwasawa(diag2(1e6));
    CHECK(nak.A(0) == doctest::Approx(1e6));

    // random recomposition + unimodular A + orthogonal K
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const GroupElement g = random_sl2(rng);
        nak = lattice::iwasawa(g);
        CHECK((nak.N * nak.A.asDiagonal() * nak.K - g.entries()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(nak.A.prod() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK((nak.K * nak.K.transpose() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("siegel reduction in the upper half plane") {
    // already reduced: identity transform
    const GroupElement g0 = upper_tri2(2.0, 0.25);
    const auto r0 = lattice::siegel_reduce(g0);
    CHECK(r0.gamma == Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Identity(2, 2));

    // tau = 5 + 2i reduces to 2i by five unit translations
    const auto r1 = lattice::siegel_reduce(upper_tri2(2.0, 5.0));
    CHECK(r1.gamma(0, 1) == -5);
    CHECK(r1.gamma(0, 0) == 1);
    CHECK(r1.gamma(1, 0) == 0);
    auto nak = lattice::iwasawa(r1.reduced);
    CHECK(std::abs(nak.N(0, 1)) < 1e-9);                          // x' = 0
    CHECK(nak.A(0) / nak.A(1) == doctest::Approx(2.0).epsilon(1e-9));  // y' = 2

    // tau = 0.1 + 0.2i lands in |x| <= 1/2, x^2 + y^2 >= 1
    const auto r2 = lattice::siegel_reduce(upper_tri2(0.2, 0.1));
    nak = lattice::iwasawa(r2.reduced);
    const double xr = nak.N(0, 1);
    const double yr = nak.A(0) / nak.A(1);
    CHECK(std::abs(xr) <= 0.5 + 1e-9);
    CHECK(xr * xr + yr * yr >= 1.0 - 1e-9);
    CHECK(lattice::in_siegel_set(r2.reduced));
}

TEST_CASE("siegel reduction satisfies both inequalities, n = 2..5") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 15; ++rep) {
            Eigen::MatrixXd upper = Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
            double prod = 1.0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    upper(i, j) = u(rng);
                    lower(j, i) = u(rng);
                }
            }
            for (int i = 0; i + 1 < n; ++i) {
                d(i, i) = std::exp(u(rng) * 0.4);
                prod *= d(i, i);
            }
            d(n - 1, n - 1) = 1.0 / prod;
            const GroupElement g = GroupElement(upper) * GroupElement(d) * GroupElement(lower);
            const auto red = lattice::siegel_reduce(g);
            CHECK(lattice::in_siegel_set(red.reduced));
            // gamma is unimodular and reproduces the reduced representative
            CHECK(std::abs(red.gamma.cast<double>().determinant() - 1.0) < 1e-6);
            CHECK((red.gamma.cast<double>() * g.entries() - red.reduced.entries())
                      .cwiseAbs()
                      .maxCoeff() < 1e-8);
            // reduction preserves the lattice
            CHECK(lattice::shortest_vector_length(red.reduced) ==
                  doctest::Approx(lattice::shortest_vector_length(g)).epsilon(1e-8));
        }
    }
}

TEST_CASE("ad operator norm") {
    CHECK(lattice::ad_operator_norm(GroupElement::identity(2)) == doctest::Approx(1.0));
    CHECK(lattice::ad_operator_norm(GroupElement::identity(5)) == doctest::Approx(1.0));
    // diag(2, 1/2): E_12 scales by 4, and the row-sum norm is exactly 4
    CHECK(lattice::ad_operator_norm(diag2(2.0)) == doctest::Approx(4.0));
    // orthogonal: entries bounded by 1, row sums by n^2
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
    for (int rep = 0; rep < 10; ++rep) {
        CHECK(lattice::ad_operator_norm(rotation2(u(rng))) <= 4.0 + 1e-9);
    }
    // submultiplicative on products
    std::mt19937_64 rng2(4);
    for (int rep = 0; rep < 20; ++rep) {
        const GroupElement a = random_sl2(rng2);
        const GroupElement b = random_sl2(rng2);
        CHECK(lattice::ad_operator_norm(a * b) <=
              lattice::ad_operator_norm(a) * lattice::ad_operator_norm(b) * (1 + 1e-9));
    }
}

TEST_CASE("ad norm chain") {
    // identity, eps = 1
    auto rep = lattice::ad_norm_bound_check(GroupElement::identity(2), 1.0);
    CHECK(rep.all_ok());

    // diagonal example sits on the tight version of the first link
    const GroupElement g = diag2(2.0);  // shortest = 1/2 = a_2
    rep = lattice::ad_norm_bound_check(g, 0.5);
    CHECK(rep.all_ok());
    auto nak = lattice::iwasawa(g);
    CHECK(nak.A(1) == doctest::Approx(0.5));  // a_n == eps exactly

    // Monte Carlo over reduced representatives with eps = own shortest length
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const GroupElement raw = random_sl2(rng);
        const auto red = lattice::siegel_reduce(raw);
        const double eps = lattice::shortest_vector_length(red.reduced);
        const auto chain = lattice::ad_norm_bound_check(red.reduced, eps);
        CHECK(chain.all_ok());
    }

    // violated precondition
    CHECK_THROWS_AS(lattice::ad_norm_bound_check(GroupElement::identity(2), 1.5),
                    std::invalid_argument);
}

TEST_CASE("injectivity radius") {
    const double c2_2 = 1.0 / (16.0 * std::pow(lattice::siegel_diag_constant(2), -2));
    CHECK(lattice::injectivity_radius(0.25, 2) == doctest::Approx(c2_2 * 0.25 * 0.25));
    CHECK(lattice::injectivity_radius(0.1, 2) < lattice::injectivity_radius(0.2, 2));
    CHECK(lattice::injectivity_radius(0.2, 3) ==
          doctest::Approx(std::pow(0.2, 3) /
                          (81.0 * std::pow(lattice::siegel_diag_constant(3), -3))));
    CHECK_THROWS_AS(lattice::injectivity_radius(0.5, 2), OutOfDomainError);
    CHECK_THROWS_AS(lattice::injectivity_radius(-1.0, 2), OutOfDomainError);
}

TEST_CASE("bounded-gamma search respects the injectivity radius") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 25; ++i) {
        const GroupElement raw = random_sl2(rng);
        const auto red = lattice::siegel_reduce(raw);
        const double eps = std::min(lattice::shortest_vector_length(red.reduced), 0.499);
        const double r = lattice::injectivity_radius(eps, 2);
        CHECK(lattice::min_conjugate_displacement(red.reduced, 10) > r);
    }
}

TEST_CASE("lattice point caches") {
    const lattice::LatticePoint p(upper_tri2(0.2, 0.1));
    CHECK(lattice::in_siegel_set(p.reduced()));
    CHECK(p.shortest(Norm::Max) == doctest::Approx(lattice::shortest_vector_length(p.rep())));
    CHECK(p.shortest(Norm::Euclidean) >= p.shortest(Norm::Max));
    const auto diag = p.diagnostics();
    CHECK(diag.contains("shortest_max_norm"));
    CHECK(diag["n"] == 2);
}

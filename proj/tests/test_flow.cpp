#include <doctest.h>

#include <cmath>

#include "horolab/flow.hpp"

using namespace horolab;
using flow::BallSpec;
using flow::FlowSpec;
using flow::HorosphericalChart;

TEST_CASE("flow spec validation") {
    CHECK_THROWS_AS(FlowSpec({1.0, 2.0}, {1, 1}), std::invalid_argument);  // increasing
    CHECK_THROWS_AS(FlowSpec({1.0, 1.0}, {1, 1}), std::invalid_argument);  // sum != 0
    CHECK_THROWS_AS(FlowSpec({0.0, 0.0}, {1, 1}), std::invalid_argument);  // single block after merge
    // equal adjacent lambdas merge into one block
    const FlowSpec s({0.5, 0.5, -1.0}, {1, 1, 1});
    CHECK(s.num_blocks() == 2);
    CHECK(s.mult(0) == 2);
    CHECK(s.dim_u() == 2);
}

TEST_CASE("diagonal flow") {
    const FlowSpec horo = FlowSpec::horocycle();
    CHECK((horo.diag_flow(0.0).entries() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    const auto a = horo.diag_flow(2.0 * std::log(2.0));
    CHECK(a(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(a(1, 1) == doctest::Approx(0.5).epsilon(1e-12));

    const FlowSpec ab3 = FlowSpec::abelian(3, 1);
    const double t = 0.37;
    const auto a3 = ab3.diag_flow(t);
    CHECK(a3(0, 0) == doctest::Approx(std::exp(2.0 * t / 3.0)).epsilon(1e-12));
    CHECK(a3(1, 1) == doctest::Approx(std::exp(-t / 3.0)).epsilon(1e-12));
    CHECK(a3(2, 2) == doctest::Approx(std::exp(-t / 3.0)).epsilon(1e-12));
}

TEST_CASE("chart embedding") {
    const HorosphericalChart horo(FlowSpec::horocycle());
    CHECK(horo.dim() == 1);
    const auto u = horo.embed({4.5});
    CHECK(u(0, 1) == 4.5);
    CHECK(u(0, 0) == 1.0);
    CHECK((horo.embed({0.0}).entries() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(horo.embed({1.0, 2.0}), std::invalid_argument);

    // abelian group law u(s) u(t) = u(s+t)
    const auto prod = horo.embed({1.25}) * horo.embed({-0.5});
    CHECK(prod(0, 1) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("ball exponents") {
    CHECK(FlowSpec::horocycle().exponent_p() == doctest::Approx(1.0));
    CHECK(FlowSpec::horocycle().exponent_q() == doctest::Approx(0.5));

    const FlowSpec ab3 = FlowSpec::abelian(3, 1);
    CHECK(ab3.exponent_p() == doctest::Approx(2.0));
    CHECK(ab3.dim_u() == 2);
    CHECK(ab3.exponent_q() == doctest::Approx(2.0 / 3.0));
    // abelian family: q = d/n
    CHECK(ab3.exponent_q() == doctest::Approx(static_cast<double>(ab3.dim_u()) / ab3.n()));

    const FlowSpec full({1.0, 0.0, -1.0}, {1, 1, 1});
    CHECK(full.exponent_p() == doctest::Approx(4.0));  // 1 + 1 + 2 slot-wise
    CHECK(full.exponent_q() == doctest::Approx(1.0));

    // nonnegative lambdas outside the negative set contribute nothing
    const FlowSpec ab42 = FlowSpec::abelian(4, 2);
    CHECK(ab42.exponent_q() == doctest::Approx(1.0));

    // the slot-layout route to q agrees with the eigenvalue route
    for (int n = 2; n <= 5; ++n) {
        for (int m = 1; m < n; ++m) {
            const FlowSpec s = FlowSpec::abelian(n, m);
            CHECK(s.exponent_q() ==
                  doctest::Approx(HorosphericalChart(s).contraction_exponent_from_slots())
                      .epsilon(1e-12));
        }
    }
    CHECK(full.exponent_q() ==
          doctest::Approx(HorosphericalChart(full).contraction_exponent_from_slots())
              .epsilon(1e-12));
    const FlowSpec steep({1.5, 0.25, -1.0}, {1, 2, 2});
    CHECK(steep.exponent_q() ==
          doctest::Approx(HorosphericalChart(steep).contraction_exponent_from_slots())
              .epsilon(1e-12));
}

TEST_CASE("ball box sides and volume") {
    const HorosphericalChart horo(FlowSpec::horocycle());
    const double T = 1234.5;
    const BallSpec box = flow::ball_box(horo, T);
    CHECK(box.sides.size() == 1);
    CHECK(box.sides[0] == doctest::Approx(T).epsilon(1e-12));
    CHECK(box.volume() == doctest::Approx(std::pow(T, FlowSpec::horocycle().exponent_p())).epsilon(1e-12));

    // abelian chart: every side is T
    const HorosphericalChart ab(FlowSpec::abelian(4, 2));
    const BallSpec abox = flow::ball_box(ab, 64.0);
    for (double s : abox.sides) CHECK(s == doctest::Approx(64.0).epsilon(1e-12));

    // full upper triangular with lambda = (1, 0, -1): sides (T, T^2, T)
    const HorosphericalChart fc(FlowSpec({1.0, 0.0, -1.0}, {1, 1, 1}));
    const BallSpec fbox = flow::ball_box(fc, 10.0);
    REQUIRE(fbox.sides.size() == 3);
    // slots row-major: (0,1) exp 1, (0,2) exp 2, (1,2) exp 1
    CHECK(fbox.sides[0] == doctest::Approx(10.0));
    CHECK(fbox.sides[1] == doctest::Approx(100.0));
    CHECK(fbox.sides[2] == doctest::Approx(10.0));
    CHECK(fbox.volume() == doctest::Approx(1e4).epsilon(1e-12));

    // exponent accounting is exact: slot exponents sum to p
    double exp_sum = 0.0;
    for (int k = 0; k < fc.dim(); ++k) exp_sum += fc.side_exponent(k);
    CHECK(exp_sum == doctest::Approx(FlowSpec({1.0, 0.0, -1.0}, {1, 1, 1}).exponent_p())
                         .epsilon(1e-12));

    // T -> 1+ degenerates to the unit box
    const BallSpec small = flow::ball_box(fc, 1.0 + 1e-12);
    for (double s : small.sides) CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("conjugation scales chart slots") {
    for (const FlowSpec& s : {FlowSpec::horocycle(), FlowSpec::abelian(3, 1), FlowSpec({1.0, 0.0, -1.0}, {1, 1, 1})}) {
        const HorosphericalChart chart(s);
        const double T = 17.0;
        std::vector<double> t(static_cast<std::size_t>(chart.dim()));
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.3 + 0.11 * static_cast<double>(k);

        const auto conj = s.diag_flow(std::log(T)) * chart.embed(t) * s.diag_flow(-std::log(T));
        std::vector<double> scaled(t);
        for (int k = 0; k < chart.dim(); ++k) {
            scaled[static_cast<std::size_t>(k)] *= std::pow(T, chart.side_exponent(k));
        }
        const auto expected = chart.embed(scaled);
        CHECK((conj.entries() - expected.entries()).cwiseAbs().maxCoeff() <
              1e-8 * expected.entries().cwiseAbs().maxCoeff());
    }
}

TEST_CASE("grid and random sampling") {
    const HorosphericalChart horo(FlowSpec::horocycle());
    const auto grid = flow::sample_ball(horo, 10.0, flow::GridSampling{4});
    REQUIRE(grid.size() == 4);
    CHECK(grid[0][0] == doctest::Approx(10.0 * 0.125));
    CHECK(grid[3][0] == doctest::Approx(10.0 * 0.875));

    const auto sym = flow::sample_ball(horo, 10.0, flow::GridSampling{4}, true);
    CHECK(sym[0][0] == doctest::Approx(-7.5));

    const auto r1 = flow::sample_ball(horo, 10.0, flow::RandomSampling{42, 100});
    const auto r2 = flow::sample_ball(horo, 10.0, flow::RandomSampling{42, 100});
    REQUIRE(r1.size() == 100);
    CHECK(r1[57][0] == r2[57][0]);
    for (const auto& t : r1) {
        CHECK(t[0] >= 0.0);
        CHECK(t[0] <= 10.0);
    }

    const HorosphericalChart big(FlowSpec::abelian(6, 3));
    CHECK_THROWS_AS(flow::sample_ball(big, 10.0, flow::GridSampling{100000}), ResourceLimitError);
}

TEST_CASE("flow spec json round trip") {
    const FlowSpec s = FlowSpec::abelian(3, 1);
    const auto j = s.to_json();
    CHECK(j["lambdas"].size() == 2);
    const FlowSpec back = FlowSpec::from_json(j);
    CHECK(back.n() == 3);
    CHECK(back.dim_u() == 2);
    CHECK(back.lambda(0) == doctest::Approx(2.0 / 3.0));
}

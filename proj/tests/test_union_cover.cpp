#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypercover/ball_cover.hpp"
#include "hypercover/union_cover.hpp"

using namespace hypercover;

TEST_CASE("coverage_mc trivial radii") {
    const auto design = gen_scheme1(5, 20, 0.8, 42);
    CHECK(coverage_mc(design, 0.0, 20000, 1).value == 0.0);
    CHECK(coverage_mc(design, 2.0 * std::sqrt(5.0), 20000, 1).value == 1.0);
    Design single{1, SchemeSpec{SchemeId::S2, 1.0}, 0, {0.0}};
    const auto est = coverage_mc(single, 0.5, 200000, 3);
    CHECK(std::fabs(est.value - 0.5) <= 3.0 * est.std_err);
    CHECK_THROWS_AS(coverage_mc(single, 0.5, 0, 3), std::invalid_argument);
}

TEST_CASE("coverage_mc monotone in r and n for a fixed seed") {
    const auto big = gen_scheme1(5, 80, 0.7, 9);
    for (int d : {5, 10}) {
        const auto base = gen_scheme1(d, 80, 0.7, 9);
        double prev = -1.0;
        for (double r = 0.2; r <= 2.4; r += 0.2) {
            const double c = coverage_mc(base, r, 30000, 4).value;
            CHECK(c >= prev);
            prev = c;
        }
        // nested prefixes cannot lose coverage
        double prev_n = -1.0;
        for (int n : {10, 20, 40, 80}) {
            Design prefix{d, base.scheme, base.seed,
                          std::vector<double>(base.points.begin(), base.points.begin() + n * d)};
            const double c = coverage_mc(prefix, 1.4, 30000, 4).value;
            CHECK(c >= prev_n);
            prev_n = c;
        }
    }
    (void)big;
}

TEST_CASE("union bound on coverage") {
    const auto design = gen_scheme1(5, 5, 0.6, 77);
    const double r = 1.0;
    const auto c = coverage_mc(design, r, 200000, 5);
    double bound = 0.0, bound_se = 0.0;
    for (int j = 0; j < design.n(); ++j) {
        const auto per = mc_oracle(design.point(j), r, 200000, 100 + j);
        bound += per.value;
        bound_se = std::hypot(bound_se, per.std_err);
    }
    CHECK(c.value <= bound + 3.0 * std::hypot(c.std_err, bound_se));
}

TEST_CASE("n=1 coverage equals the single-ball oracle") {
    const auto design = gen_scheme1(7, 1, 0.8, 13);
    const auto c = coverage_mc(design, 1.5, 400000, 6);
    const auto single = mc_oracle(design.point(0), 1.5, 400000, 7);
    CHECK(std::fabs(c.value - single.value) <= 3.0 * std::hypot(c.std_err, single.std_err));
}

TEST_CASE("exact 1-D average coverage 0.4375") {
    const auto est = coverage_mc_averaged(SchemeId::S1, 1, 1, 0.5, 1.0, 1.0, 5000, 400, 8);
    CHECK(std::fabs(est.value - 0.4375) <= 3.0 * est.std_err);
    CHECK(est.std_err < 0.01);
}

TEST_CASE("averaged coverage forces one replicate for deterministic schemes") {
    const auto est = coverage_mc_averaged(SchemeId::S7, 5, 16, 1.0, 0.8, 1.0, 5000, 10, 9);
    CHECK(est.design_replications == 1);
    const auto est2 = coverage_mc_averaged(SchemeId::S1, 5, 16, 1.0, 0.8, 1.0, 5000, 10, 9);
    CHECK(est2.design_replications == 10);
}

TEST_CASE("approximation limits") {
    CHECK(coverage_approx1(10, 1, 0.0, 0.7) == 0.0);
    CHECK(coverage_approx2(10, 1, 0.0, 0.7) == 0.0);
    // huge n with positive per-point mass saturates to 1
    CHECK(coverage_approx1(10, 100000000, 1.3, 0.7) == Catch::Approx(1.0).margin(1e-9));
    CHECK_THROWS_AS(coverage_approx2(10, 128, 1.5, 1.4), std::invalid_argument);
}

TEST_CASE("gauss-hermite default agrees with the adaptive fallback") {
    const auto adaptive = QuadratureSpec::interval(-10.0, 10.0, 1e-12);
    for (auto [d, n, delta, r] :
         {std::tuple{10, 128L, 0.78, 1.52}, std::tuple{20, 512L, 0.68, 2.29},
          std::tuple{50, 1024L, 0.46, 3.97}, std::tuple{10, 1024L, 0.90, 1.195}}) {
        const double gh = coverage_approx2(d, n, r, delta);
        const double ad = coverage_approx2(d, n, r, delta, adaptive);
        CHECK(gh == Catch::Approx(ad).margin(2e-5));
    }
}

TEST_CASE("approx2 reproduces the 0.9-coverage table cells") {
    CHECK(coverage_approx2(10, 128, 1.520, 0.78) == Catch::Approx(0.90).margin(0.01));
    CHECK(coverage_approx2(50, 512, 4.020, 0.45) == Catch::Approx(0.90).margin(0.015));
}

TEST_CASE("correction vanishes as d grows") {
    // same standardized radius at two dimensions
    auto gap = [](int d) {
        const double r = std::sqrt(d / 3.0 + 0.2 * std::sqrt(4.0 * d / 45.0));
        return std::fabs(coverage_approx2(d, 64, r, 1.0) - coverage_approx1(d, 64, r, 1.0));
    };
    CHECK(gap(2000) < 0.004);
    CHECK(gap(2000) < gap(10));
}

TEST_CASE("scheme 1 table cell d=10 n=64") {
    const auto est = coverage_mc_averaged(SchemeId::S1, 10, 64, 1.632, 0.70, 1.0, 20000, 20, 10);
    CHECK(est.value == Catch::Approx(0.90).margin(0.013));
}

TEST_CASE("radius_for_target mc route hits the table radius") {
    McBudget budget;
    budget.test_points = 20000;
    budget.design_replications = 30;
    budget.seed = 12;
    const double r = radius_for_target(SchemeId::S1, 10, 64, 0.70, 1.0, 0.9, CoverageMethod::Mc, budget);
    CHECK(r == Catch::Approx(1.632).margin(0.012));
}

TEST_CASE("radius_for_target approx2 route") {
    const double r = radius_for_target(SchemeId::S1, 10, 64, 0.70, 1.0, 0.9, CoverageMethod::Approx2);
    CHECK(r == Catch::Approx(1.632).margin(0.025));
    // tiny target, tiny radius
    const double r0 =
        radius_for_target(SchemeId::S1, 5, 16, 0.7, 1.0, 0.001, CoverageMethod::Approx2);
    CHECK(r0 < 0.8);
    CHECK_THROWS_AS(
        radius_for_target(SchemeId::S1, 5, 16, 0.7, 1.0, 1.5, CoverageMethod::Approx2),
        std::invalid_argument);
}

TEST_CASE("radius_for_target on a fixed design") {
    const auto design = gen_scheme7(10, 1024, 0.88);
    McBudget budget;
    budget.test_points = 30000;
    budget.seed = 3;
    const double r = radius_for_target(design, 0.9, CoverageMethod::Mc, budget);
    CHECK(r == Catch::Approx(1.170).margin(0.015));
}

TEST_CASE("optimize_delta, approx2 route") {
    const auto opt = optimize_delta(SchemeId::S1, 10, 1024, 1.195, CoverageMethod::Approx2);
    CHECK(opt.delta_star == Catch::Approx(0.90).margin(0.05));
    CHECK(opt.value_at_star == Catch::Approx(0.9).margin(0.02));
    // the delta effect: the optimum beats delta = 1
    CHECK(opt.value_at_star >= coverage_approx2(10, 1024, 1.195, 1.0) - 1e-9);
}

TEST_CASE("optimize_delta, mc route") {
    McBudget budget;
    budget.test_points = 10000;
    budget.design_replications = 12;
    budget.seed = 21;
    const auto opt = optimize_delta(SchemeId::S1, 10, 64, 1.632, CoverageMethod::Mc, 1.0, budget);
    CHECK(opt.delta_star == Catch::Approx(0.70).margin(0.06));
    CHECK(opt.value_at_star == Catch::Approx(0.90).margin(0.02));
}

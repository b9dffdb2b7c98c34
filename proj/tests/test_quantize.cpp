#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hypercover/quantize.hpp"
#include "hypercover/union_cover.hpp"

using namespace hypercover;

TEST_CASE("quantization_mc reference designs") {
    // single point at the origin: E||X||^2 = d/3
    for (int d : {3, 5}) {
        Design origin{d, SchemeSpec{SchemeId::S2, 1.0}, 0, std::vector<double>(d, 0.0)};
        const auto est = quantization_mc(origin, 200000, 4);
        CHECK(std::fabs(est.value - d / 3.0) <= 3.0 * est.std_err);
    }
    // duplicated points change nothing
    Design one{4, SchemeSpec{SchemeId::S2, 1.0}, 0, std::vector<double>(4, 0.0)};
    Design three{4, SchemeSpec{SchemeId::S2, 1.0}, 0, std::vector<double>(12, 0.0)};
    CHECK(quantization_mc(one, 50000, 5).value == quantization_mc(three, 50000, 5).value);
    // two-point design on the line: exact value 1/12
    Design pair{1, SchemeSpec{SchemeId::S1, 0.5}, 0, {-0.5, 0.5}};
    const auto est = quantization_mc(pair, 400000, 6);
    CHECK(std::fabs(est.value - 1.0 / 12.0) <= 3.0 * est.std_err);
    Design empty{1, SchemeSpec{SchemeId::S1, 0.5}, 0, {}};
    CHECK_THROWS_AS(quantization_mc(empty, 100, 1), std::invalid_argument);
}

TEST_CASE("quantization_mc nonincreasing in n for nested designs") {
    const auto base = gen_scheme1(6, 128, 0.7, 11);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {4, 16, 64, 128}) {
        Design prefix{6, base.scheme, base.seed,
                      std::vector<double>(base.points.begin(), base.points.begin() + n * 6)};
        const double q = quantization_mc(prefix, 30000, 12).value;
        CHECK(q <= prev + 1e-15);
        prev = q;
    }
}

TEST_CASE("quantization approximation closed forms") {
    CHECK(quantization_approx(7, 100, 0.0, false) == Catch::Approx(7.0 / 3.0).epsilon(1e-13));
    CHECK(quantization_approx(7, 100, 0.0, true) == Catch::Approx(7.0 / 3.0).epsilon(1e-13));
    CHECK(quantization_approx(9, 1, 0.5, true) ==
          Catch::Approx(9.0 * 1.25 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS(quantization_approx(5, 10, 1.2, true), std::invalid_argument);
    // corrected variant sits above the uncorrected one for delta > 0, n > 1
    CHECK(quantization_approx(10, 64, 0.7, true) > quantization_approx(10, 64, 0.7, false));
}

TEST_CASE("normalized error factors") {
    CHECK(normalized_error(7, 1, 3.3) == 3.3);
    CHECK(normalized_error(10, 1024, 1.0) == Catch::Approx(4.0).epsilon(1e-13));
    CHECK(normalized_error(50, 1024, 1.0) == Catch::Approx(1.3195079107728942).epsilon(1e-13));
    CHECK_THROWS_AS(normalized_error(5, 10, -0.1), std::invalid_argument);
}

TEST_CASE("corrected approximation tracks the MC curve shape") {
    // the formula is rough; what it must get right is the shape of the
    // error-vs-delta curve, not each point
    const int d = 20, n = 512;
    std::vector<double> mc_curve, ap_curve, grid;
    for (double delta : {0.2, 0.35, 0.5, 0.65, 0.8, 0.95}) {
        double acc = 0.0;
        const int M = 6;
        for (int m = 0; m < M; ++m) {
            const auto design = gen_scheme1(d, n, delta, 100 + m);
            acc += quantization_mc(design, 8000, 55 + m).value;
        }
        grid.push_back(delta);
        mc_curve.push_back(acc / M);
        ap_curve.push_back(quantization_approx(d, n, delta, true));
        // coarse pointwise sanity
        CHECK(std::fabs(ap_curve.back() - mc_curve.back()) / mc_curve.back() < 0.15);
    }
    // Pearson correlation of the two curves
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    const double ma = mean(ap_curve), mm = mean(mc_curve);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sxy += (ap_curve[i] - ma) * (mc_curve[i] - mm);
        sxx += (ap_curve[i] - ma) * (ap_curve[i] - ma);
        syy += (mc_curve[i] - mm) * (mc_curve[i] - mm);
    }
    CHECK(sxy / std::sqrt(sxx * syy) > 0.95);
    // both curves dip in the interior
    const auto mc_min = std::min_element(mc_curve.begin(), mc_curve.end()) - mc_curve.begin();
    const auto ap_min = std::min_element(ap_curve.begin(), ap_curve.end()) - ap_curve.begin();
    CHECK(std::fabs(grid[mc_min] - grid[ap_min]) <= 0.2);
}

TEST_CASE("minimize_over_delta reproduces the d=10 n=64 cell") {
    const auto opt = minimize_over_delta(SchemeId::S1, 10, 64, 20000, 20, 31);
    CHECK(opt.delta_star == Catch::Approx(0.68).margin(0.06));
    CHECK(opt.min_normalized_error == Catch::Approx(4.153).epsilon(0.03));
}

TEST_CASE("delta effect in quantization at d=10 n=1024") {
    const auto opt = minimize_over_delta(SchemeId::S1, 10, 1024, 20000, 8, 17);
    // value at delta = 1 with the same frozen draws
    const auto fr = detail::freeze_sweep(SchemeId::S1, 10, 1024, 1.0, 20000, 8, 17);
    const double at_one = normalized_error(10, 1024, detail::frozen_quantization(fr, 1.0));
    CHECK(opt.min_normalized_error < at_one);
    CHECK(opt.delta_star < 0.95);
}

TEST_CASE("coverage and quantization rank designs consistently") {
    // Spearman correlation between coverage at the table radius and negative
    // normalized quantization error across the delta grid
    const int d = 10, n = 64;
    const double r = 1.632;
    std::vector<double> cov, negq;
    for (double step = 0.30; step <= 1.0 + 1e-9; step += 0.05) {
        const double delta = std::min(step, 1.0);
        const auto c = coverage_mc_averaged(SchemeId::S1, d, n, r, delta, 1.0, 5000, 8, 44);
        double acc = 0.0;
        for (int m = 0; m < 8; ++m) {
            const auto design = gen_scheme1(d, n, delta, detail::design_seed(44, m));
            acc += quantization_mc(design, 5000, detail::points_seed(44, m)).value;
        }
        cov.push_back(c.value);
        negq.push_back(-normalized_error(d, n, acc / 8));
    }
    auto ranks = [](const std::vector<double>& v) {
        std::vector<int> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> rk(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) rk[idx[i]] = static_cast<double>(i);
        return rk;
    };
    const auto ra = ranks(cov);
    const auto rb = ranks(negq);
    double d2 = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double m = static_cast<double>(ra.size());
    const double rho = 1.0 - 6.0 * d2 / (m * (m * m - 1.0));
    INFO("spearman rho = " << rho);
    CHECK(rho >= 0.8);
}

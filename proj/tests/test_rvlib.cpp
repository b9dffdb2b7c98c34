#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hypercover/rng.hpp"
#include "hypercover/rvlib.hpp"
#include "hypercover/special.hpp"

using namespace hypercover;

namespace {

// quadrature of the lemma-1 density through the u = sqrt(t) substitution,
// which removes the 1/sqrt(t) singularity
double lemma1_integral(const ShiftedSquareDist& dist, const std::function<double(double)>& g) {
    const double ax = std::fabs(dist.x);
    auto f = [&](double u) { return g(u * u) * lemma1_pdf(dist, u * u) * 2.0 * u; };
    const double lo = std::fabs(dist.delta - ax);
    const double hi = dist.delta + ax;
    double acc = 0.0;
    if (ax <= dist.delta && lo > 0.0) acc += adaptive_simpson(f, 1e-12, lo, 1e-12);
    acc += adaptive_simpson(f, lo + 1e-12, hi, 1e-12);
    return acc;
}

}  // namespace

TEST_CASE("lemma1 cdf branch values") {
    CHECK(lemma1_cdf({0.0, 1.0}, 0.25) == Catch::Approx(0.5).margin(1e-15));
    CHECK(lemma1_cdf({2.0, 1.0}, 0.5) == 0.0);
    CHECK(lemma1_cdf({0.5, 1.0}, 1.0) == Catch::Approx(0.75).margin(1e-15));
    CHECK(lemma1_cdf({0.3, 1.0}, -1.0) == 0.0);
    CHECK(lemma1_cdf({0.3, 1.0}, 2.0) == 1.0);
}

TEST_CASE("lemma1 cdf middle-branch value matches MC") {
    const ShiftedSquareDist dist{0.5, 1.0};
    Rng rng = make_stream(31, 0);
    const std::int64_t N = 1000000;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        const double xi = rng.uniform(-1.0, 1.0);
        if ((xi - 0.5) * (xi - 0.5) <= 1.0) ++hits;
    }
    const double p = double(hits) / double(N);
    const double se = std::sqrt(p * (1 - p) / double(N));
    CHECK(std::fabs(lemma1_cdf(dist, 1.0) - p) <= 4.0 * se);
}

TEST_CASE("lemma1 pdf values and error at zero") {
    CHECK(lemma1_pdf({0.0, 1.0}, 0.25) == Catch::Approx(1.0).margin(1e-15));
    CHECK(lemma1_pdf({0.0, 1.0}, 1.5) == 0.0);
    CHECK_THROWS_AS(lemma1_pdf({0.0, 1.0}, 0.0), std::domain_error);
    const double total = lemma1_integral({0.7, 0.9}, [](double) { return 1.0; });
    CHECK(total == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("lemma1 branch continuity at |x| = delta") {
    const double delta = 0.8;
    const double t = 1e-6;
    const double below = lemma1_cdf({delta - 1e-13, delta}, t);
    const double above = lemma1_cdf({delta + 1e-13, delta}, t);
    CHECK(below == Catch::Approx(above).margin(1e-6));
}

TEST_CASE("lemma1 central moments closed forms") {
    const auto m = lemma1_central_moments({0.0, 1.0});
    CHECK(m.mean == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(m.variance == Catch::Approx(4.0 / 45.0).epsilon(1e-14));
    const auto m2 = lemma1_central_moments({1.0, 1.0});
    CHECK(m2.mu3 == Catch::Approx(1024.0 / 945.0).epsilon(1e-14));  // (16/15)(1+1/63)
    const auto m3 = lemma1_central_moments({2.0, 1e-6});
    CHECK(m3.variance == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("lemma1 cdf/pdf/moment grid properties") {
    for (double delta : {0.4, 1.0}) {
        for (double xf : {0.0, 0.3, 1.0, 1.7}) {
            const ShiftedSquareDist dist{xf * delta, delta};
            // cdf nondecreasing
            const double hi = (delta + std::fabs(dist.x)) * (delta + std::fabs(dist.x));
            double prev = 0.0;
            for (double t = 0.0; t <= hi * 1.05; t += hi / 57.0) {
                const double v = lemma1_cdf(dist, t);
                CHECK(v >= prev - 1e-15);
                prev = v;
            }
            // pdf integrates to 1
            CHECK(lemma1_integral(dist, [](double) { return 1.0; }) ==
                  Catch::Approx(1.0).margin(1e-8));
            // moments from quadrature
            const auto m = lemma1_central_moments(dist);
            const double mean = lemma1_integral(dist, [](double t) { return t; });
            CHECK(mean == Catch::Approx(m.mean).margin(1e-8));
            const double var =
                lemma1_integral(dist, [&](double t) { return (t - m.mean) * (t - m.mean); });
            CHECK(var == Catch::Approx(m.variance).margin(1e-8));
            const double mu3 = lemma1_integral(
                dist, [&](double t) { return std::pow(t - m.mean, 3.0); });
            CHECK(mu3 == Catch::Approx(m.mu3).margin(1e-8));
            const double mu4 = lemma1_integral(
                dist, [&](double t) { return std::pow(t - m.mean, 4.0); });
            CHECK(mu4 == Catch::Approx(m.mu4).margin(1e-7));
        }
    }
}

TEST_CASE("lemma2 cdf is lemma1 at t^2") {
    CHECK(lemma2_cdf(0.0, 1.0, 0.3) == Catch::Approx(0.3).margin(1e-15));
    CHECK(lemma2_cdf(0.7, 1.0, 1.71) == 1.0);
    CHECK(lemma2_cdf(0.5, 1.0, 0.8) == Catch::Approx(0.65).margin(1e-15));
    for (double x : {0.0, 0.4, 0.9, 1.3}) {
        for (double t = 0.0; t <= 2.5; t += 0.113) {
            CHECK(lemma2_cdf(x, 1.0, t) == lemma1_cdf({x, 1.0}, t * t));
        }
    }
    CHECK(lemma2_cdf(0.2, 1.0, -0.5) == 0.0);
}

TEST_CASE("lemma2 middle branch matches MC") {
    Rng rng = make_stream(77, 1);
    const std::int64_t N = 1000000;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < N; ++i)
        if (std::fabs(rng.uniform(-1.0, 1.0) - 0.5) <= 0.8) ++hits;
    const double p = double(hits) / N;
    CHECK(std::fabs(lemma2_cdf(0.5, 1.0, 0.8) - p) <= 4.0 * std::sqrt(p * (1 - p) / N));
}

TEST_CASE("beta symmetric moments") {
    const auto [mu2_u, mu4_u] = beta_symmetric_moments({1.0, 1.0});
    CHECK(mu2_u == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(mu4_u == Catch::Approx(0.2).epsilon(1e-14));
    const auto [mu2_h, mu4_h] = beta_symmetric_moments({0.5, 1.0});
    CHECK(mu2_h == Catch::Approx(0.5).epsilon(1e-14));
    // quadrature oracle for the same value
    const BetaSymmetric dist{0.5, 1.0};
    const double q = adaptive_simpson(
        [&](double t) { return t * t * beta_symmetric_pdf(dist, t); }, -1.0 + 1e-10, 1.0 - 1e-10,
        1e-11);
    CHECK(mu2_h == Catch::Approx(q).margin(1e-5));
    const auto [mu2_s, mu4_s] = beta_symmetric_moments({1.0, 2.0});
    CHECK(mu2_s == Catch::Approx(4.0 * mu2_u).epsilon(1e-13));
    (void)mu4_s;
}

TEST_CASE("squared norm moments") {
    const auto [mean_u, var_u] = squared_norm_moments(10, {1.0, 1.0});
    CHECK(mean_u == Catch::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(var_u == Catch::Approx(8.0 / 9.0).epsilon(1e-14));
    // d=1 consistency with the coordinate moments
    const auto [mu2, mu4] = beta_symmetric_moments({0.7, 0.9});
    const auto [mean1, var1] = squared_norm_moments(1, {0.7, 0.9});
    CHECK(mean1 == Catch::Approx(mu2).epsilon(1e-13));
    CHECK(var1 == Catch::Approx(mu4 - mu2 * mu2).epsilon(1e-12));
    CHECK(squared_norm_moments(20, {0.5, 0.6}).first == Catch::Approx(3.6).epsilon(1e-13));
}

TEST_CASE("pair distance moments") {
    const auto [mean_u, var_u] = pair_distance_moments(10, {1.0, 1.0});
    CHECK(mean_u == Catch::Approx(20.0 / 3.0).epsilon(1e-14));
    CHECK(var_u == Catch::Approx(280.0 / 45.0).epsilon(1e-13));
    for (double a : {0.5, 1.0, 2.0}) {
        const BetaSymmetric dist{a, 0.8};
        CHECK(pair_distance_moments(7, dist).first ==
              Catch::Approx(2.0 * squared_norm_moments(7, dist).first).epsilon(1e-13));
    }
    CHECK(pair_distance_moments(5, {2.0, 1.0}).first == Catch::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("moment formulas match sampler within 4 se") {
    for (double a : {0.5, 1.0, 1.5, 2.0}) {
        const BetaSymmetric dist{a, 0.9};
        Rng rng = make_stream(5150, static_cast<std::uint64_t>(a * 10));
        const std::int64_t N = 1000000;
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < N; ++i) {
            const double t = beta_symmetric_sample(dist, rng);
            REQUIRE(std::fabs(t) <= dist.delta);
            s1 += t * t;
            s2 += t * t * t * t;
        }
        const auto [mu2, mu4] = beta_symmetric_moments(dist);
        const double se2 = std::sqrt((s2 / N - (s1 / N) * (s1 / N)) / N);
        CHECK(std::fabs(s1 / N - mu2) <= 4.0 * se2 + 1e-12);
        CHECK(s2 / N == Catch::Approx(mu4).epsilon(0.02));
    }
}

TEST_CASE("sampler with alpha=1 reproduces the raw uniform stream") {
    const BetaSymmetric dist{1.0, 0.6};
    Rng a = make_stream(9, 9);
    Rng b = make_stream(9, 9);
    for (int i = 0; i < 1000; ++i)
        CHECK(beta_symmetric_sample(dist, a) == b.uniform(-0.6, 0.6));
}

TEST_CASE("pair distance MC for d=20 alpha=0.5 delta=0.6") {
    const BetaSymmetric dist{0.5, 0.6};
    Rng rng = make_stream(404, 2);
    const std::int64_t N = 400000;
    double acc = 0.0, acc2 = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        double n2 = 0.0;
        for (int j = 0; j < 20; ++j) {
            const double z = beta_symmetric_sample(dist, rng);
            n2 += z * z;
        }
        acc += n2;
        acc2 += n2 * n2;
    }
    const auto [mean, var] = squared_norm_moments(20, dist);
    const double se = std::sqrt((acc2 / N - (acc / N) * (acc / N)) / N);
    CHECK(std::fabs(acc / N - mean) <= 4.0 * se);
    CHECK(acc2 / N - (acc / N) * (acc / N) == Catch::Approx(var).epsilon(0.05));
}

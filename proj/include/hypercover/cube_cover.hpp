#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hypercover/bigfloat.hpp"
#include "hypercover/estimate.hpp"
#include "hypercover/mc_kernels.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"
#include "hypercover/rvlib.hpp"

namespace hypercover {

// Coverage of [-1,1]^d by n cubes of half-side r with centers uniform on
// [-delta, delta]^d.
struct CubeCoverQuery {
    int d = 1;
    std::int64_t n = 1;
    double r = 0.0;
    double delta = 1.0;

    void validate() const {
        if (d < 1) throw std::invalid_argument("CubeCoverQuery: d must be >= 1");
        if (n < 1) throw std::invalid_argument("CubeCoverQuery: n must be >= 1");
        if (!(r >= 0.0)) throw std::invalid_argument("CubeCoverQuery: r must be >= 0");
        if (!(delta > 0.0 && delta <= 1.0))
            throw std::invalid_argument("CubeCoverQuery: delta must be in (0,1]");
    }
};

// c.d.f. of |u - z| for u uniform on [-1,1] (unit-half-side marginal).
inline double marginal_cdf_G(double z, double r) { return lemma2_cdf(z, 1.0, r); }

// Fraction of the cube covered by one cube of half-side r centered at Z:
// product of the marginals.
inline double single_cube_fraction(std::span<const double> z, double r) {
    double prod = 1.0;
    for (double zj : z) {
        prod *= marginal_cdf_G(zj, r);
        if (prod == 0.0) break;
    }
    return prod;
}

// Same on the cube of half-side delta, via the coordinate rescaling.
inline double rescaled_fraction(std::span<const double> z_prime, double r_prime, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("rescaled_fraction: delta must be > 0");
    double prod = 1.0;
    for (double zj : z_prime) {
        prod *= marginal_cdf_G(zj / delta, r_prime / delta);
        if (prod == 0.0) break;
    }
    return prod;
}

// I_k = 1/2 int_{-1}^{1} G(u/delta, r/delta)^k du, in closed form. The four
// parameter regions meet continuously at r = delta, r + delta = 1 and
// r - delta = 1; boundaries are classified with a 1e-14 band toward the side
// both branches share. The (delta + r - 1) term only exists once the middle
// branch of G reaches the integration range, i.e. for r + delta > 1.
inline double ik_integral(std::int64_t k, double r, double delta) {
    if (k < 0) throw std::invalid_argument("ik_integral: k must be >= 0");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("ik_integral: delta must be in (0,1]");
    if (!(r >= 0.0)) throw std::invalid_argument("ik_integral: r must be >= 0");
    if (k == 0) return 1.0;
    constexpr double kBand = 1e-14;
    if (r - delta >= 1.0 - kBand) return 1.0;
    const double kp1 = static_cast<double>(k + 1);
    double value;
    if (r <= delta + kBand && r <= delta + 1.0) {
        const double ratio = std::min(r / delta, 1.0);
        value = (delta - r) * std::pow(ratio, static_cast<double>(k)) +
                (2.0 * delta / kp1) * std::pow(ratio, kp1);
        if (r + delta > 1.0 + kBand) {
            const double w = (delta + r - 1.0) / (2.0 * delta);
            value -= (2.0 * delta / kp1) * std::pow(w, kp1);
        }
    } else if (r + delta >= 1.0 - kBand) {
        const double w = (delta + r - 1.0) / (2.0 * delta);
        value = (r - delta) - (2.0 * delta / kp1) * (std::pow(std::max(w, 0.0), kp1) - 1.0);
    } else {
        value = (r - delta) + 2.0 * delta / kp1;
    }
    return std::clamp(value, 0.0, 1.0);
}

namespace detail {

// Extended-precision twin of ik_integral. The alternating binomial sum
// multiplies I_k^d by binomials near 2^n, so I_k itself has to carry the
// full working precision.
inline BigFloat ik_integral_big(std::int64_t k, double r, double delta, mpfr_prec_t bits) {
    if (k == 0) return BigFloat(1.0, bits);
    constexpr double kBand = 1e-14;
    if (r - delta >= 1.0 - kBand) return BigFloat(1.0, bits);
    const unsigned long kp1 = static_cast<unsigned long>(k + 1);
    auto big = [bits](double x) { return BigFloat(x, bits); };
    BigFloat value(bits);
    if (r <= delta + kBand) {
        const BigFloat ratio = BigFloat::div(big(r), big(delta));
        BigFloat term1 = big(delta);
        term1 -= big(r);
        term1 *= ratio.pow_ui(static_cast<unsigned long>(k));
        BigFloat term2 = big(2.0 * delta);
        term2.div_ui(kp1);
        term2 *= ratio.pow_ui(kp1);
        value = term1;
        value += term2;
        if (r + delta > 1.0 + kBand) {
            BigFloat w = big(delta);
            w += big(r);
            w += big(-1.0);
            w = BigFloat::div(w, big(2.0 * delta));
            BigFloat term3 = big(2.0 * delta);
            term3.div_ui(kp1);
            term3 *= w.pow_ui(kp1);
            value -= term3;
        }
    } else if (r + delta >= 1.0 - kBand) {
        BigFloat w = big(delta);
        w += big(r);
        w += big(-1.0);
        if (w.to_double() < 0.0) w = big(0.0);
        else w = BigFloat::div(w, big(2.0 * delta));
        BigFloat bracket = w.pow_ui(kp1);
        bracket -= big(1.0);
        BigFloat term = big(2.0 * delta);
        term.div_ui(kp1);
        term *= bracket;
        value = big(r - delta);
        value -= term;
    } else {
        BigFloat term = big(2.0 * delta);
        term.div_ui(kp1);
        value = big(r - delta);
        value += term;
    }
    return value;
}

}  // namespace detail

// Expected coverage from the binomial expansion:
//   1 - sum_{k=0}^{n} (-1)^k C(n,k) I_k^d
// evaluated wholly in (n + 64)-bit floats: the binomials reach 2^n while the
// result sits in [0,1], so native doubles have no digits left.
inline double expected_coverage_closed_form(const CubeCoverQuery& query) {
    query.validate();
    if (query.n > 4096)
        throw std::invalid_argument("expected_coverage_closed_form: n > 4096 exceeds the precision budget");
    const mpfr_prec_t bits = static_cast<mpfr_prec_t>(query.n + 64);
    BigFloat sum(bits);
    for (std::int64_t k = 0; k <= query.n; ++k) {
        BigFloat term = BigFloat::binomial(static_cast<unsigned long>(query.n),
                                           static_cast<unsigned long>(k), bits);
        term *= detail::ik_integral_big(k, query.r, query.delta, bits).pow_ui(
            static_cast<unsigned long>(query.d));
        if (k % 2) term.negate();
        sum += term;
    }
    if (!sum.finite()) throw std::overflow_error("expected_coverage_closed_form: sum overflowed");
    const double coverage = 1.0 - sum.to_double();
    if (coverage < -1e-6 || coverage > 1.0 + 1e-6)
        throw std::runtime_error(
            "expected_coverage_closed_form: result escaped [0,1]; raise the precision");
    return std::clamp(coverage, 0.0, 1.0);
}

// MC estimate of the same quantity: designs uniform on [-delta, delta]^d,
// test points uniform on the cube, L-infinity balls.
inline EstimateResult cube_cover_mc(int d, int n, double r, double delta, std::int64_t test_points,
                                    int design_replications, std::uint64_t seed) {
    CubeCoverQuery{d, n, r, delta}.validate();
    if (test_points < 1 || design_replications < 1)
        throw std::invalid_argument("cube_cover_mc: bad budgets");
    std::vector<double> values(design_replications);
    for (int m = 0; m < design_replications; ++m) {
        const Design design = gen_scheme1(d, n, delta, detail::design_seed(seed, m));
        const std::int64_t n_chunks = (test_points + detail::kCoverChunk - 1) / detail::kCoverChunk;
        std::vector<std::int64_t> hits(n_chunks, 0);
        const std::uint64_t pseed = detail::points_seed(seed, m);
        for_each_chunk(n_chunks, [&](std::int64_t c) {
            const std::int64_t lo = c * detail::kCoverChunk;
            const std::int64_t len = std::min(detail::kCoverChunk, test_points - lo);
            Rng rng = make_stream(pseed, static_cast<std::uint64_t>(c));
            std::vector<double> x(d);
            std::int64_t h = 0;
            for (std::int64_t i = 0; i < len; ++i) {
                for (double& v : x) v = rng.uniform(-1.0, 1.0);
                if (detail::covered_linf(x, design.points, d, r)) ++h;
            }
            hits[c] = h;
        });
        std::int64_t total = 0;
        for (auto h : hits) total += h;
        values[m] = static_cast<double>(total) / static_cast<double>(test_points);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= design_replications;
    EstimateResult res;
    res.value = mean;
    res.samples = test_points;
    res.design_replications = design_replications;
    res.seed = seed;
    if (design_replications > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        res.std_err = std::sqrt(ss / (static_cast<double>(design_replications) *
                                      (design_replications - 1)));
    } else {
        res.std_err = std::sqrt(mean * (1.0 - mean) / static_cast<double>(test_points));
    }
    return res;
}

}  // namespace hypercover

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hypercover/designs.hpp"
#include "hypercover/estimate.hpp"
#include "hypercover/mc_kernels.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"
#include "hypercover/special.hpp"

namespace hypercover {

struct CoverageQuery {
    int d = 1;
    int n = 1;
    double r = 0.0;
    SchemeSpec scheme;
    double target = 0.9;  // the 1 - gamma level

    void validate() const {
        if (!(r >= 0.0)) throw std::invalid_argument("CoverageQuery: r must be >= 0");
        if (!(target > 0.0 && target < 1.0))
            throw std::invalid_argument("CoverageQuery: target must be in (0,1)");
        scheme.validate(d);
    }
};

// Fraction of uniform test points of [-1,1]^d within r of the design.
// Chunked with counter-derived streams: identical output for any worker count.
inline EstimateResult coverage_mc(const Design& design, double r, std::int64_t test_points,
                                  std::uint64_t seed) {
    if (test_points < 1) throw std::invalid_argument("coverage_mc: test_points must be >= 1");
    const int d = design.d;
    const double r2 = r * r;
    const std::int64_t n_chunks = (test_points + detail::kCoverChunk - 1) / detail::kCoverChunk;
    std::vector<std::int64_t> hits(n_chunks, 0);
    for_each_chunk(n_chunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kCoverChunk;
        const std::int64_t len = std::min(detail::kCoverChunk, test_points - lo);
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(c));
        std::vector<double> x(d);
        std::int64_t h = 0;
        for (std::int64_t i = 0; i < len; ++i) {
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            if (detail::covered(x, design.points, d, r2)) ++h;
        }
        hits[c] = h;
    });
    std::int64_t total = 0;
    for (auto h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(test_points);
    EstimateResult res;
    res.value = p;
    res.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(test_points));
    res.samples = test_points;
    res.seed = seed;
    return res;
}

// min_j ||U_i - Z_j||^2 for test_points uniform draws; same chunk contract.
inline std::vector<double> nearest_sq_distances(const Design& design, std::int64_t test_points,
                                                std::uint64_t seed) {
    if (test_points < 1) throw std::invalid_argument("nearest_sq_distances: test_points must be >= 1");
    const int d = design.d;
    std::vector<double> out(test_points);
    const std::int64_t n_chunks = (test_points + detail::kCoverChunk - 1) / detail::kCoverChunk;
    for_each_chunk(n_chunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kCoverChunk;
        const std::int64_t len = std::min(detail::kCoverChunk, test_points - lo);
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(c));
        std::vector<double> x(d);
        for (std::int64_t i = 0; i < len; ++i) {
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            out[lo + i] = detail::min_sq_dist(x, design.points, d);
        }
    });
    return out;
}

// Coverage averaged over M independent design draws. Deterministic schemes
// are reduced to a single draw; the result's design_replications records it.
inline EstimateResult coverage_mc_averaged(SchemeId id, int d, int n, double r, double delta,
                                           double alpha, std::int64_t test_points,
                                           int design_replications, std::uint64_t seed) {
    if (design_replications < 1)
        throw std::invalid_argument("coverage_mc_averaged: design_replications must be >= 1");
    int m_eff = design_replications;
    if (scheme_is_deterministic(id)) m_eff = 1;
    std::vector<double> values(m_eff);
    double within_se = 0.0;
    for (int m = 0; m < m_eff; ++m) {
        const Design design = generate_design(id, d, n, delta, alpha, detail::design_seed(seed, m));
        const auto est = coverage_mc(design, r, test_points, detail::points_seed(seed, m));
        values[m] = est.value;
        within_se = est.std_err;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m_eff;
    double se = within_se;
    if (m_eff > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        // dispersion of per-design estimates already carries the MC noise
        se = std::sqrt(ss / (static_cast<double>(m_eff) * (m_eff - 1)));
    }
    EstimateResult res;
    res.value = mean;
    res.std_err = se;
    res.samples = test_points;
    res.design_replications = m_eff;
    res.seed = seed;
    return res;
}

namespace detail {

// Inner exponent of the coverage integrals: the per-point covering
// probability at the normal-surrogate slice s of ||U||^2, clamped into [0,1].
// s' would go negative past s = -sqrt(5d)/2 where the surrogate leaves the
// physical range, so it is clamped at zero.
inline double union_psi(double s, int d, std::int64_t n, double r, double delta, bool corrected) {
    double sp = (d + 2.0 * s * std::sqrt(d / 5.0)) / (delta * delta);
    if (sp < 0.0) sp = 0.0;
    const double rd = r / delta;
    const double denom = 2.0 * std::sqrt(sp + d / 5.0);
    const double cs = (3.0 * rd * rd - sp - d) / denom;
    double p = std_normal_cdf(cs);
    if (corrected) {
        p += (1.0 + 4.0 / d) * (sp + d / 21.0) / (5.0 * std::pow(sp + d / 5.0, 1.5)) *
             (1.0 - cs * cs) * std_normal_pdf(cs);
    }
    p = std::clamp(p, 0.0, 1.0);
    return std::exp(-static_cast<double>(n) * p);
}

inline double coverage_approx_impl(int d, std::int64_t n, double r, double delta, bool corrected,
                                   const QuadratureSpec& quad) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("coverage_approx: delta must be in (0,1]");
    if (d < 1 || n < 1) throw std::invalid_argument("coverage_approx: bad d or n");
    if (!(r >= 0.0)) throw std::invalid_argument("coverage_approx: r must be >= 0");
    if (r == 0.0) return 0.0;
    const double integral =
        integrate_normal_weighted(quad, [&](double s) { return union_psi(s, d, n, r, delta, corrected); });
    return std::clamp(1.0 - integral, 0.0, 1.0);
}

}  // namespace detail

// Normal-approximation route for the expected coverage.
inline double coverage_approx1(int d, std::int64_t n, double r, double delta,
                               const QuadratureSpec& quad = QuadratureSpec::gauss_hermite(128)) {
    return detail::coverage_approx_impl(d, n, r, delta, false, quad);
}

// Skew-corrected route (the accurate one).
inline double coverage_approx2(int d, std::int64_t n, double r, double delta,
                               const QuadratureSpec& quad = QuadratureSpec::gauss_hermite(128)) {
    return detail::coverage_approx_impl(d, n, r, delta, true, quad);
}

enum class CoverageMethod { Mc, Approx2 };

struct McBudget {
    std::int64_t test_points = 100000;
    int design_replications = 50;
    std::uint64_t seed = 1;
};

namespace detail {

// bisection for the smallest r with coverage(r) >= target; coverage must be
// nondecreasing in r
inline double bisect_radius(const std::function<double(double)>& coverage, int d, double target,
                            double tol, double r_resolution) {
    double lo = 0.0;
    double hi = 2.0 * std::sqrt(static_cast<double>(d));
    if (coverage(hi) < target)
        throw std::runtime_error("radius_for_target: target not reached below r = 2 sqrt(d)");
    while (hi - lo > r_resolution) {
        const double mid = 0.5 * (lo + hi);
        const double c = coverage(mid);
        if (std::fabs(c - target) <= tol) return mid;
        if (c < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Smallest radius achieving the target coverage for a fixed design. The MC
// route freezes one nearest-distance array, so the bisection objective is
// exactly monotone and noise-free in r.
inline double radius_for_target(const Design& design, double target, CoverageMethod method,
                                const McBudget& budget = {}) {
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("radius_for_target: target must be in (0,1)");
    if (method == CoverageMethod::Approx2) {
        return detail::bisect_radius(
            [&](double r) { return coverage_approx2(design.d, design.n(), r, design.scheme.delta); },
            design.d, target, 0.002, 1e-3);
    }
    const auto dist = nearest_sq_distances(design, budget.test_points, budget.seed);
    const double se = std::sqrt(target * (1.0 - target) / static_cast<double>(budget.test_points));
    auto coverage = [&](double r) {
        const double r2 = r * r;
        std::int64_t hits = 0;
        for (double v : dist)
            if (v <= r2) ++hits;
        return static_cast<double>(hits) / static_cast<double>(dist.size());
    };
    return detail::bisect_radius(coverage, design.d, target, se, 1e-3);
}

// Same, averaged over design draws of a scheme.
inline double radius_for_target(SchemeId id, int d, int n, double delta, double alpha, double target,
                                CoverageMethod method, const McBudget& budget = {}) {
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("radius_for_target: target must be in (0,1)");
    if (method == CoverageMethod::Approx2) {
        return detail::bisect_radius([&](double r) { return coverage_approx2(d, n, r, delta); }, d,
                                     target, 0.002, 1e-3);
    }
    const int m_eff = scheme_is_deterministic(id) ? 1 : budget.design_replications;
    std::vector<std::vector<double>> dists(m_eff);
    for (int m = 0; m < m_eff; ++m) {
        const Design design =
            generate_design(id, d, n, delta, alpha, detail::design_seed(budget.seed, m));
        dists[m] =
            nearest_sq_distances(design, budget.test_points, detail::points_seed(budget.seed, m));
    }
    const double total = static_cast<double>(budget.test_points) * m_eff;
    auto coverage = [&](double r) {
        const double r2 = r * r;
        std::int64_t hits = 0;
        for (const auto& dist : dists)
            for (double v : dist)
                if (v <= r2) ++hits;
        return static_cast<double>(hits) / total;
    };
    const double se = std::sqrt(target * (1.0 - target) / total);
    return detail::bisect_radius(coverage, d, target, se, 1e-3);
}

// ---------------------------------------------------------------------------
// delta optimization

struct DeltaOptimum {
    double delta_star = 0.0;
    double value_at_star = 0.0;
};

namespace detail {

// mean coverage over the frozen replicates with the base design scaled to delta
inline double frozen_coverage(const FrozenSweep& fr, double delta, double r) {
    const double r2 = r * r;
    const int d = fr.d;
    double mean = 0.0;
    std::vector<double> scaled;
    for (std::size_t m = 0; m < fr.base_points.size(); ++m) {
        scaled = fr.base_points[m];
        for (double& v : scaled) v *= delta;
        const auto& pts = fr.test_points[m];
        const std::int64_t np = static_cast<std::int64_t>(pts.size()) / d;
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < np; ++i)
            if (covered(std::span<const double>(pts.data() + i * d, d), scaled, d, r2)) ++hits;
        mean += static_cast<double>(hits) / static_cast<double>(np);
    }
    return mean / static_cast<double>(fr.base_points.size());
}

}  // namespace detail

// argmax over delta of the coverage at fixed r.
inline DeltaOptimum optimize_delta(SchemeId id, int d, int n, double r, CoverageMethod method,
                                   double alpha = 1.0, const McBudget& budget = {}) {
    const double delta_max = scheme_delta_max(id, d);
    if (method == CoverageMethod::Approx2) {
        const auto [ds, v] = detail::maximize_over_delta(
            [&](double delta) { return coverage_approx2(d, n, r, delta); }, std::min(delta_max, 1.0));
        return {ds, v};
    }
    const detail::FrozenSweep fr = detail::freeze_sweep(id, d, n, alpha, budget.test_points,
                                                        budget.design_replications, budget.seed);
    const auto [ds, v] = detail::maximize_over_delta(
        [&](double delta) { return detail::frozen_coverage(fr, delta, r); }, delta_max);
    return {ds, v};
}

}  // namespace hypercover

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hypercover/designs.hpp"
#include "hypercover/estimate.hpp"
#include "hypercover/mc_kernels.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

struct QuantizeQuery {
    int d = 1;
    int n = 1;
    SchemeSpec scheme;
    bool normalize = false;  // report n^{2/d} E theta instead of E theta

    void validate() const {
        if (n < 1) throw std::invalid_argument("QuantizeQuery: n must be >= 1");
        scheme.validate(d);
    }
};

// Mean squared distance from a uniform point of [-1,1]^d to the nearest
// design point. Deterministic chunking as in coverage_mc.
inline EstimateResult quantization_mc(const Design& design, std::int64_t test_points,
                                      std::uint64_t seed) {
    if (design.points.empty()) throw std::invalid_argument("quantization_mc: empty design");
    if (test_points < 1) throw std::invalid_argument("quantization_mc: test_points must be >= 1");
    const int d = design.d;
    const std::int64_t n_chunks = (test_points + detail::kCoverChunk - 1) / detail::kCoverChunk;
    std::vector<double> sums(n_chunks, 0.0);
    std::vector<double> sq_sums(n_chunks, 0.0);
    for_each_chunk(n_chunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kCoverChunk;
        const std::int64_t len = std::min(detail::kCoverChunk, test_points - lo);
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(c));
        std::vector<double> x(d);
        double acc = 0.0, acc2 = 0.0;
        for (std::int64_t i = 0; i < len; ++i) {
            for (double& v : x) v = rng.uniform(-1.0, 1.0);
            const double m = detail::min_sq_dist(x, design.points, d);
            acc += m;
            acc2 += m * m;
        }
        sums[c] = acc;
        sq_sums[c] = acc2;
    });
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        s1 += sums[c];
        s2 += sq_sums[c];
    }
    const double mean = s1 / static_cast<double>(test_points);
    const double var = std::max(0.0, s2 / static_cast<double>(test_points) - mean * mean);
    EstimateResult res;
    res.value = mean;
    res.std_err = std::sqrt(var / static_cast<double>(test_points));
    res.samples = test_points;
    res.seed = seed;
    return res;
}

// Analytic estimate of E theta_n for centers uniform on [-delta, delta]^d:
//   (sqrt d / 3) * [ sqrt d (1 + delta^2) - c delta sqrt(1 + delta^2/5) sqrt(2 log n) ]
// with c = 2, or 8/5 for the small-d corrected variant.
inline double quantization_approx(int d, std::int64_t n, double delta, bool corrected) {
    if (d < 1 || n < 1) throw std::invalid_argument("quantization_approx: bad d or n");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("quantization_approx: delta must be in [0,1]");
    const double c = corrected ? 1.6 : 2.0;
    const double sd = std::sqrt(static_cast<double>(d));
    const double en = std::sqrt(2.0 * std::log(static_cast<double>(n)));
    const double f = sd * (1.0 + delta * delta) - c * delta * std::sqrt(1.0 + delta * delta / 5.0) * en;
    return sd / 3.0 * f;
}

// n^{2/d} scaling that makes quantization errors comparable across n.
inline double normalized_error(int d, std::int64_t n, double e_theta) {
    if (d < 1 || n < 1) throw std::invalid_argument("normalized_error: bad d or n");
    if (!(e_theta >= 0.0)) throw std::invalid_argument("normalized_error: e_theta must be >= 0");
    return std::pow(static_cast<double>(n), 2.0 / static_cast<double>(d)) * e_theta;
}

struct QuantizeOptimum {
    double delta_star = 0.0;
    double min_normalized_error = 0.0;
};

namespace detail {

// mean quantization error over frozen replicates at a given delta scale
inline double frozen_quantization(const FrozenSweep& fr, double delta) {
    const int d = fr.d;
    double mean = 0.0;
    std::vector<double> scaled;
    for (std::size_t m = 0; m < fr.base_points.size(); ++m) {
        scaled = fr.base_points[m];
        for (double& v : scaled) v *= delta;
        const auto& pts = fr.test_points[m];
        const std::int64_t np = static_cast<std::int64_t>(pts.size()) / d;
        double acc = 0.0;
        for (std::int64_t i = 0; i < np; ++i)
            acc += min_sq_dist(std::span<const double>(pts.data() + i * d, d), scaled, d);
        mean += acc / static_cast<double>(np);
    }
    return mean / static_cast<double>(fr.base_points.size());
}

}  // namespace detail

// argmin over delta of the MC-estimated normalized error, frozen test points
// across the sweep.
inline QuantizeOptimum minimize_over_delta(SchemeId id, int d, int n, std::int64_t test_points,
                                           int design_replications, std::uint64_t seed,
                                           double alpha = 1.0) {
    const detail::FrozenSweep fr =
        detail::freeze_sweep(id, d, n, alpha, test_points, design_replications, seed);
    const double scale = std::pow(static_cast<double>(n), 2.0 / static_cast<double>(d));
    const auto [ds, neg] = detail::maximize_over_delta(
        [&](double delta) { return -scale * detail::frozen_quantization(fr, delta); },
        scheme_delta_max(id, d));
    return {ds, -neg};
}

}  // namespace hypercover

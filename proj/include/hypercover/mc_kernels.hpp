#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hypercover/designs.hpp"
#include "hypercover/rng.hpp"

namespace hypercover::detail {

inline constexpr std::int64_t kCoverChunk = 1 << 14;

// seeds for the independent streams of one estimation run
inline std::uint64_t design_seed(std::uint64_t seed, int replicate) {
    std::uint64_t s = seed ^ 0x9e3779b97f4a7c15ULL;
    (void)splitmix64(s);
    return s + 0x100000001b3ULL * static_cast<std::uint64_t>(replicate);
}
inline std::uint64_t points_seed(std::uint64_t seed, int replicate) {
    std::uint64_t s = seed + 0xabcdef1234567891ULL * static_cast<std::uint64_t>(replicate + 1);
    return splitmix64(s);
}

// is min_j ||x - Z_j||^2 <= r2, with early exit per point
inline bool covered(std::span<const double> x, std::span<const double> points, int d, double r2) {
    const std::size_t n = points.size() / d;
    for (std::size_t j = 0; j < n; ++j) {
        const double* z = points.data() + j * d;
        double acc = 0.0;
        bool inside = true;
        for (int c = 0; c < d; ++c) {
            const double diff = x[c] - z[c];
            acc += diff * diff;
            if (acc > r2) {
                inside = false;
                break;
            }
        }
        if (inside) return true;
    }
    return false;
}

// min_j ||x - Z_j||^2 with a running-best bound
inline double min_sq_dist(std::span<const double> x, std::span<const double> points, int d) {
    const std::size_t n = points.size() / d;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double* z = points.data() + j * d;
        double acc = 0.0;
        for (int c = 0; c < d; ++c) {
            const double diff = x[c] - z[c];
            acc += diff * diff;
            if (acc >= best) break;
        }
        if (acc < best) best = acc;
    }
    return best;
}

// is min_j max_c |x_c - z_c| <= r (the L-infinity analog), early exit
inline bool covered_linf(std::span<const double> x, std::span<const double> points, int d,
                         double r) {
    const std::size_t n = points.size() / d;
    for (std::size_t j = 0; j < n; ++j) {
        const double* z = points.data() + j * d;
        bool inside = true;
        for (int c = 0; c < d; ++c) {
            if (std::fabs(x[c] - z[c]) > r) {
                inside = false;
                break;
            }
        }
        if (inside) return true;
    }
    return false;
}

// Frozen inputs for a delta sweep: base designs drawn once at unit scale and
// one test-point set per replicate. Every scheme scales linearly in delta,
// so the design at delta is delta times its base design; reusing the same
// draws across delta removes the Monte Carlo noise from the argmin/argmax.
struct FrozenSweep {
    std::vector<std::vector<double>> base_points;  // per replicate, n x d at delta = 1
    std::vector<std::vector<double>> test_points;  // per replicate, N x d
    int d = 0;
};

inline FrozenSweep freeze_sweep(SchemeId id, int d, int n, double alpha, std::int64_t test_points,
                                int design_replications, std::uint64_t seed) {
    FrozenSweep fr;
    fr.d = d;
    const int m_eff = scheme_is_deterministic(id) ? 1 : design_replications;
    fr.base_points.resize(m_eff);
    fr.test_points.resize(m_eff);
    for (int m = 0; m < m_eff; ++m) {
        fr.base_points[m] = generate_design(id, d, n, 1.0, alpha, design_seed(seed, m)).points;
        auto& pts = fr.test_points[m];
        pts.resize(static_cast<std::size_t>(test_points) * d);
        Rng rng = make_stream(points_seed(seed, m), 0);
        for (double& v : pts) v = rng.uniform(-1.0, 1.0);
    }
    return fr;
}

// grid search at kDeltaGridStep over (0, delta_max], then golden-section
// refinement around the best grid point
inline constexpr double kDeltaGridStep = 0.02;
inline constexpr double kDeltaRefine = 0.005;

template <typename F>
std::pair<double, double> maximize_over_delta(const F& objective, double delta_max) {
    double best_delta = kDeltaGridStep;
    double best_value = -std::numeric_limits<double>::infinity();
    for (double delta = kDeltaGridStep; delta <= delta_max + 1e-12; delta += kDeltaGridStep) {
        const double dd = std::min(delta, delta_max);
        const double v = objective(dd);
        if (v > best_value) {
            best_value = v;
            best_delta = dd;
        }
    }
    double lo = std::max(kDeltaGridStep / 2.0, best_delta - kDeltaGridStep);
    double hi = std::min(delta_max, best_delta + kDeltaGridStep);
    const double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (hi - lo > kDeltaRefine) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = objective(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = objective(x1);
        }
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = objective(mid);
    if (fm >= best_value) return {mid, fm};
    return {best_delta, best_value};
}

}  // namespace hypercover::detail

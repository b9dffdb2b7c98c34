#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hypercover/estimate.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"
#include "hypercover/rvlib.hpp"
#include "hypercover/special.hpp"

namespace hypercover {

// The fraction of [-1,1]^d covered by a ball of radius r centered at a point
// with squared norm z_norm_sq. The analytic approximations depend on the
// center through its norm only; PointKind selects the small-d adjustment
// factor (1 + 3/d on the cube diagonal, 1 + 4/d for a typical random point).
enum class PointKind { Diagonal, Typical };

struct LocalCoverQuery {
    int d = 1;
    double z_norm_sq = 0.0;
    double r = 0.0;
    PointKind point_kind = PointKind::Typical;

    void validate() const {
        if (d < 1) throw std::invalid_argument("LocalCoverQuery: d must be >= 1");
        if (!(z_norm_sq >= 0.0) || !std::isfinite(z_norm_sq))
            throw std::invalid_argument("LocalCoverQuery: z_norm_sq must be finite and >= 0");
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::invalid_argument("LocalCoverQuery: r must be finite and >= 0");
    }
};

struct MomentTriple {
    double mu = 0.0;
    double sigma_sq = 0.0;
    double mu3 = 0.0;
};

// Reduce a query on the cube [-delta, delta]^d to the unit-half-side cube.
inline LocalCoverQuery rescale_query(int d, double z_prime_norm_sq, double r_prime, double delta,
                                     PointKind kind = PointKind::Typical) {
    if (!(delta > 0.0)) throw std::invalid_argument("rescale_query: delta must be > 0");
    LocalCoverQuery q{d, z_prime_norm_sq / (delta * delta), r_prime / delta, kind};
    q.validate();
    return q;
}

// Mean, variance and third central moment of ||U - Z||^2, U uniform on the cube.
inline MomentTriple moments(const LocalCoverQuery& q) {
    q.validate();
    const double zsq = q.z_norm_sq;
    const double d = static_cast<double>(q.d);
    return MomentTriple{zsq + d / 3.0, (4.0 / 3.0) * (zsq + d / 15.0),
                        (16.0 / 15.0) * (zsq + d / 63.0)};
}

// Standardized argument t = (r^2 - mu) / sigma.
inline double standardized_t(const LocalCoverQuery& q) {
    const MomentTriple m = moments(q);
    return (q.r * q.r - m.mu) / std::sqrt(m.sigma_sq);
}

// Plain CLT approximation Phi(t).
inline double approx_normal(const LocalCoverQuery& q) { return std_normal_cdf(standardized_t(q)); }

namespace detail {

inline double skew_correction(int d, double zsq, double t) {
    const double num = zsq + d / 63.0;
    const double den = 5.0 * std::sqrt(3.0) * std::pow(zsq + d / 15.0, 1.5);
    return num / den * (1.0 - t * t) * std_normal_pdf(t);
}

}  // namespace detail

// One-term Edgeworth-type correction on top of Phi(t). May leave [0,1];
// callers that report values clamp, the raw number is returned here so
// overshoot stays observable.
inline double approx_petrov(const LocalCoverQuery& q) {
    const double t = standardized_t(q);
    return std_normal_cdf(t) + detail::skew_correction(q.d, q.z_norm_sq, t);
}

// Same correction scaled by c_d (1 + 3/d diagonal, 1 + 4/d typical).
inline double approx_adjusted(const LocalCoverQuery& q) {
    const double t = standardized_t(q);
    const double cd = (q.point_kind == PointKind::Diagonal) ? 1.0 + 3.0 / q.d : 1.0 + 4.0 / q.d;
    return std_normal_cdf(t) + cd * detail::skew_correction(q.d, q.z_norm_sq, t);
}

// Radius R with approx_normal(R) = Phi(-beta):
//   R^2 = ||Z||^2 + d/3 - 2 beta sqrt(||Z||^2/3 + d/45).
inline double threshold_radius(int d, double z_norm_sq, double beta) {
    if (d < 1) throw std::invalid_argument("threshold_radius: d must be >= 1");
    if (!(z_norm_sq >= 0.0)) throw std::invalid_argument("threshold_radius: z_norm_sq must be >= 0");
    const double sigma_half = std::sqrt(z_norm_sq / 3.0 + d / 45.0);
    const double bracket = z_norm_sq + d / 3.0 - 2.0 * beta * sigma_half;
    if (bracket < 0.0) {
        std::ostringstream msg;
        msg << "threshold_radius: R^2 is negative; beta must be <= "
            << (z_norm_sq + d / 3.0) / (2.0 * sigma_half);
        throw std::domain_error(msg.str());
    }
    return std::sqrt(bracket);
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle

namespace detail {

inline constexpr std::int64_t kMcChunk = 1 << 15;

// Hit count of {||U - Z|| <= r} over `count` uniform draws from one stream.
inline std::int64_t count_ball_hits(std::span<const double> z, double r, std::int64_t count,
                                    Rng rng) {
    const double r2 = r * r;
    const int d = static_cast<int>(z.size());
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        double acc = 0.0;
        bool inside = true;
        for (int j = 0; j < d; ++j) {
            const double diff = rng.uniform(-1.0, 1.0) - z[j];
            acc += diff * diff;
            if (acc > r2) {
                inside = false;
                break;
            }
        }
        if (inside) ++hits;
    }
    return hits;
}

}  // namespace detail

// Direct MC estimate of the covered fraction for an explicit center.
// Samples are split into fixed chunks with counter-derived streams, so the
// value is identical for any worker count.
inline EstimateResult mc_oracle(std::span<const double> z, double r, std::int64_t samples,
                                std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("mc_oracle: samples must be >= 1");
    if (z.empty()) throw std::invalid_argument("mc_oracle: empty center");
    const std::int64_t n_chunks = (samples + detail::kMcChunk - 1) / detail::kMcChunk;
    std::vector<std::int64_t> hits(n_chunks, 0);
    for_each_chunk(n_chunks, [&](std::int64_t c) {
        const std::int64_t lo = c * detail::kMcChunk;
        const std::int64_t len = std::min(detail::kMcChunk, samples - lo);
        hits[c] = detail::count_ball_hits(z, r, len, make_stream(seed, c));
    });
    std::int64_t total = 0;
    for (std::int64_t h : hits) total += h;
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    EstimateResult res;
    res.value = p;
    res.std_err = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    res.samples = samples;
    res.seed = seed;
    return res;
}

// Materializes a center from the query: on the diagonal for Diagonal, a
// seeded random direction of the right norm for Typical.
inline std::vector<double> materialize_center(const LocalCoverQuery& q, std::uint64_t seed = 0) {
    q.validate();
    std::vector<double> z(q.d, 0.0);
    if (q.z_norm_sq == 0.0) return z;
    const double norm = std::sqrt(q.z_norm_sq);
    if (q.point_kind == PointKind::Diagonal) {
        const double lambda = norm / std::sqrt(static_cast<double>(q.d));
        for (double& v : z) v = lambda;
        return z;
    }
    Rng rng = make_stream(seed, 0x5eedULL);
    double len2 = 0.0;
    do {
        len2 = 0.0;
        for (double& v : z) {
            v = rng.normal();
            len2 += v * v;
        }
    } while (len2 == 0.0);
    const double scale = norm / std::sqrt(len2);
    for (double& v : z) v *= scale;
    return z;
}

inline EstimateResult mc_oracle(const LocalCoverQuery& q, std::int64_t samples, std::uint64_t seed) {
    const std::vector<double> z = materialize_center(q, seed);
    return mc_oracle(z, q.r, samples, seed);
}

// ---------------------------------------------------------------------------
// Characteristic-function oracle

namespace detail {

// int_a^b exp(i s u^2) du by composite Simpson; the panel count tracks the
// total phase s (b^2 - a^2).
inline std::complex<double> fresnel_segment(double s, double a, double b) {
    if (a >= b) return {0.0, 0.0};
    const double phase = std::fabs(s) * (b * b - a * a);
    int panels = static_cast<int>(phase * 2.5) + 16;
    if (panels > 60000) panels = 60000;
    panels += panels % 2;
    const double h = (b - a) / panels;
    std::complex<double> acc(0.0, 0.0);
    auto f = [s](double u) {
        const double p = s * u * u;
        return std::complex<double>(std::cos(p), std::sin(p));
    };
    acc = f(a) + f(b);
    for (int k = 1; k < panels; ++k) acc += f(a + k * h) * ((k % 2) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

// Characteristic function of (u - z)^2, u uniform on [-1,1], via the
// t = u^2 substitution (smooth Fresnel-type integrands, no 1/sqrt(t)
// singularity left).
inline std::complex<double> coordinate_cf(double z, double s) {
    const double az = std::fabs(z);
    if (az <= 1.0)
        return fresnel_segment(s, 0.0, 1.0 - az) + 0.5 * fresnel_segment(s, 1.0 - az, 1.0 + az);
    return 0.5 * fresnel_segment(s, az - 1.0, az + 1.0);
}

inline std::complex<double> product_cf(std::span<const double> z, double s) {
    std::complex<double> prod(1.0, 0.0);
    for (double zj : z) {
        prod *= coordinate_cf(zj, s);
        if (std::abs(prod) < 1e-300) break;
    }
    return prod;
}

}  // namespace detail

// C_{d,Z,r} from the product of per-coordinate characteristic functions and
// Gil-Pelaez inversion at x = r^2. The s-axis is split into half-periods of
// the fastest oscillation; the alternating chunk series is summed with
// repeated averaging, which handles the slowly decaying d <= 3 tails.
inline double cf_oracle(std::span<const double> z, double r) {
    constexpr int kMaxDim = 30;
    const int d = static_cast<int>(z.size());
    if (d < 1) throw std::invalid_argument("cf_oracle: empty center");
    if (d > kMaxDim)
        throw std::invalid_argument("cf_oracle: supported only for d <= 30 (cost guard)");
    const double x = r * r;

    double freq = x;
    for (double zj : z) freq += (1.0 + std::fabs(zj)) * (1.0 + std::fabs(zj));
    const double h = M_PI / std::max(freq, 1.0);

    auto integrand = [&](double s) {
        const std::complex<double> val =
            std::complex<double>(std::cos(s * x), -std::sin(s * x)) * detail::product_cf(z, s);
        return val.imag() / s;
    };

    constexpr int kMaxChunks = 700;
    std::vector<double> partial;
    partial.reserve(kMaxChunks);
    double total = 0.0;
    bool plain_converged = false;
    for (int k = 0; k < kMaxChunks; ++k) {
        const double a = (k == 0) ? h * 1e-9 : k * h;
        const double b = (k + 1) * h;
        const double chunk = adaptive_simpson(integrand, a, b, 1e-13, 28);
        total += chunk;
        partial.push_back(total);
        if (k > 16 && std::fabs(chunk) < 1e-13) {
            plain_converged = true;
            break;
        }
    }
    double tail_value = total;
    if (!plain_converged && partial.size() > 40) {
        // repeated averaging of the last partial sums (suffix of the
        // alternating series)
        std::vector<double> avg(partial.end() - 40, partial.end());
        while (avg.size() > 1) {
            for (std::size_t i = 0; i + 1 < avg.size(); ++i) avg[i] = 0.5 * (avg[i] + avg[i + 1]);
            avg.pop_back();
        }
        tail_value = avg[0];
    }
    double cdf = 0.5 - tail_value / M_PI;
    if (cdf < 0.0) cdf = 0.0;
    if (cdf > 1.0) cdf = 1.0;
    return cdf;
}

// MC check of C_{d,V,r} = 2^{-d} C_{d,0,r} for a vertex V and r <= 1.
// Returns (vertex estimate, scaled center estimate), same seed and budget.
inline std::pair<double, double> vertex_relation_check(int d, double r, std::int64_t samples,
                                                       std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("vertex_relation_check: d must be >= 1");
    if (!(r <= 1.0)) throw std::invalid_argument("vertex_relation_check: identity requires r <= 1");
    std::vector<double> vertex(d, 1.0);
    std::vector<double> center(d, 0.0);
    const double lhs = mc_oracle(vertex, r, samples, seed).value;
    const double rhs = std::ldexp(mc_oracle(center, r, samples, seed).value, -d);
    return {lhs, rhs};
}

}  // namespace hypercover

#pragma once

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "hypercover/rng.hpp"
#include "hypercover/special.hpp"

namespace hypercover {

// eta = (xi - x)^2 with xi uniform on [-delta, delta].
struct ShiftedSquareDist {
    double x = 0.0;
    double delta = 1.0;

    void validate() const {
        if (!(delta > 0.0)) throw std::invalid_argument("ShiftedSquareDist: delta must be > 0");
    }
};

// c.d.f. of (xi - x)^2. Three pieces: sqrt(t)/delta inside the short side
// (only when |x| <= delta), the averaged middle branch, then 1.
inline double lemma1_cdf(const ShiftedSquareDist& dist, double t) {
    dist.validate();
    const double ax = std::fabs(dist.x);
    const double delta = dist.delta;
    if (t <= 0.0) return 0.0;
    const double lo = (delta - ax) * (delta - ax);
    const double hi = (delta + ax) * (delta + ax);
    if (t > hi) return 1.0;
    if (t < lo) return ax <= delta ? std::sqrt(t) / delta : 0.0;
    return (delta - ax + std::sqrt(t)) / (2.0 * delta);
}

// Density of (xi - x)^2; the point query at t = 0 is rejected since the
// density diverges there.
inline double lemma1_pdf(const ShiftedSquareDist& dist, double t) {
    dist.validate();
    if (t == 0.0) throw std::domain_error("lemma1_pdf: density is singular at t = 0");
    if (t < 0.0) return 0.0;
    const double ax = std::fabs(dist.x);
    const double delta = dist.delta;
    const double lo = (delta - ax) * (delta - ax);
    const double hi = (delta + ax) * (delta + ax);
    if (t > hi) return 0.0;
    if (t < lo) return ax <= delta ? 1.0 / (2.0 * delta * std::sqrt(t)) : 0.0;
    return 1.0 / (4.0 * delta * std::sqrt(t));
}

struct CentralMoments {
    double mean = 0.0;
    double variance = 0.0;
    double mu3 = 0.0;
    double mu4 = 0.0;
};

inline CentralMoments lemma1_central_moments(const ShiftedSquareDist& dist) {
    dist.validate();
    const double x2 = dist.x * dist.x;
    const double d2 = dist.delta * dist.delta;
    CentralMoments m;
    m.mean = x2 + d2 / 3.0;
    m.variance = (4.0 * d2 / 3.0) * (x2 + d2 / 15.0);
    m.mu3 = (16.0 * d2 * d2 / 15.0) * (x2 + d2 / 63.0);
    m.mu4 = 3.0 * m.mean * m.mu3;
    return m;
}

// c.d.f. of |xi - x|: the square-root transform of lemma1_cdf.
inline double lemma2_cdf(double x, double delta, double t) {
    if (t < 0.0) return 0.0;
    return lemma1_cdf(ShiftedSquareDist{x, delta}, t * t);
}

// Symmetric Beta(alpha, alpha) on [-delta, delta],
// density proportional to (delta^2 - t^2)^(alpha - 1).
struct BetaSymmetric {
    double alpha = 1.0;
    double delta = 1.0;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("BetaSymmetric: alpha must be > 0");
        if (!(delta > 0.0)) throw std::invalid_argument("BetaSymmetric: delta must be > 0");
    }
};

inline double beta_symmetric_pdf(const BetaSymmetric& dist, double t) {
    dist.validate();
    if (std::fabs(t) >= dist.delta) return 0.0;
    const double log_norm = (1.0 - 2.0 * dist.alpha) * std::log(2.0 * dist.delta) -
                            (2.0 * std::lgamma(dist.alpha) - std::lgamma(2.0 * dist.alpha));
    return std::exp(log_norm + (dist.alpha - 1.0) * std::log(dist.delta * dist.delta - t * t));
}

// (mu2, mu4) of the symmetric beta coordinate.
inline std::pair<double, double> beta_symmetric_moments(const BetaSymmetric& dist) {
    dist.validate();
    const double d2 = dist.delta * dist.delta;
    const double mu2 = d2 / (2.0 * dist.alpha + 1.0);
    const double mu4 = 3.0 * d2 * d2 / ((2.0 * dist.alpha + 1.0) * (2.0 * dist.alpha + 3.0));
    return {mu2, mu4};
}

// Mean and variance of ||Z||^2 for Z with d iid beta-symmetric coordinates.
inline std::pair<double, double> squared_norm_moments(int d, const BetaSymmetric& dist) {
    if (d < 1) throw std::invalid_argument("squared_norm_moments: d must be >= 1");
    dist.validate();
    const double a = dist.alpha;
    const double d2 = dist.delta * dist.delta;
    const double mean = d * d2 / (2.0 * a + 1.0);
    const double var = 4.0 * d * d2 * d2 * a / ((2.0 * a + 1.0) * (2.0 * a + 1.0) * (2.0 * a + 3.0));
    return {mean, var};
}

// Mean and variance of ||Z - Z'||^2 for independent Z, Z' as above.
inline std::pair<double, double> pair_distance_moments(int d, const BetaSymmetric& dist) {
    if (d < 1) throw std::invalid_argument("pair_distance_moments: d must be >= 1");
    dist.validate();
    const double a = dist.alpha;
    const double d2 = dist.delta * dist.delta;
    const double mean = 2.0 * d * d2 / (2.0 * a + 1.0);
    const double var =
        4.0 * d * d2 * d2 * (4.0 * a + 3.0) / ((2.0 * a + 1.0) * (2.0 * a + 1.0) * (2.0 * a + 3.0));
    return {mean, var};
}

namespace detail {

// Marsaglia-Tsang gamma sampler, shape >= 1.
inline double gamma_variate_ge1(double shape, Rng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double gamma_variate(double shape, Rng& rng) {
    if (shape >= 1.0) return gamma_variate_ge1(shape, rng);
    // boost shape by one, then scale back
    const double g = gamma_variate_ge1(shape + 1.0, rng);
    double u;
    do {
        u = rng.uniform01();
    } while (u == 0.0);
    return g * std::pow(u, 1.0 / shape);
}

}  // namespace detail

// One draw from BetaSymmetric. alpha == 1 must reproduce the plain uniform
// stream exactly (Scheme 4 with alpha = 1 is Scheme 1), so it takes the
// one-uniform path.
inline double beta_symmetric_sample(const BetaSymmetric& dist, Rng& rng) {
    dist.validate();
    if (dist.alpha == 1.0) return rng.uniform(-dist.delta, dist.delta);
    const double g1 = detail::gamma_variate(dist.alpha, rng);
    const double g2 = detail::gamma_variate(dist.alpha, rng);
    const double b = g1 / (g1 + g2);  // Beta(alpha, alpha) on [0,1]
    return dist.delta * (2.0 * b - 1.0);
}

}  // namespace hypercover

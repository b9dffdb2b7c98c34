#pragma once

#include <cmath>
#include <stdexcept>

#include "hypercover/special.hpp"

namespace hypercover {

struct BallSpec {
    int d = 1;
    double r = 1.0;
    double center_norm = 0.0;
};

// log vol(B_d(1)) = (d/2) log(pi) - lgamma(d/2 + 1); everything else is
// derived from this in log space since Gamma(d/2+1) overflows near d = 340.
inline double log_unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("log_unit_ball_volume: d must be >= 1");
    return 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
}

inline double unit_ball_volume(int d) { return std::exp(log_unit_ball_volume(d)); }

// Radius r_d with vol(B_d(r_d)) = 1.
inline double unit_volume_radius(int d) { return std::exp(-log_unit_ball_volume(d) / d); }

// Radius of the ball whose volume equals the cube [-delta, delta]^d.
inline double matched_cube_radius(int d, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("matched_cube_radius: delta must be > 0");
    return 2.0 * delta * unit_volume_radius(d);
}

// Volume of the cap of height h cut from B_d(r):
//   K = 1/2 r^d V_d I_{1-h^2/r^2}((d-1)/2, 1/2) - (h/d)(r^2-h^2)^{(d-1)/2} V_{d-1}
// (hyper-sector minus cone), evaluated in log space per term.
inline double cap_volume(int d, double r, double h) {
    if (d < 1) throw std::invalid_argument("cap_volume: d must be >= 1");
    if (!(r > 0.0)) throw std::invalid_argument("cap_volume: r must be > 0");
    if (h < 0.0 || h > r) throw std::invalid_argument("cap_volume: h must be in [0, r]");
    if (h == r) return 0.0;
    if (d == 1) return r - h;  // the cap is the interval [h, r]
    const double u = 1.0 - (h * h) / (r * r);
    const double ibeta = reg_incomplete_beta(u, 0.5 * (d - 1), 0.5);
    double sector = 0.0;
    if (ibeta > 0.0)
        sector = std::exp(std::log(0.5) + d * std::log(r) + log_unit_ball_volume(d) + std::log(ibeta));
    double cone = 0.0;
    if (h > 0.0) {
        const double lvd1 = (d >= 2) ? log_unit_ball_volume(d - 1) : 0.0;  // V_0 = 1
        cone = std::exp(std::log(h) - std::log(static_cast<double>(d)) +
                        0.5 * (d - 1) * std::log(r * r - h * h) + lvd1);
    }
    const double k = sector - cone;
    return k > 0.0 ? k : 0.0;
}

// vol(B_d(Z, r) ∩ B_d(Z', r)) with s = ||Z - Z'||: two caps of height s/2.
inline double two_ball_intersection_volume(int d, double r, double center_distance) {
    if (!(r > 0.0)) throw std::invalid_argument("two_ball_intersection_volume: r must be > 0");
    if (center_distance < 0.0)
        throw std::invalid_argument("two_ball_intersection_volume: distance must be >= 0");
    if (center_distance >= 2.0 * r) return 0.0;
    return 2.0 * cap_volume(d, r, 0.5 * center_distance);
}

// Hoeffding bound on P{ | ||X||^2 - d/3 | >= eps d } for X uniform on
// [-1,1]^d, clipped into [0,1].
inline double concentration_band_bound(int d, double eps) {
    if (d < 1) throw std::invalid_argument("concentration_band_bound: d must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("concentration_band_bound: eps must be > 0");
    const double b = 2.0 * std::exp(-2.0 * d * eps * eps);
    return b < 1.0 ? b : 1.0;
}

}  // namespace hypercover

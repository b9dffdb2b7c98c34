#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercover/bigfloat.hpp"

namespace hypercover {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;
inline constexpr double kSqrtPi = 1.7724538509055160273;

// Standard normal c.d.f. via erfc, stable in both tails.
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

inline double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

namespace detail {

// Continued fraction for the regularized incomplete beta function
// (modified Lentz; cf. Numerical Recipes betacf).
inline double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_t(a, b).
inline double reg_incomplete_beta(double t, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_incomplete_beta: a, b must be > 0");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("reg_incomplete_beta: t must be in [0,1]");
    if (t == 0.0) return 0.0;
    if (t == 1.0) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(t) +
                       b * std::log1p(-t);
    const double bt = std::exp(lbt);
    if (t < (a + 1.0) / (a + b + 2.0)) return bt * detail::beta_cont_frac(a, b, t) / a;
    return 1.0 - bt * detail::beta_cont_frac(b, a, 1.0 - t) / b;
}

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSpec {
    enum class Domain { Interval, StdNormalWeight };

    int node_count = 128;
    Domain domain = Domain::StdNormalWeight;
    double lo = 0.0;
    double hi = 0.0;
    double target_abs_tol = 1e-10;

    static QuadratureSpec gauss_hermite(int nodes) {
        QuadratureSpec q;
        q.node_count = nodes;
        q.domain = Domain::StdNormalWeight;
        q.validate();
        return q;
    }
    static QuadratureSpec interval(double a, double b, double tol) {
        QuadratureSpec q;
        q.node_count = 2;
        q.domain = Domain::Interval;
        q.lo = a;
        q.hi = b;
        q.target_abs_tol = tol;
        q.validate();
        return q;
    }
    void validate() const {
        if (node_count < 2) throw std::invalid_argument("QuadratureSpec: node_count must be >= 2");
        if (!(target_abs_tol < 1.0) || target_abs_tol < 0.0)
            throw std::invalid_argument("QuadratureSpec: target_abs_tol must be in [0,1)");
        if (domain == Domain::Interval && !(lo < hi))
            throw std::invalid_argument("QuadratureSpec: empty interval");
    }
};

struct GaussHermiteRule {
    std::vector<double> node;    // roots of H_n, weight function e^{-x^2}
    std::vector<double> weight;  // sums to sqrt(pi)
};

namespace detail {

// Nodes/weights by Newton iteration on the orthonormal Hermite recurrence
// (cf. Numerical Recipes gauher).
inline GaussHermiteRule compute_gauss_hermite(int n) {
    GaussHermiteRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.166667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.node[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.node[1];
        } else {
            z = 2.0 * z - rule.node[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15) break;
        }
        rule.node[i] = z;
        rule.node[n - 1 - i] = -z;
        rule.weight[i] = 2.0 / (pp * pp);
        rule.weight[n - 1 - i] = rule.weight[i];
    }
    return rule;
}

}  // namespace detail

inline const GaussHermiteRule& gauss_hermite_rule(int n) {
    static std::map<int, GaussHermiteRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_hermite(n)).first;
    return it->second;
}

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Plain integral of f over the spec's interval.
template <typename F>
double integrate(const QuadratureSpec& spec, const F& f) {
    spec.validate();
    if (spec.domain != QuadratureSpec::Domain::Interval)
        throw std::invalid_argument("integrate: spec must carry an interval domain");
    return adaptive_simpson(f, spec.lo, spec.hi, spec.target_abs_tol);
}

// Integral of f against the standard normal density: Gauss-Hermite after the
// s = sqrt(2) x change of variables, or the adaptive rule applied to
// f(s) phi(s) when the spec carries an interval (the fallback domain).
template <typename F>
double integrate_normal_weighted(const QuadratureSpec& spec, const F& f) {
    spec.validate();
    if (spec.domain == QuadratureSpec::Domain::Interval)
        return adaptive_simpson([&](double s) { return f(s) * std_normal_pdf(s); }, spec.lo,
                                spec.hi, spec.target_abs_tol);
    const GaussHermiteRule& rule = gauss_hermite_rule(spec.node_count);
    double acc = 0.0;
    for (int i = 0; i < spec.node_count; ++i) acc += rule.weight[i] * f(kSqrt2 * rule.node[i]);
    return acc / kSqrtPi;
}

// ---------------------------------------------------------------------------
// Compensated summation

inline double kahan_sum(std::span<const double> terms) {
    double s = 0.0;
    double c = 0.0;
    for (double t : terms) {
        const double y = t - c;
        const double u = s + y;
        c = (u - s) - y;
        s = u;
    }
    return s;
}

// Sum with a precision request. Up to double precision this is Kahan
// summation; beyond it the terms are accumulated in an MPFR float of the
// requested width, which removes cancellation in long alternating series.
inline double compensated_sum(std::span<const double> terms, int precision_bits) {
    if (precision_bits < 1) throw std::invalid_argument("compensated_sum: precision_bits must be >= 1");
    for (double t : terms)
        if (!std::isfinite(t)) throw std::overflow_error("compensated_sum: non-finite term");
    if (precision_bits <= 53) {
        const double s = kahan_sum(terms);
        if (!std::isfinite(s)) throw std::overflow_error("compensated_sum: overflow in native sum");
        return s;
    }
    BigFloat acc(precision_bits);
    for (double t : terms) acc += t;
    if (!acc.finite()) throw std::overflow_error("compensated_sum: overflow in extended sum");
    return acc.to_double();
}

// Same, for terms already carried in extended precision (long alternating
// series whose terms cannot be represented exactly as doubles).
inline double compensated_sum(std::span<const BigFloat> terms, int precision_bits) {
    if (precision_bits < 1) throw std::invalid_argument("compensated_sum: precision_bits must be >= 1");
    BigFloat acc(precision_bits);
    for (const BigFloat& t : terms) {
        if (!t.finite()) throw std::overflow_error("compensated_sum: non-finite term");
        acc += t;
    }
    if (!acc.finite()) throw std::overflow_error("compensated_sum: overflow in extended sum");
    return acc.to_double();
}

// ---------------------------------------------------------------------------
// Expected maximum of n iid standard normals

enum class MaxNormalMode { Rough, Exact };

inline double expected_max_std_normal(std::int64_t n, MaxNormalMode mode = MaxNormalMode::Rough) {
    if (n < 1) throw std::invalid_argument("expected_max_std_normal: n must be >= 1");
    if (mode == MaxNormalMode::Rough) return std::sqrt(2.0 * std::log(static_cast<double>(n)));
    if (n == 1) return 0.0;
    // E max = int x n phi(x) Phi(x)^{n-1} dx; Phi^{n-1} through logs so the
    // left tail underflows cleanly.
    const double nn = static_cast<double>(n);
    auto integrand = [nn](double x) {
        const double lcdf = std::log(std_normal_cdf(x));
        const double w = (nn - 1.0) * lcdf;
        if (w < -745.0) return 0.0;
        return x * nn * std_normal_pdf(x) * std::exp(w);
    };
    const double hi = std::max(9.0, std::sqrt(2.0 * std::log(nn)) + 8.0);
    return adaptive_simpson(integrand, -9.0, hi, 1e-11);
}

}  // namespace hypercover

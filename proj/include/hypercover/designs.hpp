#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercover/factorial.hpp"
#include "hypercover/rng.hpp"
#include "hypercover/rvlib.hpp"
#include "hypercover/sobol.hpp"

namespace hypercover {

enum class SchemeId { S1, S2, S3, S4, S5, S6, S7 };

inline const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::S1: return "s1";
        case SchemeId::S2: return "s2";
        case SchemeId::S3: return "s3";
        case SchemeId::S4: return "s4";
        case SchemeId::S5: return "s5";
        case SchemeId::S6: return "s6";
        case SchemeId::S7: return "s7";
    }
    return "?";
}

inline SchemeId scheme_from_name(const std::string& s) {
    if (s == "s1") return SchemeId::S1;
    if (s == "s2") return SchemeId::S2;
    if (s == "s3") return SchemeId::S3;
    if (s == "s4") return SchemeId::S4;
    if (s == "s5") return SchemeId::S5;
    if (s == "s6") return SchemeId::S6;
    if (s == "s7") return SchemeId::S7;
    throw std::invalid_argument("unknown scheme: " + s);
}

// Deterministic point sets: fractional factorial and Sobol.
inline bool scheme_is_deterministic(SchemeId id) {
    return id == SchemeId::S3 || id == SchemeId::S7;
}

// All schemes except the factorial one are nested in n.
inline bool scheme_is_nested(SchemeId id) { return id != SchemeId::S3; }

// Centers may leave the cube for the ball/sphere schemes (the tables use
// delta up to 2 there); the cube-based schemes keep delta in (0, 1].
inline double scheme_delta_max(SchemeId id, int d) {
    if (id == SchemeId::S5 || id == SchemeId::S6) return std::sqrt(static_cast<double>(d));
    return 1.0;
}

struct SchemeSpec {
    SchemeId id = SchemeId::S1;
    double delta = 1.0;
    double alpha = 1.0;  // S4 only
    bool nested = true;

    void validate(int d) const {
        if (!(delta > 0.0) || delta > scheme_delta_max(id, d))
            throw std::invalid_argument(std::string("SchemeSpec: delta out of range for ") +
                                        scheme_name(id));
        if (id == SchemeId::S4 && !(alpha > 0.0))
            throw std::invalid_argument("SchemeSpec: scheme s4 requires alpha > 0");
    }
};

struct Design {
    int d = 1;
    SchemeSpec scheme;
    std::optional<std::uint64_t> seed;
    std::vector<double> points;  // n x d, row-major

    int n() const { return static_cast<int>(points.size() / d); }
    std::span<const double> point(int i) const {
        return {points.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
    }

    void validate() const {
        if (d < 1 || points.empty() || points.size() % d != 0)
            throw std::invalid_argument("Design: malformed point array");
        for (double v : points)
            if (!std::isfinite(v)) throw std::invalid_argument("Design: non-finite coordinate");
        const double delta = scheme.delta;
        for (int i = 0; i < n(); ++i) {
            const auto p = point(i);
            if (scheme.id == SchemeId::S5 || scheme.id == SchemeId::S6) {
                double norm2 = 0.0;
                for (double v : p) norm2 += v * v;
                const double norm = std::sqrt(norm2);
                if (scheme.id == SchemeId::S5 && norm > delta + 1e-12)
                    throw std::invalid_argument("Design: point outside the ball");
                if (scheme.id == SchemeId::S6 && std::fabs(norm - delta) > 1e-12)
                    throw std::invalid_argument("Design: point off the sphere");
            } else {
                for (double v : p)
                    if (std::fabs(v) > delta + 1e-12)
                        throw std::invalid_argument("Design: coordinate outside the cube");
            }
        }
    }
};

// Scheme 1: n iid points uniform on [-delta, delta]^d. One stream per
// design, row by row, so prefixes are reproducible (nested generation).
inline Design gen_scheme1(int d, int n, double delta, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_scheme1: n must be >= 1");
    SchemeSpec spec{SchemeId::S1, delta};
    spec.validate(d);
    Design design{d, spec, seed, {}};
    design.points.resize(static_cast<std::size_t>(n) * d);
    Rng rng = make_stream(seed, 0);
    for (double& v : design.points) v = rng.uniform(-delta, delta);
    return design;
}

// Scheme 2: the origin, then Scheme-1 points.
inline Design gen_scheme2(int d, int n, double delta, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_scheme2: n must be >= 1");
    SchemeSpec spec{SchemeId::S2, delta};
    spec.validate(d);
    Design design{d, spec, seed, {}};
    design.points.assign(static_cast<std::size_t>(n) * d, 0.0);
    Rng rng = make_stream(seed, 0);
    for (std::size_t i = d; i < design.points.size(); ++i)
        design.points[i] = rng.uniform(-delta, delta);
    return design;
}

// Scheme 3: regular two-level fractional factorial on the vertices of
// [-delta, delta]^d, columns from the shipped aberration-minimizing table.
inline Design gen_scheme3(int d, int n, double delta) {
    SchemeSpec spec{SchemeId::S3, delta};
    spec.nested = false;
    spec.validate(d);
    const FactorialDesign fd = factorial_columns(d, n);
    Design design{d, spec, std::nullopt, {}};
    design.points.resize(static_cast<std::size_t>(n) * d);
    for (int run = 0; run < n; ++run)
        for (int j = 0; j < d; ++j)
            design.points[static_cast<std::size_t>(run) * d + j] =
                (std::popcount(fd.columns[j] & static_cast<std::uint32_t>(run)) & 1) ? delta : -delta;
    return design;
}

// Scheme 4: iid coordinates from the symmetric Beta(alpha, alpha) density on
// [-delta, delta]. alpha = 1 reproduces Scheme 1 exactly, stream included.
inline Design gen_scheme4(int d, int n, double delta, double alpha, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_scheme4: n must be >= 1");
    SchemeSpec spec{SchemeId::S4, delta, alpha};
    spec.validate(d);
    const BetaSymmetric coord{alpha, delta};
    Design design{d, spec, seed, {}};
    design.points.resize(static_cast<std::size_t>(n) * d);
    Rng rng = make_stream(seed, 0);
    for (double& v : design.points) v = beta_symmetric_sample(coord, rng);
    return design;
}

// Scheme 5: uniform in the ball of radius delta (gaussian direction times
// U^{1/d} radius).
inline Design gen_scheme5(int d, int n, double delta, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_scheme5: n must be >= 1");
    SchemeSpec spec{SchemeId::S5, delta};
    spec.validate(d);
    Design design{d, spec, seed, {}};
    design.points.resize(static_cast<std::size_t>(n) * d);
    Rng rng = make_stream(seed, 0);
    std::vector<double> g(d);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& v : g) {
                v = rng.normal();
                norm2 += v * v;
            }
        } while (norm2 == 0.0);
        const double radius = delta * std::pow(rng.uniform01(), 1.0 / d);
        const double scale = radius / std::sqrt(norm2);
        for (int j = 0; j < d; ++j) design.points[static_cast<std::size_t>(i) * d + j] = g[j] * scale;
    }
    return design;
}

// Scheme 6: uniform on the sphere of radius delta.
inline Design gen_scheme6(int d, int n, double delta, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_scheme6: n must be >= 1");
    SchemeSpec spec{SchemeId::S6, delta};
    spec.validate(d);
    Design design{d, spec, seed, {}};
    design.points.resize(static_cast<std::size_t>(n) * d);
    Rng rng = make_stream(seed, 0);
    std::vector<double> g(d);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& v : g) {
                v = rng.normal();
                norm2 += v * v;
            }
        } while (norm2 == 0.0);
        const double scale = delta / std::sqrt(norm2);
        for (int j = 0; j < d; ++j) design.points[static_cast<std::size_t>(i) * d + j] = g[j] * scale;
    }
    return design;
}

// Scheme 7: the Sobol sequence mapped by x -> delta (2x - 1). Index 0 (the
// all-zeros point) is kept as the first element, so coverage numbers are
// reproducible against implementations that do the same.
inline Design gen_scheme7(int d, int n, double delta) {
    if (n < 1) throw std::invalid_argument("gen_scheme7: n must be >= 1");
    SchemeSpec spec{SchemeId::S7, delta};
    spec.validate(d);
    SobolSequence seq(d);
    Design design{d, spec, std::nullopt, seq.generate(n)};
    for (double& v : design.points) v = delta * (2.0 * v - 1.0);
    return design;
}

inline Design generate_design(SchemeId id, int d, int n, double delta, double alpha,
                              std::uint64_t seed) {
    switch (id) {
        case SchemeId::S1: return gen_scheme1(d, n, delta, seed);
        case SchemeId::S2: return gen_scheme2(d, n, delta, seed);
        case SchemeId::S3: return gen_scheme3(d, n, delta);
        case SchemeId::S4: return gen_scheme4(d, n, delta, alpha, seed);
        case SchemeId::S5: return gen_scheme5(d, n, delta, seed);
        case SchemeId::S6: return gen_scheme6(d, n, delta, seed);
        case SchemeId::S7: return gen_scheme7(d, n, delta);
    }
    throw std::invalid_argument("generate_design: bad scheme");
}

}  // namespace hypercover

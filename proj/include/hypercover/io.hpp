#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypercover/designs.hpp"

namespace hypercover {

enum class OutputFormat { Csv, Json };

struct RunConfig {
    std::uint64_t seed = 1;
    std::int64_t samples = 100000;
    int replications = 50;
    OutputFormat format = OutputFormat::Csv;
    std::string out;  // empty means stdout

    void validate() const {
        if (samples < 1) throw std::invalid_argument("RunConfig: samples must be >= 1");
        if (replications < 1) throw std::invalid_argument("RunConfig: replications must be >= 1");
    }
};

// One row of a sweep: the independent variable is delta unless the sweep is
// over r; value is coverage or normalized quantization error per `method`.
struct SweepRow {
    double delta = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    std::string method;
    int d = 0;
    std::int64_t n = 0;
    double r = 0.0;
    std::string scheme;
    std::uint64_t seed = 0;

    bool operator==(const SweepRow&) const = default;
};

// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline constexpr const char* kSweepCsvHeader = "delta,value,stderr,method,d,n,r,scheme,seed";
inline constexpr const char* kCoverageCsvHeader = "delta,coverage,stderr,method,d,n,r,scheme";

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << kSweepCsvHeader << "\n";
    for (const auto& row : rows) {
        os << format_double(row.delta) << ',' << format_double(row.value) << ','
           << format_double(row.stderr_) << ',' << row.method << ',' << row.d << ',' << row.n << ','
           << format_double(row.r) << ',' << row.scheme << ',' << row.seed << "\n";
    }
}

// library-level coverage emission (no seed column, value column named coverage)
inline void write_coverage_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << kCoverageCsvHeader << "\n";
    for (const auto& row : rows) {
        os << format_double(row.delta) << ',' << format_double(row.value) << ','
           << format_double(row.stderr_) << ',' << row.method << ',' << row.d << ',' << row.n << ','
           << format_double(row.r) << ',' << row.scheme << "\n";
    }
}

inline std::vector<SweepRow> parse_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("parse_sweep_csv: empty input");
    if (line != kSweepCsvHeader) throw std::runtime_error("parse_sweep_csv: unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRow row;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw std::runtime_error("parse_sweep_csv: short row");
            return field;
        };
        row.delta = std::stod(next());
        row.value = std::stod(next());
        row.stderr_ = std::stod(next());
        row.method = next();
        row.d = std::stoi(next());
        row.n = std::stoll(next());
        row.r = std::stod(next());
        row.scheme = next();
        row.seed = std::stoull(next());
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, const RunConfig& config) {
    nlohmann::json j;
    j["seed"] = config.seed;
    j["samples"] = config.samples;
    j["replications"] = config.replications;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        j["rows"].push_back({{"delta", row.delta},
                             {"value", row.value},
                             {"stderr", row.stderr_},
                             {"method", row.method},
                             {"d", row.d},
                             {"n", row.n},
                             {"r", row.r},
                             {"scheme", row.scheme},
                             {"seed", row.seed}});
    }
    return j;
}

// design serialization: one point per row at full precision
inline void design_to_csv(const Design& design, std::ostream& os) {
    const int n = design.n();
    for (int i = 0; i < n; ++i) {
        const auto p = design.point(i);
        for (int j = 0; j < design.d; ++j) {
            if (j) os << ',';
            os << format_double(p[j]);
        }
        os << "\n";
    }
}

inline nlohmann::json design_to_json(const Design& design) {
    nlohmann::json j;
    j["d"] = design.d;
    j["n"] = design.n();
    j["scheme"] = scheme_name(design.scheme.id);
    j["delta"] = design.scheme.delta;
    if (design.scheme.id == SchemeId::S4) j["alpha"] = design.scheme.alpha;
    j["nested"] = scheme_is_nested(design.scheme.id);
    if (design.seed) j["seed"] = *design.seed;
    auto pts = nlohmann::json::array();
    for (int i = 0; i < design.n(); ++i) {
        auto row = nlohmann::json::array();
        for (double v : design.point(i)) row.push_back(v);
        pts.push_back(row);
    }
    j["points"] = pts;
    return j;
}

}  // namespace hypercover

#pragma once

#include <cstdint>

namespace hypercover {

// A Monte Carlo estimate with enough provenance to reproduce it.
struct EstimateResult {
    double value = 0.0;
    double std_err = 0.0;
    std::int64_t samples = 0;
    int design_replications = 1;
    std::uint64_t seed = 0;
};

}  // namespace hypercover

#pragma once

#include <cstdint>

#include "citorder/model.hpp"

namespace citorder {

struct SynthSpec {
    int classes = 10;
    double edge_density = 0.15;    // fraction of ordered class pairs coupled
    double branch_density = 0.3;   // fraction of calls under a condition
    double chain_fraction = 0.5;   // fraction of calls targeting a calling method
    std::uint64_t seed = 0;
};

// Deterministic random model; realizes round(edge_density * n * (n-1))
// cross-class call edges exactly.
ProgramModel generate_synthetic(const SynthSpec& spec);

}  // namespace citorder

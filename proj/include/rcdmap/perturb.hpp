#pragma once

#include <cstdint>

#include "rcdmap/graph.hpp"

namespace rcdmap {

struct PerturbConfig {
    double epsilon = 0.05; // expected fraction of the m original edges changed
    std::uint64_t seed = 0;
};

// Uniform edge resampling: every unordered node pair is toggled independently
// with probability p = min(1, epsilon * m / C(n,2)). Same seed, same output.
Graph perturb_erp(const Graph& g, const PerturbConfig& cfg);

} // namespace rcdmap

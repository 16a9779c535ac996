#pragma once

#include <cstdint>

#include "rcdmap/community.hpp"
#include "rcdmap/graph.hpp"

namespace rcdmap {

struct LfrConfig {
    int n = 250;
    double tau1 = 3.0;       // degree exponent
    double tau2 = 1.5;       // community size exponent
    double mu = 0.1;         // mixing parameter
    double avg_degree = 5.0;
    int max_degree = 50;
    int min_community = 10;
    int max_community = 100;
    std::uint64_t seed = 0;
};

struct LfrResult {
    Graph graph;
    Cover cover;     // planted partition
    double realized_mixing = 0.0; // inter-community edge fraction
};

// Power-law degrees (min degree solved to match avg_degree), power-law
// community sizes summing to n, capacity-respecting assignment, intra edges
// per community via Havel-Hakimi plus randomizing double edge swaps, inter
// stubs matched across communities. mu = 0 yields intra edges only.
LfrResult generate_lfr(const LfrConfig& cfg);

double realized_mixing(const Graph& g, const Cover& cover);

} // namespace rcdmap

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rcdmap/graph.hpp"

namespace rcdmap {

struct SirConfig {
    double beta = 0.1;   // infection probability per infected-susceptible contact per step
    double gamma = 0.8;  // recovery probability per step
    std::vector<int> seeds;
    int runs = 1000;
    int max_steps = 10000;
    std::uint64_t rng_seed = 0;
};

struct SirOutcome {
    std::vector<int> final_infected;   // r at absorption, per run
    double mean_final_infected = 0.0;
    // Run-averaged s(t), i(t), r(t); shorter runs padded by carrying their
    // terminal values forward.
    std::vector<std::array<double, 3>> timeseries_mean;
    bool supercritical = false; // beta/gamma >= 1 (warning, not an error)
};

// beta = 1 / spectral radius
double default_beta(const Graph& g);

// Discrete-time SIR: per step every infected node tries each susceptible
// neighbor with probability beta (evaluated against the step-start state),
// then the step-start infected recover with probability gamma. A run ends at
// i(t) = 0. Runs use independently derived RNG streams.
SirOutcome simulate_sir(const Graph& g, const SirConfig& cfg);

} // namespace rcdmap

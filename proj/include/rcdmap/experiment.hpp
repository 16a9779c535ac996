#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcdmap/lfr.hpp"
#include "rcdmap/select.hpp"
#include "rcdmap/sir.hpp"

namespace rcdmap {

// Full pipeline grid: (ranker x detector) cells on one dataset, each cell
// evaluated by SIR over a sweep of seed-set sizes.
struct ExperimentSpec {
    std::string dataset;                 // edge-list path; empty when lfr is set
    std::optional<LfrConfig> lfr;        // synthetic input with planted cover
    std::vector<std::string> rankers{"degree", "closeness", "betweenness", "kshell", "pagerank"};
    std::vector<std::string> detectors;  // may include "planted" for lfr inputs
    double epsilon = 0.05;
    int rounds = 20;
    int sir_runs = 1000;
    double sir_gamma = 0.8;
    std::optional<double> sir_beta;      // empty: 1/spectral radius
    std::vector<int> seed_counts{5};
    std::string outdir = "results";
    std::uint64_t master_seed = 42;
    int threads = 1;
};

ExperimentSpec parse_experiment_config(const std::string& path);
ExperimentSpec spec_from_manifest(const std::string& manifest_path);

struct ExperimentOutcome {
    bool partial = false;                 // some cells failed
    std::vector<std::string> failed_cells;
    std::string manifest_path;
};

// Runs every cell (base ranking + one RCD run per detector), persists
// per-cell JSON, a consolidated summary CSV, per-cell time-series and
// seed-sweep CSVs, and a manifest sufficient for exact replay.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

} // namespace rcdmap

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcdmap/centrality.hpp"
#include "rcdmap/community.hpp"
#include "rcdmap/graph.hpp"

namespace rcdmap {

struct PenaltyConfig {
    std::optional<double> alpha;  // empty: derive per method from the graph
    int k_exponent = 0;           // 0 = auto: 1 non-overlapping, 2 overlapping
    int rounds = 20;              // M resampling rounds
    std::string base_method = "degree";
    DetectorConfig detector;
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    bool rank_average = false;    // average ranks instead of selection scores
    bool nc_binds_selected = false; // n_C(i) read as n_C(v) instead of n_C(u)
};

struct RankedSeeds {
    std::vector<int> order;          // all nodes, best first
    std::vector<double> final_scores; // aligned with order, non-increasing
};

// Penalty coefficient per base method: 1/<k> (degree), 1/avg path length
// (closeness), 1/avg betweenness (betweenness), max shell / 2.5 (kshell),
// max score (pagerank).
double alpha_for(const std::string& method, const Graph& g, const ScoreVector& base_scores);

// Iterative max-score selection; each pick penalizes the unselected members
// of every community containing it by alpha / (n_C(u) * |C_v|^k).
RankedSeeds penalized_select(const Graph& g, const ScoreVector& base_scores, const Cover& cover,
                             double alpha, int k_exponent, bool nc_binds_selected = false);

struct RcdMapResult {
    RankedSeeds seeds;
    std::vector<std::vector<int>> round_orders;
    std::vector<std::vector<double>> round_scores; // selection-time, by node id
    double alpha_used = 0.0;
};

// Full resample-detect-score-select loop (perturb seed+i per round, detector
// and base scores on each replica), averaging selection-time scores.
RcdMapResult rcd_map(const Graph& g, const PenaltyConfig& cfg);

// Same loop with a fixed cover used for every replica (planted communities).
RcdMapResult rcd_map_with_cover(const Graph& g, const PenaltyConfig& cfg, const Cover& cover);

} // namespace rcdmap

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcdmap/graph.hpp"

namespace rcdmap {

// Community assignment. For non-overlapping detectors this is a partition
// (every node in exactly one community); overlapping detectors may place a
// node in several. Every node belongs to at least one community.
struct Cover {
    std::vector<std::vector<int>> communities; // sorted node ids per community
    std::vector<std::vector<int>> membership;  // per node: community indices
    bool overlapping = false;
    bool converged = true;          // false when LPA hit its sweep cap
    std::vector<int> uncovered;     // nodes not in any k-clique (kclique only)

    int num_communities() const { return static_cast<int>(communities.size()); }
    // Rebuilds membership from communities and checks the invariants.
    void finalize(int n);
};

Cover cover_from_labels(const std::vector<int>& labels);
Cover singleton_cover(int n);

enum class DetectorAlgorithm { lpa, gn, infomap, demon, kclique, bigclam };

DetectorAlgorithm detector_from_string(const std::string& name);
std::string to_string(DetectorAlgorithm a);
bool is_overlapping(DetectorAlgorithm a);

struct DetectorConfig {
    DetectorAlgorithm algorithm = DetectorAlgorithm::infomap;
    std::uint64_t seed = 0;
    int k = 3;                    // clique size (kclique)
    double epsilon_merge = 0.25;  // demon containment slack
    int num_communities = 0;      // bigclam C; 0 = sweep 2..10 on held-out edges
    int max_iter = 100;           // bigclam sweeps / lpa cap
    int gn_node_cap = 2000;       // GN is O(n m^2); refuse larger graphs
    int infomap_trials = 8;       // seeded restarts, best L kept
};

// Asynchronous label propagation: seeded random visit order, plurality label
// with random tie-break, at most 100 sweeps.
Cover detect_lpa(const Graph& g, std::uint64_t seed, int max_sweeps = 100);

// Girvan-Newman: repeatedly remove the edge with maximum betweenness
// (recomputed each step) and return the components partition with maximal
// modularity.
Cover detect_gn(const Graph& g, int node_cap = 2000);

// Newman-Girvan modularity of a partition. Errors on overlapping covers.
double modularity(const Graph& g, const Cover& p);

// Two-level map equation of a partition, in bits (degree-proportional visit
// rates of the undirected walk).
double map_equation(const Graph& g, const Cover& p);

// Map-equation minimization: singleton start, seeded local moves, module
// aggregation, repeated; best of `trials` restarts.
Cover detect_infomap(const Graph& g, std::uint64_t seed, int trials = 8);

// DEMON: LPA on each ego-minus-ego network, ego added to each local
// community, then containment merging with slack epsilon_merge.
Cover detect_demon(const Graph& g, double epsilon_merge, std::uint64_t seed);

// Clique percolation: maximal cliques of size >= k (Bron-Kerbosch), adjacent
// when sharing >= k-1 nodes; communities are the connected unions. Nodes in
// no k-clique become singleton communities and are listed as uncovered.
Cover detect_kclique(const Graph& g, int k);

// All maximal cliques (each sorted), deterministic order.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);

struct BigclamResult {
    Cover cover;
    std::vector<std::vector<double>> affiliation; // n x C
    double log_likelihood = 0.0;
    std::vector<double> ll_trace; // per accepted sweep, non-decreasing
};

BigclamResult detect_bigclam(const Graph& g, int num_communities, std::uint64_t seed,
                             int max_iter = 100);

// Sweep C in {2..10} maximizing held-out edge likelihood; returns chosen C.
int bigclam_select_c(const Graph& g, std::uint64_t seed, int c_lo = 2, int c_hi = 10);

// Dispatcher used by the CLI and the resampling pipeline.
Cover detect(const Graph& g, const DetectorConfig& cfg);

} // namespace rcdmap

#pragma once

#include <string>
#include <vector>

#include "rcdmap/graph.hpp"

namespace rcdmap {

struct ScoreVector {
    std::vector<double> scores;
    std::string method;
};

// score(i) = degree(i)
ScoreVector degree_centrality(const Graph& g);

// score(i) = 1 / sum_j d(i,j). Errors on disconnected graphs.
ScoreVector closeness_centrality(const Graph& g);

// Variant that stays defined on disconnected graphs: unreachable pairs count
// with distance n (larger than any path), so small-component nodes rank low
// while connected graphs get exactly 1/sum d. Used on perturbed replicas.
ScoreVector closeness_centrality_total(const Graph& g);

// Brandes accumulation over unordered pairs {s,t}. Cross-component pairs
// contribute nothing.
ScoreVector betweenness_centrality(const Graph& g);

// Per-source edge betweenness sums (unordered pairs); keyed by edge index in
// g.edge_list() order. Used by Girvan-Newman.
std::vector<double> edge_betweenness(const Graph& g);

// Core decomposition: shell index ks per node. Errors if any node is
// isolated (the decomposition starts from the no-isolated-node assumption).
ScoreVector k_shell(const Graph& g);

// Internal variant for perturbed replicas: isolated nodes get shell 0.
ScoreVector k_shell_total(const Graph& g);

struct PagerankError : Error {
    PagerankError(const std::string& msg, std::vector<double> last)
        : Error(msg), last_iterate(std::move(last)) {}
    std::vector<double> last_iterate;
};

// Undirected PageRank with skip probability c: every edge acts as two
// directed links, out-degree = degree. Mass of degree-0 nodes is spread
// uniformly so the iterate stays a probability vector. Throws
// PagerankError (carrying the last iterate) if it fails to converge.
ScoreVector pagerank(const Graph& g, double c = 0.15, double tol = 1e-10, int max_iter = 1000);

// Node ids sorted by score descending, smaller id first on ties.
std::vector<int> ranked_order(const std::vector<double>& scores);

// Dispatch by method tag: degree|closeness|betweenness|kshell|pagerank.
// With total=true the replica-safe closeness/kshell variants are used.
ScoreVector compute_scores(const Graph& g, const std::string& method, bool total = false);

} // namespace rcdmap

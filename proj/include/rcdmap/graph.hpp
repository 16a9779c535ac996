#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rcdmap {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Immutable simple undirected graph with dense node ids 0..n-1.
// No self loops, no duplicate edges. Neighbor lists are kept sorted.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list. Pairs may appear in either orientation;
    // duplicates and self loops are rejected (the parser filters them first).
    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int num_nodes() const { return n_; }
    long long num_edges() const { return m_; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    std::span<const int> neighbors(int v) const { return adj_[v]; }
    bool has_edge(int u, int v) const;

    // Edges as (u, v) with u < v, lexicographically sorted.
    std::vector<std::pair<int, int>> edge_list() const;

    // BFS distances from src; unreachable nodes get -1.
    std::vector<int> bfs_distances(int src) const;

    // Connected components; returns per-node component label (dense, ordered
    // by smallest contained node id).
    std::vector<int> component_labels(int* num_components = nullptr) const;

private:
    int n_ = 0;
    long long m_ = 0;
    std::vector<std::vector<int>> adj_;
};

struct GraphStats {
    int n = 0;
    long long m = 0;
    double avg_degree = 0.0;
    int max_degree = 0;
    double spectral_radius = 0.0;
    double avg_shortest_path = 0.0;
    double avg_betweenness = 0.0;
};

struct ParsedGraph {
    Graph graph;
    std::vector<long long> original_ids; // dense id -> id as seen in the input
    long long self_loops_dropped = 0;
    long long duplicates_collapsed = 0;
};

// Edge-list text: one edge per line, two integer tokens, '#'/'%' comment
// lines ignored. With relabel the original ids are mapped densely (sorted
// ascending); without it ids must already be small nonnegative integers and
// are used as-is (n = max id + 1).
ParsedGraph parse_edge_list(std::istream& in, bool relabel = true);
ParsedGraph parse_edge_list_file(const std::string& path, bool relabel = true);

void write_edge_list(std::ostream& out, const Graph& g,
                     const std::vector<long long>* original_ids = nullptr);

struct LccResult {
    Graph graph;
    std::vector<int> old_ids; // new dense id -> id in the input graph
};

// Induced subgraph on the largest component, relabeled densely. Ties are
// broken toward the component containing the smallest node id.
LccResult largest_connected_component(const Graph& g);

// Largest adjacency eigenvalue by power iteration on A + I (shifted so the
// dominant eigenvalue is unique even on bipartite graphs).
double spectral_radius(const Graph& g, double rel_tol = 1e-9, int max_iter = 10000);

// Full topological summary. Requires a connected graph (the average shortest
// path is undefined otherwise).
GraphStats graph_stats(const Graph& g);

} // namespace rcdmap

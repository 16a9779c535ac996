#include "rcdmap/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "rcdmap/centrality.hpp"

namespace rcdmap {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw Error("edge endpoint out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
        if (u == v) throw Error("self loop in edge set: " + std::to_string(u));
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    g.m_ = static_cast<long long>(edges.size());
    for (auto& nb : g.adj_) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
            throw Error("duplicate edge in edge set");
    }
    return g;
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<size_t>(m_));
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::vector<int> Graph::bfs_distances(int src) const {
    std::vector<int> dist(n_, -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj_[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    return dist;
}

std::vector<int> Graph::component_labels(int* num_components) const {
    std::vector<int> label(n_, -1);
    int c = 0;
    for (int s = 0; s < n_; ++s) {
        if (label[s] >= 0) continue;
        label[s] = c;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v : adj_[u])
                if (label[v] < 0) {
                    label[v] = c;
                    q.push(v);
                }
        }
        ++c;
    }
    if (num_components) *num_components = c;
    return label;
}

namespace {

bool parse_ll(std::string_view tok, long long& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
}

} // namespace

ParsedGraph parse_edge_list(std::istream& in, bool relabel) {
    ParsedGraph result;
    std::set<std::pair<long long, long long>> edges;
    long long max_id = -1;
    std::string line;
    long long lineno = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        size_t i = line.find_first_not_of(" \t\r\n");
        if (i == std::string::npos) continue;
        if (line[i] == '#' || line[i] == '%') continue;
        std::istringstream ls(line);
        std::string ta, tb, extra;
        ls >> ta >> tb;
        long long a, b;
        if (tb.empty() || !parse_ll(ta, a) || !parse_ll(tb, b) || (ls >> extra))
            throw Error("parse error at line " + std::to_string(lineno) + ": '" + line + "'");
        saw_data = true;
        if (a == b) {
            ++result.self_loops_dropped;
            max_id = std::max(max_id, a);
            continue;
        }
        if (a > b) std::swap(a, b);
        if (!edges.insert({a, b}).second) ++result.duplicates_collapsed;
        max_id = std::max(max_id, b);
    }
    if (!saw_data) throw Error("empty input: no edges found");

    std::vector<std::pair<int, int>> dense;
    dense.reserve(edges.size());
    if (relabel) {
        std::set<long long> ids;
        for (auto& [a, b] : edges) {
            ids.insert(a);
            ids.insert(b);
        }
        result.original_ids.assign(ids.begin(), ids.end());
        std::map<long long, int> to_dense;
        for (size_t k = 0; k < result.original_ids.size(); ++k) to_dense[result.original_ids[k]] = static_cast<int>(k);
        for (auto& [a, b] : edges) dense.emplace_back(to_dense[a], to_dense[b]);
        result.graph = Graph::from_edges(static_cast<int>(result.original_ids.size()), dense);
    } else {
        for (auto& [a, b] : edges) {
            if (a < 0) throw Error("negative node id with relabel disabled");
            if (b > 50'000'000) throw Error("node id too large with relabel disabled: " + std::to_string(b));
            dense.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
        int n = static_cast<int>(max_id + 1);
        result.original_ids.resize(n);
        std::iota(result.original_ids.begin(), result.original_ids.end(), 0LL);
        result.graph = Graph::from_edges(n, dense);
    }
    return result;
}

ParsedGraph parse_edge_list_file(const std::string& path, bool relabel) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open edge list: " + path);
    return parse_edge_list(in, relabel);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<long long>* original_ids) {
    for (auto [u, v] : g.edge_list()) {
        long long a = original_ids ? (*original_ids)[u] : u;
        long long b = original_ids ? (*original_ids)[v] : v;
        out << a << ' ' << b << '\n';
    }
}

LccResult largest_connected_component(const Graph& g) {
    if (g.num_nodes() == 0) throw Error("largest_connected_component: empty graph");
    int nc = 0;
    auto label = g.component_labels(&nc);
    std::vector<int> size(nc, 0);
    for (int v = 0; v < g.num_nodes(); ++v) ++size[label[v]];
    // labels are ordered by smallest contained id, so the first maximal one
    // realizes the tie rule
    int best = 0;
    for (int c = 1; c < nc; ++c)
        if (size[c] > size[best]) best = c;

    LccResult res;
    std::vector<int> to_new(g.num_nodes(), -1);
    for (int v = 0; v < g.num_nodes(); ++v)
        if (label[v] == best) {
            to_new[v] = static_cast<int>(res.old_ids.size());
            res.old_ids.push_back(v);
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edge_list())
        if (label[u] == best) edges.emplace_back(to_new[u], to_new[v]);
    res.graph = Graph::from_edges(static_cast<int>(res.old_ids.size()), edges);
    return res;
}

double spectral_radius(const Graph& g, double rel_tol, int max_iter) {
    int n = g.num_nodes();
    if (n == 0) throw Error("spectral_radius: empty graph");
    std::vector<double> x(n, 1.0), y(n);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        // y = (A + I) x
        for (int v = 0; v < n; ++v) {
            double s = x[v];
            for (int u : g.neighbors(v)) s += x[u];
            y[v] = s;
        }
        double xy = 0.0, xx = 0.0, norm = 0.0;
        for (int v = 0; v < n; ++v) {
            xy += x[v] * y[v];
            xx += x[v] * x[v];
            norm = std::max(norm, std::abs(y[v]));
        }
        double est = xy / xx - 1.0; // Rayleigh quotient of A
        for (int v = 0; v < n; ++v) x[v] = y[v] / norm;
        if (it > 0 && std::abs(est - lambda) <= rel_tol * std::max(1.0, std::abs(est))) {
            lambda = est;
            break;
        }
        lambda = est;
    }
    return lambda;
}

GraphStats graph_stats(const Graph& g) {
    int nc = 0;
    g.component_labels(&nc);
    if (nc != 1) throw Error("graph_stats: graph is disconnected (average shortest path undefined)");
    GraphStats s;
    s.n = g.num_nodes();
    s.m = g.num_edges();
    s.avg_degree = s.n > 0 ? 2.0 * static_cast<double>(s.m) / s.n : 0.0;
    for (int v = 0; v < s.n; ++v) s.max_degree = std::max(s.max_degree, g.degree(v));
    s.spectral_radius = spectral_radius(g);

    long long pair_count = static_cast<long long>(s.n) * (s.n - 1) / 2;
    if (pair_count > 0) {
        long long total = 0;
        for (int v = 0; v < s.n; ++v) {
            auto d = g.bfs_distances(v);
            for (int u = v + 1; u < s.n; ++u) total += d[u];
        }
        s.avg_shortest_path = static_cast<double>(total) / static_cast<double>(pair_count);
    }
    auto bc = betweenness_centrality(g);
    double sum = 0.0;
    for (double b : bc.scores) sum += b;
    s.avg_betweenness = s.n > 0 ? sum / s.n : 0.0;
    return s;
}

} // namespace rcdmap

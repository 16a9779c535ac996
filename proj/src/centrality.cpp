#include "rcdmap/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <stack>

namespace rcdmap {

ScoreVector degree_centrality(const Graph& g) {
    ScoreVector sv;
    sv.method = "degree";
    sv.scores.resize(g.num_nodes());
    for (int v = 0; v < g.num_nodes(); ++v) sv.scores[v] = g.degree(v);
    return sv;
}

namespace {

ScoreVector closeness_impl(const Graph& g, bool total) {
    ScoreVector sv;
    sv.method = "closeness";
    int n = g.num_nodes();
    sv.scores.resize(n, 0.0);
    for (int v = 0; v < n; ++v) {
        auto d = g.bfs_distances(v);
        long long sum = 0;
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            if (d[u] < 0) {
                if (!total) throw Error("closeness_centrality: graph is disconnected");
                sum += n; // larger than any possible path length
            } else {
                sum += d[u];
            }
        }
        sv.scores[v] = sum > 0 ? 1.0 / static_cast<double>(sum) : 0.0;
    }
    return sv;
}

} // namespace

ScoreVector closeness_centrality(const Graph& g) { return closeness_impl(g, false); }
ScoreVector closeness_centrality_total(const Graph& g) { return closeness_impl(g, true); }

ScoreVector betweenness_centrality(const Graph& g) {
    // Brandes: per-source BFS with dependency accumulation; the ordered-pair
    // sum is halved to count each unordered {s,t} once.
    int n = g.num_nodes();
    ScoreVector sv;
    sv.method = "betweenness";
    sv.scores.assign(n, 0.0);
    std::vector<int> dist(n), order;
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> preds(n);
    order.reserve(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            order.push_back(u);
            for (int v : g.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
                if (dist[v] == dist[u] + 1) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int u : preds[w]) delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            if (w != s) sv.scores[w] += delta[w];
        }
    }
    for (auto& x : sv.scores) x *= 0.5;
    return sv;
}

std::vector<double> edge_betweenness(const Graph& g) {
    int n = g.num_nodes();
    auto edges = g.edge_list();
    std::map<std::pair<int, int>, int> index;
    for (size_t i = 0; i < edges.size(); ++i) index[edges[i]] = static_cast<int>(i);
    std::vector<double> eb(edges.size(), 0.0);

    std::vector<int> dist(n), order;
    std::vector<double> sigma(n), delta(n);
    std::vector<std::vector<int>> preds(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        order.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            order.push_back(u);
            for (int v : g.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
                if (dist[v] == dist[u] + 1) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int w = *it;
            for (int u : preds[w]) {
                double c = sigma[u] / sigma[w] * (1.0 + delta[w]);
                eb[index[{std::min(u, w), std::max(u, w)}]] += c;
                delta[u] += c;
            }
        }
    }
    for (auto& x : eb) x *= 0.5;
    return eb;
}

namespace {

// Bucket-based core decomposition; isolated handling decided by caller.
std::vector<int> core_numbers(const Graph& g) {
    int n = g.num_nodes();
    std::vector<int> deg(n), core(n, 0);
    int maxd = 0;
    for (int v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        maxd = std::max(maxd, deg[v]);
    }
    std::vector<int> bin(maxd + 2, 0), pos(n), vert(n);
    for (int v = 0; v < n; ++v) ++bin[deg[v]];
    int start = 0;
    for (int d = 0; d <= maxd; ++d) {
        int num = bin[d];
        bin[d] = start;
        start += num;
    }
    for (int v = 0; v < n; ++v) {
        pos[v] = bin[deg[v]]++;
        vert[pos[v]] = v;
    }
    for (int d = maxd; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;
    std::vector<int> cur = deg;
    for (int i = 0; i < n; ++i) {
        int v = vert[i];
        core[v] = cur[v];
        for (int u : g.neighbors(v)) {
            if (cur[u] > cur[v]) {
                int du = cur[u], pu = pos[u];
                int pw = bin[du], w = vert[pw];
                if (u != w) {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                ++bin[du];
                --cur[u];
            }
        }
    }
    return core;
}

} // namespace

ScoreVector k_shell(const Graph& g) {
    for (int v = 0; v < g.num_nodes(); ++v)
        if (g.degree(v) == 0) throw Error("k_shell: isolated node " + std::to_string(v));
    ScoreVector sv;
    sv.method = "kshell";
    auto core = core_numbers(g);
    sv.scores.assign(core.begin(), core.end());
    return sv;
}

ScoreVector k_shell_total(const Graph& g) {
    ScoreVector sv;
    sv.method = "kshell";
    auto core = core_numbers(g);
    sv.scores.assign(core.begin(), core.end());
    return sv;
}

ScoreVector pagerank(const Graph& g, double c, double tol, int max_iter) {
    if (!(c > 0.0 && c < 1.0)) throw Error("pagerank: skip probability must be in (0,1)");
    int n = g.num_nodes();
    if (n == 0) throw Error("pagerank: empty graph");
    std::vector<double> p(n, 1.0 / n), next(n);
    for (int it = 0; it < max_iter; ++it) {
        double dangling = 0.0;
        for (int v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += p[v];
        double base = c / n + (1.0 - c) * dangling / n;
        for (int v = 0; v < n; ++v) {
            double s = 0.0;
            for (int u : g.neighbors(v)) s += p[u] / g.degree(u);
            next[v] = base + (1.0 - c) * s;
        }
        double diff = 0.0;
        for (int v = 0; v < n; ++v) diff += std::abs(next[v] - p[v]);
        p.swap(next);
        if (diff < tol) {
            ScoreVector sv;
            sv.method = "pagerank";
            sv.scores = std::move(p);
            return sv;
        }
    }
    throw PagerankError("pagerank: no convergence within " + std::to_string(max_iter) + " iterations",
                        std::move(p));
}

std::vector<int> ranked_order(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

ScoreVector compute_scores(const Graph& g, const std::string& method, bool total) {
    if (method == "degree") return degree_centrality(g);
    if (method == "closeness") return total ? closeness_centrality_total(g) : closeness_centrality(g);
    if (method == "betweenness") return betweenness_centrality(g);
    if (method == "kshell") return total ? k_shell_total(g) : k_shell(g);
    if (method == "pagerank") return pagerank(g);
    throw Error("unknown ranking method: " + method);
}

} // namespace rcdmap

#include "rcdmap/perturb.hpp"

#include <algorithm>

#include "rcdmap/rng.hpp"

namespace rcdmap {

Graph perturb_erp(const Graph& g, const PerturbConfig& cfg) {
    int n = g.num_nodes();
    if (n < 2) throw Error("perturb_erp: need at least 2 nodes");
    if (cfg.epsilon < 0) throw Error("perturb_erp: epsilon must be nonnegative");
    long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    double p = std::min(1.0, cfg.epsilon * static_cast<double>(g.num_edges()) / static_cast<double>(pairs));

    auto edges = g.edge_list();
    if (p <= 0.0) return Graph::from_edges(n, edges);

    auto rng = make_rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<int, int>> out;
    out.reserve(edges.size());
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            bool present = g.has_edge(u, v);
            if (unif(rng) < p) present = !present;
            if (present) out.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, out);
}

} // namespace rcdmap

#include "rcdmap/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcdmap/perturb.hpp"
#include "rcdmap/rng.hpp"

namespace rcdmap {

double alpha_for(const std::string& method, const Graph& g, const ScoreVector& base_scores) {
    if (method == "degree") {
        double avg = 2.0 * static_cast<double>(g.num_edges()) / g.num_nodes();
        if (avg <= 0) throw Error("alpha_for: graph has no edges");
        return 1.0 / avg;
    }
    if (method == "closeness") {
        auto stats = graph_stats(g);
        if (stats.avg_shortest_path <= 0) throw Error("alpha_for: zero average path length");
        return 1.0 / stats.avg_shortest_path;
    }
    if (method == "betweenness") {
        double sum = 0.0;
        for (double s : base_scores.scores) sum += s;
        double avg = sum / g.num_nodes();
        if (avg <= 0)
            throw Error("alpha_for: average betweenness is zero (e.g. complete graph); set alpha manually");
        return 1.0 / avg;
    }
    if (method == "kshell") {
        double mx = *std::max_element(base_scores.scores.begin(), base_scores.scores.end());
        return mx / 2.5;
    }
    if (method == "pagerank") {
        return *std::max_element(base_scores.scores.begin(), base_scores.scores.end());
    }
    throw Error("alpha_for: unknown method " + method);
}

RankedSeeds penalized_select(const Graph& g, const ScoreVector& base_scores, const Cover& cover,
                             double alpha, int k_exponent, bool nc_binds_selected) {
    int n = g.num_nodes();
    if (static_cast<int>(base_scores.scores.size()) != n)
        throw Error("penalized_select: score vector size mismatch");
    if (static_cast<int>(cover.membership.size()) != n)
        throw Error("penalized_select: cover does not house every node");
    if (alpha < 0) throw Error("penalized_select: alpha must be nonnegative");
    if (k_exponent != 1 && k_exponent != 2) throw Error("penalized_select: k exponent must be 1 or 2");

    std::vector<double> s = base_scores.scores;
    std::vector<bool> selected(n, false);
    RankedSeeds out;
    out.order.reserve(n);
    out.final_scores.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (selected[v]) continue;
            if (best < 0 || s[v] > s[best] || (s[v] == s[best] && v < best)) best = v;
        }
        selected[best] = true;
        out.order.push_back(best);
        out.final_scores.push_back(s[best]);
        for (int ci : cover.membership[best]) {
            const auto& comm = cover.communities[ci];
            double size_pow = std::pow(static_cast<double>(comm.size()), k_exponent);
            for (int u : comm) {
                if (selected[u]) continue;
                double nc = static_cast<double>(
                    nc_binds_selected ? cover.membership[best].size() : cover.membership[u].size());
                s[u] -= alpha / (nc * size_pow);
            }
        }
    }
    return out;
}

namespace {

RcdMapResult rcd_map_impl(const Graph& g, const PenaltyConfig& cfg, const Cover* planted) {
    if (cfg.rounds < 1) throw Error("rcd_map: rounds must be >= 1");
    int n = g.num_nodes();

    // alpha and the k exponent are fixed from the input graph and detector
    // type; replicas can be disconnected, where the alpha statistics are
    // undefined.
    double alpha;
    if (cfg.alpha) {
        alpha = *cfg.alpha;
        if (!(alpha > 0)) throw Error("rcd_map: alpha must be positive");
    } else {
        alpha = alpha_for(cfg.base_method, g, compute_scores(g, cfg.base_method));
    }
    int k_exp = cfg.k_exponent;
    if (k_exp == 0) {
        bool overlap = planted ? planted->overlapping : is_overlapping(cfg.detector.algorithm);
        k_exp = overlap ? 2 : 1;
    }

    RcdMapResult res;
    res.alpha_used = alpha;
    std::vector<double> acc(n, 0.0);
    for (int i = 1; i <= cfg.rounds; ++i) {
        PerturbConfig pc;
        pc.epsilon = cfg.epsilon;
        pc.seed = cfg.seed + static_cast<std::uint64_t>(i);
        Graph replica = perturb_erp(g, pc);

        Cover cover;
        if (planted) {
            cover = *planted;
        } else {
            DetectorConfig dc = cfg.detector;
            dc.seed = derive_seed(cfg.seed, "detect", static_cast<std::uint64_t>(i));
            cover = detect(replica, dc);
        }
        ScoreVector base = compute_scores(replica, cfg.base_method, /*total=*/true);
        RankedSeeds sel = penalized_select(replica, base, cover, alpha, k_exp, cfg.nc_binds_selected);

        std::vector<double> by_node(n, 0.0);
        for (size_t r = 0; r < sel.order.size(); ++r)
            by_node[sel.order[r]] = cfg.rank_average ? -static_cast<double>(r) : sel.final_scores[r];
        for (int v = 0; v < n; ++v) acc[v] += by_node[v];
        res.round_orders.push_back(sel.order);
        res.round_scores.push_back(std::move(by_node));
    }
    for (auto& a : acc) a /= cfg.rounds;
    auto order = ranked_order(acc);
    res.seeds.order = order;
    res.seeds.final_scores.reserve(n);
    for (int v : order) res.seeds.final_scores.push_back(acc[v]);
    return res;
}

} // namespace

RcdMapResult rcd_map(const Graph& g, const PenaltyConfig& cfg) {
    return rcd_map_impl(g, cfg, nullptr);
}

RcdMapResult rcd_map_with_cover(const Graph& g, const PenaltyConfig& cfg, const Cover& cover) {
    if (static_cast<int>(cover.membership.size()) != g.num_nodes())
        throw Error("rcd_map_with_cover: cover does not match graph");
    return rcd_map_impl(g, cfg, &cover);
}

} // namespace rcdmap

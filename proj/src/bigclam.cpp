#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rcdmap/community.hpp"
#include "rcdmap/rng.hpp"

namespace rcdmap {

namespace {

constexpr double kMaxF = 1000.0;   // affiliation cap; the edge-only likelihood is unbounded
constexpr double kProbFloor = 1e-10;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Log-likelihood terms involving row u only, for a candidate row fu:
//   sum_{v in N(u)} log(1 - exp(-fu . F_v)) - fu . rest
// where rest = colsum - F_old[u] - sum_{v in N(u)} F_v covers the non-edges.
double local_ll(const Graph& g, const std::vector<std::vector<double>>& F,
                const std::vector<double>& rest, int u, const std::vector<double>& fu) {
    double ll = 0.0;
    for (int v : g.neighbors(u)) {
        double x = dot(fu, F[v]);
        double p = 1.0 - std::exp(-x);
        if (p < kProbFloor) p = kProbFloor;
        ll += std::log(p);
    }
    ll -= dot(fu, rest);
    return ll;
}

double full_ll(const Graph& g, const std::vector<std::vector<double>>& F) {
    int n = g.num_nodes();
    int c = n > 0 ? static_cast<int>(F[0].size()) : 0;
    std::vector<double> colsum(c, 0.0);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < c; ++i) colsum[i] += F[v][i];
    double ll = 0.0;
    // edge terms
    for (auto [u, v] : g.edge_list()) {
        double x = dot(F[u], F[v]);
        double p = 1.0 - std::exp(-x);
        if (p < kProbFloor) p = kProbFloor;
        ll += std::log(p);
    }
    // non-edge terms: sum over all pairs minus self minus edges
    double pairs_term = 0.0;
    for (int i = 0; i < c; ++i) pairs_term += colsum[i] * colsum[i];
    double self_term = 0.0;
    for (int v = 0; v < n; ++v) self_term += dot(F[v], F[v]);
    double edge_term = 0.0;
    for (auto [u, v] : g.edge_list()) edge_term += dot(F[u], F[v]);
    ll -= 0.5 * (pairs_term - self_term) - edge_term;
    return ll;
}

std::vector<std::vector<double>> fit_affiliations(const Graph& g, int c, std::uint64_t seed,
                                                  int max_iter, std::vector<double>* trace) {
    int n = g.num_nodes();
    auto rng = make_rng(derive_seed(seed, "bigclam"));
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::vector<std::vector<double>> F(n, std::vector<double>(c));
    for (auto& row : F)
        for (auto& x : row) x = unif(rng);
    std::vector<double> colsum(c, 0.0);
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < c; ++i) colsum[i] += F[v][i];

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    double prev_ll = full_ll(g, F);
    if (trace) trace->push_back(prev_ll);
    for (int it = 0; it < max_iter; ++it) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int u : order) {
            std::vector<double> grad(c, 0.0), rest(c, 0.0);
            for (int i = 0; i < c; ++i) rest[i] = colsum[i] - F[u][i];
            for (int v : g.neighbors(u)) {
                double x = dot(F[u], F[v]);
                double ex = std::exp(-x);
                double ratio = ex / std::max(1.0 - ex, kProbFloor);
                for (int i = 0; i < c; ++i) {
                    grad[i] += F[v][i] * ratio;
                    rest[i] -= F[v][i];
                }
            }
            for (int i = 0; i < c; ++i) grad[i] -= rest[i];
            double before = local_ll(g, F, rest, u, F[u]);
            // backtracking line search on the row objective
            double step = 0.25;
            std::vector<double> cand(c);
            bool accepted = false;
            for (int bt = 0; bt < 12 && !accepted; ++bt, step *= 0.5) {
                for (int i = 0; i < c; ++i)
                    cand[i] = std::clamp(F[u][i] + step * grad[i], 0.0, kMaxF);
                if (local_ll(g, F, rest, u, cand) >= before) accepted = true;
            }
            if (accepted) {
                for (int i = 0; i < c; ++i) colsum[i] += cand[i] - F[u][i];
                F[u] = cand;
            }
        }
        double ll = full_ll(g, F);
        if (trace) trace->push_back(ll);
        if (std::abs(ll - prev_ll) < 1e-8 * (1.0 + std::abs(ll))) break;
        prev_ll = ll;
    }
    return F;
}

} // namespace

BigclamResult detect_bigclam(const Graph& g, int num_communities, std::uint64_t seed, int max_iter) {
    int n = g.num_nodes();
    if (num_communities < 1) throw Error("detect_bigclam: need at least 1 community");
    if (num_communities > n) throw Error("detect_bigclam: more communities than nodes");

    BigclamResult res;
    res.affiliation = fit_affiliations(g, num_communities, seed, max_iter, &res.ll_trace);
    res.log_likelihood = res.ll_trace.empty() ? 0.0 : res.ll_trace.back();

    double delta = n > 1 ? std::sqrt(-std::log1p(-1.0 / n)) : kMaxF;
    std::vector<std::vector<int>> comms(num_communities);
    std::vector<bool> covered(n, false);
    for (int v = 0; v < n; ++v)
        for (int cidx = 0; cidx < num_communities; ++cidx)
            if (res.affiliation[v][cidx] >= delta) {
                comms[cidx].push_back(v);
                covered[v] = true;
            }
    for (int v = 0; v < n; ++v) {
        if (covered[v]) continue;
        int arg = 0;
        for (int cidx = 1; cidx < num_communities; ++cidx)
            if (res.affiliation[v][cidx] > res.affiliation[v][arg]) arg = cidx;
        comms[arg].push_back(v);
    }
    Cover c;
    for (auto& nodes : comms)
        if (!nodes.empty()) c.communities.push_back(std::move(nodes));
    if (c.communities.empty()) c.communities.push_back([n] {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }());
    c.overlapping = true;
    c.finalize(n);
    res.cover = std::move(c);
    return res;
}

int bigclam_select_c(const Graph& g, std::uint64_t seed, int c_lo, int c_hi) {
    int n = g.num_nodes();
    auto edges = g.edge_list();
    if (edges.empty()) return 1;
    // hold out ~10% of edges, fit on the rest, score held-out edge likelihood
    auto rng = make_rng(derive_seed(seed, "bigclam-holdout"));
    std::vector<size_t> idx(edges.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t held = std::max<size_t>(1, edges.size() / 10);
    std::set<size_t> held_set(idx.begin(), idx.begin() + held);
    std::vector<std::pair<int, int>> train;
    for (size_t i = 0; i < edges.size(); ++i)
        if (!held_set.count(i)) train.push_back(edges[i]);
    Graph gtrain = Graph::from_edges(n, train);

    int best_c = std::min(c_lo, n);
    double best_score = -1e300;
    for (int c = c_lo; c <= std::min(c_hi, n); ++c) {
        auto F = fit_affiliations(gtrain, c, derive_seed(seed, "bigclam-sweep", c), 60, nullptr);
        double score = 0.0;
        for (size_t i : held_set) {
            auto [u, v] = edges[i];
            double x = 0.0;
            for (int k = 0; k < c; ++k) x += F[u][k] * F[v][k];
            double p = 1.0 - std::exp(-x);
            if (p < kProbFloor) p = kProbFloor;
            score += std::log(p);
        }
        if (score > best_score + 1e-12) {
            best_score = score;
            best_c = c;
        }
    }
    return best_c;
}

Cover detect(const Graph& g, const DetectorConfig& cfg) {
    switch (cfg.algorithm) {
        case DetectorAlgorithm::lpa: return detect_lpa(g, cfg.seed, std::max(1, cfg.max_iter));
        case DetectorAlgorithm::gn: return detect_gn(g, cfg.gn_node_cap);
        case DetectorAlgorithm::infomap: return detect_infomap(g, cfg.seed, cfg.infomap_trials);
        case DetectorAlgorithm::demon: return detect_demon(g, cfg.epsilon_merge, cfg.seed);
        case DetectorAlgorithm::kclique: return detect_kclique(g, cfg.k);
        case DetectorAlgorithm::bigclam: {
            int c = cfg.num_communities;
            if (c <= 0) c = bigclam_select_c(g, cfg.seed);
            return detect_bigclam(g, c, cfg.seed, cfg.max_iter).cover;
        }
    }
    throw Error("detect: unhandled algorithm");
}

} // namespace rcdmap

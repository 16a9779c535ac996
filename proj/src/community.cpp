#include "rcdmap/community.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "rcdmap/centrality.hpp"
#include "rcdmap/rng.hpp"

namespace rcdmap {

void Cover::finalize(int n) {
    membership.assign(n, {});
    for (size_t c = 0; c < communities.size(); ++c) {
        if (communities[c].empty()) throw Error("cover: empty community");
        auto& nodes = communities[c];
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (int v : nodes) {
            if (v < 0 || v >= n) throw Error("cover: node out of range");
            membership[v].push_back(static_cast<int>(c));
        }
    }
    for (int v = 0; v < n; ++v) {
        if (membership[v].empty()) throw Error("cover: node " + std::to_string(v) + " not housed");
        if (!overlapping && membership[v].size() != 1)
            throw Error("cover: non-overlapping cover places node " + std::to_string(v) +
                        " in " + std::to_string(membership[v].size()) + " communities");
    }
}

Cover cover_from_labels(const std::vector<int>& labels) {
    // communities ordered by smallest member id
    std::map<int, std::vector<int>> groups;
    for (size_t v = 0; v < labels.size(); ++v) groups[labels[v]].push_back(static_cast<int>(v));
    std::vector<std::vector<int>> comms;
    comms.reserve(groups.size());
    for (auto& [lab, nodes] : groups) comms.push_back(std::move(nodes));
    std::sort(comms.begin(), comms.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    Cover c;
    c.communities = std::move(comms);
    c.overlapping = false;
    c.finalize(static_cast<int>(labels.size()));
    return c;
}

Cover singleton_cover(int n) {
    Cover c;
    c.communities.resize(n);
    for (int v = 0; v < n; ++v) c.communities[v] = {v};
    c.overlapping = false;
    c.finalize(n);
    return c;
}

DetectorAlgorithm detector_from_string(const std::string& name) {
    if (name == "lpa") return DetectorAlgorithm::lpa;
    if (name == "gn") return DetectorAlgorithm::gn;
    if (name == "infomap") return DetectorAlgorithm::infomap;
    if (name == "demon") return DetectorAlgorithm::demon;
    if (name == "kclique") return DetectorAlgorithm::kclique;
    if (name == "bigclam") return DetectorAlgorithm::bigclam;
    throw Error("unknown detector: " + name);
}

std::string to_string(DetectorAlgorithm a) {
    switch (a) {
        case DetectorAlgorithm::lpa: return "lpa";
        case DetectorAlgorithm::gn: return "gn";
        case DetectorAlgorithm::infomap: return "infomap";
        case DetectorAlgorithm::demon: return "demon";
        case DetectorAlgorithm::kclique: return "kclique";
        case DetectorAlgorithm::bigclam: return "bigclam";
    }
    return "?";
}

bool is_overlapping(DetectorAlgorithm a) {
    return a == DetectorAlgorithm::demon || a == DetectorAlgorithm::kclique ||
           a == DetectorAlgorithm::bigclam;
}

// ---------------------------------------------------------------------------
// Label propagation
// ---------------------------------------------------------------------------

namespace {

// One async LPA pass over the given node set; labels updated in place.
// Returns true if converged (every node holds a plurality label).
bool lpa_sweeps(const std::vector<std::vector<int>>& adj, std::vector<int>& labels,
                std::mt19937_64& rng, int max_sweeps) {
    int n = static_cast<int>(adj.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::map<int, int> counts;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        bool changed = false;
        for (int v : order) {
            if (adj[v].empty()) continue;
            counts.clear();
            for (int u : adj[v]) ++counts[labels[u]];
            int best = 0;
            for (auto& [lab, c] : counts) best = std::max(best, c);
            if (counts.count(labels[v]) && counts[labels[v]] == best) continue;
            std::vector<int> top;
            for (auto& [lab, c] : counts)
                if (c == best) top.push_back(lab);
            int pick = top[std::uniform_int_distribution<size_t>(0, top.size() - 1)(rng)];
            if (pick != labels[v]) {
                labels[v] = pick;
                changed = true;
            }
        }
        if (!changed) {
            // verify plurality condition
            bool ok = true;
            for (int v = 0; v < n && ok; ++v) {
                if (adj[v].empty()) continue;
                counts.clear();
                for (int u : adj[v]) ++counts[labels[u]];
                int best = 0;
                for (auto& [lab, c] : counts) best = std::max(best, c);
                ok = counts.count(labels[v]) && counts[labels[v]] == best;
            }
            if (ok) return true;
        }
    }
    return false;
}

} // namespace

Cover detect_lpa(const Graph& g, std::uint64_t seed, int max_sweeps) {
    int n = g.num_nodes();
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    auto rng = make_rng(derive_seed(seed, "lpa"));
    bool converged = lpa_sweeps(adj, labels, rng, max_sweeps);
    Cover c = cover_from_labels(labels);
    c.converged = converged;
    return c;
}

// ---------------------------------------------------------------------------
// Modularity and Girvan-Newman
// ---------------------------------------------------------------------------

double modularity(const Graph& g, const Cover& p) {
    if (p.overlapping) throw Error("modularity: cover must be a partition");
    int n = g.num_nodes();
    if (static_cast<int>(p.membership.size()) != n) throw Error("modularity: cover size mismatch");
    double m = static_cast<double>(g.num_edges());
    if (m == 0) return 0.0;
    std::vector<double> intra(p.communities.size(), 0.0), dsum(p.communities.size(), 0.0);
    for (auto [u, v] : g.edge_list())
        if (p.membership[u][0] == p.membership[v][0]) intra[p.membership[u][0]] += 1.0;
    for (int v = 0; v < n; ++v) dsum[p.membership[v][0]] += g.degree(v);
    double q = 0.0;
    for (size_t c = 0; c < p.communities.size(); ++c) {
        double frac = dsum[c] / (2.0 * m);
        q += intra[c] / m - frac * frac;
    }
    return q;
}

Cover detect_gn(const Graph& g, int node_cap) {
    int n = g.num_nodes();
    if (n > node_cap)
        throw Error("detect_gn: graph has " + std::to_string(n) + " nodes, above the cap of " +
                    std::to_string(node_cap) + " (use lpa or infomap)");
    // working copy of the adjacency on which edges get removed
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : g.edge_list()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    auto current_graph = [&]() {
        std::vector<std::pair<int, int>> es;
        for (int u = 0; u < n; ++u)
            for (int v : adj[u])
                if (u < v) es.emplace_back(u, v);
        return Graph::from_edges(n, es);
    };
    auto partition_of = [&](const Graph& h) { return cover_from_labels(h.component_labels()); };

    Graph h = current_graph();
    Cover best_cover = partition_of(h);
    double best_q = modularity(g, best_cover);
    long long remaining = g.num_edges();
    while (remaining > 0) {
        auto eb = edge_betweenness(h);
        auto edges = h.edge_list();
        size_t arg = 0;
        for (size_t i = 1; i < eb.size(); ++i)
            if (eb[i] > eb[arg] + 1e-12) arg = i; // ties keep the lexicographically smallest edge
        auto [u, v] = edges[arg];
        adj[u].erase(v);
        adj[v].erase(u);
        --remaining;
        h = current_graph();
        Cover part = partition_of(h);
        double q = modularity(g, part);
        if (q > best_q + 1e-12) {
            best_q = q;
            best_cover = std::move(part);
        }
    }
    return best_cover;
}

// ---------------------------------------------------------------------------
// Infomap (two-level map equation)
// ---------------------------------------------------------------------------

namespace {

inline double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Weighted working graph for the aggregation levels.
struct WorkGraph {
    std::vector<std::map<int, double>> adj; // no self entries
    std::vector<double> self_w;
    std::vector<std::vector<int>> members; // original nodes per supernode

    int size() const { return static_cast<int>(adj.size()); }
};

struct MoveState {
    std::vector<int> assign;       // node -> module
    std::vector<double> mod_cut;   // per module, sum of boundary weight
    std::vector<double> mod_p;     // per module, visit-rate mass
    double total_cut = 0.0;
    double sum_plogp_cut = 0.0;    // sum over modules of plogp(cut_i)
    double sum_plogp_cp = 0.0;     // sum over modules of plogp(cut_i + p_i)
};

// Local moves minimizing L; returns true if anything moved.
bool local_moves(const WorkGraph& wg, MoveState& st, const std::vector<double>& p_node,
                 double /*node_term*/, std::mt19937_64& rng, int max_sweeps = 80) {
    int n = wg.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    bool moved_any = false;
    auto l_terms = [&](double q, double spc, double spcp) {
        return plogp(q) - 2.0 * spc + spcp;
    };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        std::shuffle(order.begin(), order.end(), rng);
        bool moved = false;
        for (int v : order) {
            if (wg.adj[v].empty()) continue;
            int a = st.assign[v];
            // weight from v to each neighboring module
            std::map<int, double> to_mod;
            double k_ext = 0.0;
            for (auto& [u, w] : wg.adj[v]) {
                to_mod[st.assign[u]] += w;
                k_ext += w;
            }
            double cur = l_terms(st.total_cut, st.sum_plogp_cut, st.sum_plogp_cp);
            double pv = p_node[v];
            double w_va = to_mod.count(a) ? to_mod[a] : 0.0;
            // state of module a with v removed
            double cut_a_new = st.mod_cut[a] - k_ext + 2.0 * w_va;
            double p_a_new = st.mod_p[a] - pv;
            double best_delta = -1e-12;
            int best_mod = a;
            double best_terms[4] = {0, 0, 0, 0};
            for (auto& [b, w_vb] : to_mod) {
                if (b == a) continue;
                double cut_b_new = st.mod_cut[b] + k_ext - 2.0 * w_vb;
                double p_b_new = st.mod_p[b] + pv;
                double q_new = st.total_cut + (cut_a_new - st.mod_cut[a]) + (cut_b_new - st.mod_cut[b]);
                double spc_new = st.sum_plogp_cut - plogp(st.mod_cut[a]) - plogp(st.mod_cut[b]) +
                                 plogp(cut_a_new) + plogp(cut_b_new);
                double spcp_new = st.sum_plogp_cp - plogp(st.mod_cut[a] + st.mod_p[a]) -
                                  plogp(st.mod_cut[b] + st.mod_p[b]) + plogp(cut_a_new + p_a_new) +
                                  plogp(cut_b_new + p_b_new);
                double delta = l_terms(q_new, spc_new, spcp_new) - cur;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_mod = b;
                    best_terms[0] = q_new;
                    best_terms[1] = spc_new;
                    best_terms[2] = spcp_new;
                }
            }
            if (best_mod != a) {
                int b = best_mod;
                double w_vb = to_mod[b];
                st.total_cut = best_terms[0];
                st.sum_plogp_cut = best_terms[1];
                st.sum_plogp_cp = best_terms[2];
                st.mod_cut[a] = cut_a_new;
                st.mod_p[a] -= pv;
                st.mod_cut[b] = st.mod_cut[b] + k_ext - 2.0 * w_vb;
                st.mod_p[b] += pv;
                st.assign[v] = b;
                moved = moved_any = true;
            }
        }
        if (!moved) break;
    }
    return moved_any;
}

Cover infomap_one_trial(const Graph& g, std::uint64_t seed) {
    int n0 = g.num_nodes();
    auto rng = make_rng(seed);

    WorkGraph wg;
    wg.adj.resize(n0);
    wg.self_w.assign(n0, 0.0);
    wg.members.resize(n0);
    for (int v = 0; v < n0; ++v) wg.members[v] = {v};
    for (auto [u, v] : g.edge_list()) {
        wg.adj[u][v] += 1.0;
        wg.adj[v][u] += 1.0;
    }

    while (true) {
        int n = wg.size();
        std::vector<double> strength(n, 0.0), p_node(n, 0.0);
        double S = 0.0;
        for (int v = 0; v < n; ++v) {
            for (auto& [u, w] : wg.adj[v]) strength[v] += w;
            strength[v] += 2.0 * wg.self_w[v];
            S += strength[v];
        }
        if (S <= 0.0) {
            // edgeless graph: everything is its own module
            Cover c = singleton_cover(n0);
            return c;
        }
        for (int v = 0; v < n; ++v) p_node[v] = strength[v] / S;

        MoveState st;
        st.assign.resize(n);
        std::iota(st.assign.begin(), st.assign.end(), 0);
        st.mod_cut.assign(n, 0.0);
        st.mod_p = p_node;
        for (int v = 0; v < n; ++v)
            for (auto& [u, w] : wg.adj[v]) st.mod_cut[v] += w / S;
        st.total_cut = 0.0;
        st.sum_plogp_cut = st.sum_plogp_cp = 0.0;
        for (int v = 0; v < n; ++v) {
            st.total_cut += st.mod_cut[v];
            st.sum_plogp_cut += plogp(st.mod_cut[v]);
            st.sum_plogp_cp += plogp(st.mod_cut[v] + st.mod_p[v]);
        }
        // normalize adj weights into visit-rate units once: cut entries above
        // were built as w/S, so keep adjacency consistent for the move loop
        WorkGraph scaled = wg;
        for (auto& row : scaled.adj)
            for (auto& [u, w] : row) w /= S;

        bool moved = local_moves(scaled, st, p_node, 0.0, rng);
        std::set<int> mods(st.assign.begin(), st.assign.end());
        if (!moved || static_cast<int>(mods.size()) == n) {
            std::map<int, std::vector<int>> groups;
            for (int v = 0; v < n; ++v)
                for (int orig : wg.members[v]) groups[st.assign[v]].push_back(orig);
            std::vector<int> labels(n0, 0);
            int c = 0;
            for (auto& [mod, nodes] : groups) {
                for (int v : nodes) labels[v] = c;
                ++c;
            }
            return cover_from_labels(labels);
        }
        // aggregate modules into supernodes
        std::map<int, int> remap;
        for (int m : mods) {
            int id = static_cast<int>(remap.size());
            remap[m] = id;
        }
        WorkGraph next;
        int nm = static_cast<int>(remap.size());
        next.adj.resize(nm);
        next.self_w.assign(nm, 0.0);
        next.members.resize(nm);
        for (int v = 0; v < n; ++v) {
            int a = remap[st.assign[v]];
            next.self_w[a] += wg.self_w[v];
            auto& dst = next.members[a];
            dst.insert(dst.end(), wg.members[v].begin(), wg.members[v].end());
        }
        for (int v = 0; v < n; ++v) {
            int a = remap[st.assign[v]];
            for (auto& [u, w] : wg.adj[v]) {
                if (u < v) continue;
                int b = remap[st.assign[u]];
                if (a == b)
                    next.self_w[a] += w;
                else {
                    next.adj[a][b] += w;
                    next.adj[b][a] += w;
                }
            }
        }
        wg = std::move(next);
    }
}

} // namespace

double map_equation(const Graph& g, const Cover& p) {
    if (p.overlapping) throw Error("map_equation: cover must be a partition");
    int n = g.num_nodes();
    double S = 2.0 * static_cast<double>(g.num_edges());
    if (S <= 0) return 0.0;
    std::vector<double> cut(p.communities.size(), 0.0), pm(p.communities.size(), 0.0);
    for (int v = 0; v < n; ++v) pm[p.membership[v][0]] += g.degree(v) / S;
    for (auto [u, v] : g.edge_list())
        if (p.membership[u][0] != p.membership[v][0]) {
            cut[p.membership[u][0]] += 1.0 / S;
            cut[p.membership[v][0]] += 1.0 / S;
        }
    double q = 0.0, L = 0.0;
    for (double c : cut) q += c;
    L += plogp(q);
    for (size_t c = 0; c < cut.size(); ++c) L += -2.0 * plogp(cut[c]) + plogp(cut[c] + pm[c]);
    for (int v = 0; v < n; ++v) L -= plogp(g.degree(v) / S);
    return L;
}

Cover detect_infomap(const Graph& g, std::uint64_t seed, int trials) {
    if (g.num_edges() == 0) return singleton_cover(g.num_nodes());
    Cover best;
    double best_l = 0.0;
    for (int t = 0; t < std::max(1, trials); ++t) {
        Cover c = infomap_one_trial(g, derive_seed(seed, "infomap", t));
        double l = map_equation(g, c);
        if (t == 0 || l < best_l - 1e-12) {
            best_l = l;
            best = std::move(c);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// DEMON
// ---------------------------------------------------------------------------

Cover detect_demon(const Graph& g, double epsilon_merge, std::uint64_t seed) {
    if (epsilon_merge < 0.0 || epsilon_merge > 1.0)
        throw Error("detect_demon: epsilon_merge must be in [0,1]");
    int n = g.num_nodes();
    std::vector<std::vector<int>> pool;
    for (int v = 0; v < n; ++v) {
        auto nbrs = g.neighbors(v);
        int k = static_cast<int>(nbrs.size());
        if (k == 0) {
            pool.push_back({v});
            continue;
        }
        // ego-minus-ego: neighbors of v and the edges among them
        std::map<int, int> local; // graph id -> local id
        for (int i = 0; i < k; ++i) local[nbrs[i]] = i;
        std::vector<std::vector<int>> adj(k);
        for (int i = 0; i < k; ++i)
            for (int u : g.neighbors(nbrs[i])) {
                auto it = local.find(u);
                if (it != local.end() && it->second > i) {
                    adj[i].push_back(it->second);
                    adj[it->second].push_back(i);
                }
            }
        std::vector<int> labels(k);
        std::iota(labels.begin(), labels.end(), 0);
        auto rng = make_rng(derive_seed(seed, "demon", static_cast<std::uint64_t>(v)));
        lpa_sweeps(adj, labels, rng, 100);
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < k; ++i) groups[labels[i]].push_back(nbrs[i]);
        for (auto& [lab, nodes] : groups) {
            nodes.push_back(v);
            std::sort(nodes.begin(), nodes.end());
            pool.push_back(nodes);
        }
    }

    // containment merge: small community absorbed when all but an
    // epsilon-fraction of it lies inside a larger one
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    auto contained = [&](const std::vector<int>& small, const std::vector<int>& large) {
        size_t inter = 0;
        size_t i = 0, j = 0;
        while (i < small.size() && j < large.size()) {
            if (small[i] == large[j]) {
                ++inter;
                ++i;
                ++j;
            } else if (small[i] < large[j])
                ++i;
            else
                ++j;
        }
        return static_cast<double>(inter) >= (1.0 - epsilon_merge) * static_cast<double>(small.size());
    };
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < pool.size() && !merged; ++i) {
            for (size_t j = i + 1; j < pool.size() && !merged; ++j) {
                const auto& a = pool[i];
                const auto& b = pool[j];
                const auto& small = a.size() <= b.size() ? a : b;
                const auto& large = a.size() <= b.size() ? b : a;
                if (contained(small, large)) {
                    std::vector<int> uni;
                    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
                    pool.erase(pool.begin() + j);
                    pool.erase(pool.begin() + i);
                    auto pos = std::lower_bound(pool.begin(), pool.end(), uni,
                                                [](const auto& x, const auto& y) {
                                                    if (x.size() != y.size()) return x.size() < y.size();
                                                    return x < y;
                                                });
                    if (pos == pool.end() || *pos != uni) pool.insert(pos, uni);
                    merged = true;
                }
            }
        }
    }

    Cover c;
    c.communities = std::move(pool);
    std::sort(c.communities.begin(), c.communities.end());
    c.overlapping = true;
    c.finalize(n);
    return c;
}

// ---------------------------------------------------------------------------
// K-clique percolation
// ---------------------------------------------------------------------------

namespace {

void bron_kerbosch(const Graph& g, std::vector<int>& R, std::vector<int> P, std::vector<int> X,
                   std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    // pivot: vertex of P ∪ X with most neighbors in P
    int pivot = -1, best = -1;
    for (int cand : P) {
        int cnt = 0;
        for (int u : P)
            if (g.has_edge(cand, u)) ++cnt;
        if (cnt > best) {
            best = cnt;
            pivot = cand;
        }
    }
    for (int cand : X) {
        int cnt = 0;
        for (int u : P)
            if (g.has_edge(cand, u)) ++cnt;
        if (cnt > best) {
            best = cnt;
            pivot = cand;
        }
    }
    std::vector<int> ext;
    for (int v : P)
        if (pivot < 0 || !g.has_edge(pivot, v)) ext.push_back(v);
    for (int v : ext) {
        std::vector<int> P2, X2;
        for (int u : P)
            if (g.has_edge(v, u)) P2.push_back(u);
        for (int u : X)
            if (g.has_edge(v, u)) X2.push_back(u);
        R.push_back(v);
        bron_kerbosch(g, R, std::move(P2), std::move(X2), out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.insert(std::lower_bound(X.begin(), X.end(), v), v);
    }
}

} // namespace

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
    std::vector<std::vector<int>> out;
    std::vector<int> R, P(g.num_nodes()), X;
    std::iota(P.begin(), P.end(), 0);
    bron_kerbosch(g, R, std::move(P), std::move(X), out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

Cover detect_kclique(const Graph& g, int k) {
    if (k < 3) throw Error("detect_kclique: k must be >= 3");
    int n = g.num_nodes();
    auto cliques = maximal_cliques(g);
    std::vector<std::vector<int>> big;
    for (auto& c : cliques)
        if (static_cast<int>(c.size()) >= k) big.push_back(c);

    // percolate over maximal cliques: adjacent when sharing >= k-1 nodes
    int nc = static_cast<int>(big.size());
    std::vector<int> parent(nc);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto shared = [](const std::vector<int>& a, const std::vector<int>& b) {
        size_t i = 0, j = 0, c = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) {
                ++c;
                ++i;
                ++j;
            } else if (a[i] < b[j])
                ++i;
            else
                ++j;
        }
        return c;
    };
    for (int i = 0; i < nc; ++i)
        for (int j = i + 1; j < nc; ++j)
            if (shared(big[i], big[j]) >= static_cast<size_t>(k - 1)) parent[find(i)] = find(j);

    std::map<int, std::set<int>> unions;
    for (int i = 0; i < nc; ++i) unions[find(i)].insert(big[i].begin(), big[i].end());

    Cover c;
    for (auto& [root, nodes] : unions) c.communities.emplace_back(nodes.begin(), nodes.end());
    std::sort(c.communities.begin(), c.communities.end());
    std::vector<bool> covered(n, false);
    for (auto& comm : c.communities)
        for (int v : comm) covered[v] = true;
    for (int v = 0; v < n; ++v)
        if (!covered[v]) {
            c.communities.push_back({v});
            c.uncovered.push_back(v);
        }
    c.overlapping = true;
    c.finalize(n);
    return c;
}

} // namespace rcdmap

#include "rcdmap/lfr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rcdmap/rng.hpp"

namespace rcdmap {

namespace {

// Discrete bounded power law P(k) ~ k^-tau on [lo, hi], inverse-CDF sampling.
struct PowerLawSampler {
    int lo;
    std::vector<double> cdf;

    PowerLawSampler(double tau, int lo_, int hi) : lo(lo_) {
        double sum = 0.0;
        cdf.reserve(hi - lo + 1);
        for (int k = lo; k <= hi; ++k) {
            sum += std::pow(static_cast<double>(k), -tau);
            cdf.push_back(sum);
        }
        for (auto& x : cdf) x /= sum;
    }
    int sample(std::mt19937_64& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        return lo + static_cast<int>(it - cdf.begin());
    }
    double mean() const {
        double m = 0.0, prev = 0.0;
        for (size_t i = 0; i < cdf.size(); ++i) {
            m += (lo + static_cast<int>(i)) * (cdf[i] - prev);
            prev = cdf[i];
        }
        return m;
    }
};

bool is_graphical(std::vector<int> seq) {
    // Erdos-Gallai
    long long sum = std::accumulate(seq.begin(), seq.end(), 0LL);
    if (sum % 2) return false;
    std::sort(seq.begin(), seq.end(), std::greater<int>());
    int n = static_cast<int>(seq.size());
    long long pref = 0;
    for (int k = 1; k <= n; ++k) {
        pref += seq[k - 1];
        long long rhs = static_cast<long long>(k) * (k - 1);
        for (int i = k; i < n; ++i) rhs += std::min(seq[i], k);
        if (pref > rhs) return false;
    }
    return true;
}

// Havel-Hakimi on (degree, node) pairs; ties shuffled for randomness.
// Degrees must form a graphical sequence.
std::vector<std::pair<int, int>> havel_hakimi(std::vector<std::pair<int, int>> work,
                                              std::mt19937_64& rng) {
    std::vector<std::pair<int, int>> edges;
    work.erase(std::remove_if(work.begin(), work.end(), [](auto& p) { return p.first <= 0; }),
               work.end());
    while (!work.empty()) {
        std::shuffle(work.begin(), work.end(), rng);
        std::stable_sort(work.begin(), work.end(),
                         [](auto& a, auto& b) { return a.first > b.first; });
        auto [d, v] = work.front();
        work.erase(work.begin());
        if (d > static_cast<int>(work.size())) throw Error("lfr: non-graphical intra sequence");
        for (int i = 0; i < d; ++i) {
            --work[i].first;
            edges.emplace_back(std::min(v, work[i].second), std::max(v, work[i].second));
        }
        work.erase(std::remove_if(work.begin(), work.end(), [](auto& p) { return p.first <= 0; }),
                   work.end());
    }
    return edges;
}

void randomize_by_swaps(std::vector<std::pair<int, int>>& edges, int nswap, std::mt19937_64& rng,
                        std::set<std::pair<int, int>>& eset) {
    if (edges.size() < 2) return;
    std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < nswap; ++s) {
        size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (unif(rng) < 0.5) std::swap(c, d);
        if (a == c || a == d || b == c || b == d) continue;
        std::pair<int, int> e1{std::min(a, c), std::max(a, c)};
        std::pair<int, int> e2{std::min(b, d), std::max(b, d)};
        if (eset.count(e1) || eset.count(e2)) continue;
        eset.erase(edges[i]);
        eset.erase(edges[j]);
        eset.insert(e1);
        eset.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
    }
}

} // namespace

double realized_mixing(const Graph& g, const Cover& cover) {
    if (g.num_edges() == 0) return 0.0;
    long long inter = 0;
    for (auto [u, v] : g.edge_list())
        if (cover.membership[u][0] != cover.membership[v][0]) ++inter;
    return static_cast<double>(inter) / static_cast<double>(g.num_edges());
}

LfrResult generate_lfr(const LfrConfig& cfg) {
    if (!(cfg.tau1 > 1.0) || !(cfg.tau2 > 1.0)) throw Error("lfr: tau exponents must exceed 1");
    if (cfg.mu < 0.0 || cfg.mu > 1.0) throw Error("lfr: mu must be in [0,1]");
    if (cfg.min_community > cfg.max_community || cfg.max_community > cfg.n)
        throw Error("lfr: community size bounds invalid");
    if (cfg.max_degree < 1 || cfg.max_degree >= cfg.n) throw Error("lfr: max_degree out of range");
    {
        int worst_intra = static_cast<int>(std::lround((1.0 - cfg.mu) * cfg.max_degree));
        if (worst_intra > cfg.max_community - 1)
            throw Error("lfr: max_degree too large for max_community (intra-degree cannot fit)");
    }

    // min degree matching the requested average
    int kmin = 1;
    double best_gap = 1e300;
    for (int k = 1; k <= cfg.max_degree; ++k) {
        PowerLawSampler s(cfg.tau1, k, cfg.max_degree);
        double gap = std::abs(s.mean() - cfg.avg_degree);
        if (gap < best_gap) {
            best_gap = gap;
            kmin = k;
        }
    }
    PowerLawSampler deg_sampler(cfg.tau1, kmin, cfg.max_degree);
    PowerLawSampler size_sampler(cfg.tau2, cfg.min_community, cfg.max_community);
    auto rng = make_rng(derive_seed(cfg.seed, "lfr"));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::string last_violation = "no feasible assignment";
    for (int restart = 0; restart < 100; ++restart) {
        int n = cfg.n;
        std::vector<int> deg(n);
        for (auto& d : deg) d = deg_sampler.sample(rng);
        if (std::accumulate(deg.begin(), deg.end(), 0LL) % 2) {
            int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
            deg[v] += deg[v] < cfg.max_degree ? 1 : -1;
        }

        // community sizes summing to n exactly
        std::vector<int> sizes;
        int total = 0;
        bool size_ok = false;
        for (int tries = 0; tries < 100000; ++tries) {
            int s = size_sampler.sample(rng);
            if (total + s == n) {
                sizes.push_back(s);
                size_ok = true;
                break;
            }
            if (total + s > n) {
                int rem = n - total;
                if (rem >= cfg.min_community) {
                    sizes.push_back(rem);
                    size_ok = true;
                }
                break;
            }
            sizes.push_back(s);
            total += s;
        }
        if (!size_ok) {
            last_violation = "community sizes cannot sum to n with the given bounds";
            continue;
        }
        int ncomm = static_cast<int>(sizes.size());

        // intra degrees, stochastic rounding so E[intra] = (1-mu) deg
        std::vector<int> dint(n);
        for (int v = 0; v < n; ++v) {
            double x = (1.0 - cfg.mu) * deg[v];
            int f = static_cast<int>(std::floor(x));
            dint[v] = f + (unif(rng) < x - f ? 1 : 0);
        }

        // assignment: big intra-degrees first, random community with room
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dint[a] > dint[b]; });
        std::vector<int> cap = sizes, assign(n, -1);
        bool placed_all = true;
        for (int v : order) {
            std::vector<int> cands;
            for (int c = 0; c < ncomm; ++c)
                if (cap[c] > 0 && sizes[c] - 1 >= dint[v]) cands.push_back(c);
            if (cands.empty()) {
                placed_all = false;
                last_violation = "node with intra-degree " + std::to_string(dint[v]) +
                                 " does not fit any community";
                break;
            }
            int c = cands[std::uniform_int_distribution<size_t>(0, cands.size() - 1)(rng)];
            assign[v] = c;
            --cap[c];
        }
        if (!placed_all) continue;

        std::vector<std::vector<int>> members(ncomm);
        for (int v = 0; v < n; ++v) members[assign[v]].push_back(v);

        // per-community parity fix; prefer borrowing an inter stub so the
        // realized mixing stays centered, drop a stub when mu = 0
        for (int c = 0; c < ncomm; ++c) {
            long long s = 0;
            for (int v : members[c]) s += dint[v];
            if (s % 2 == 0) continue;
            int up = -1;
            for (int v : members[c])
                if (deg[v] - dint[v] > 0 && dint[v] < sizes[c] - 1 && (up < 0 || deg[v] > deg[up]))
                    up = v;
            if (cfg.mu > 0.0 && up >= 0) {
                ++dint[up];
            } else {
                int down = members[c][0];
                for (int v : members[c])
                    if (dint[v] > dint[down]) down = v;
                --dint[down];
                if (cfg.mu <= 0.0) --deg[down]; // dropped outright, never rewired across
            }
        }

        // intra wiring: fix non-graphical sequences by moving stubs out, then
        // Havel-Hakimi plus randomizing swaps
        std::set<std::pair<int, int>> eset;
        bool wired = true;
        for (int c = 0; c < ncomm && wired; ++c) {
            std::vector<int> seq;
            for (int v : members[c]) seq.push_back(dint[v]);
            int guard = 0;
            while (!is_graphical(seq)) {
                int arg = static_cast<int>(std::max_element(seq.begin(), seq.end()) - seq.begin());
                if (seq[arg] <= 0 || ++guard > 4 * static_cast<int>(seq.size())) {
                    wired = false;
                    last_violation = "intra-community degree sequence not graphical";
                    break;
                }
                int v = members[c][arg];
                // the removed stub becomes inter when mu > 0, vanishes otherwise
                if (cfg.mu <= 0.0) --deg[v];
                --dint[v];
                seq[arg] = dint[v];
            }
            if (!wired) break;
            std::vector<std::pair<int, int>> work;
            for (int v : members[c]) work.emplace_back(dint[v], v);
            auto edges = havel_hakimi(std::move(work), rng);
            for (auto& e : edges) eset.insert(e);
            randomize_by_swaps(edges, 4 * static_cast<int>(edges.size()), rng, eset);
        }
        if (!wired) continue;

        // inter stubs matched across communities
        std::vector<int> inter_stubs;
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < deg[v] - dint[v]; ++i) inter_stubs.push_back(v);
        if (inter_stubs.size() % 2)
            inter_stubs.erase(inter_stubs.begin() +
                              std::uniform_int_distribution<size_t>(0, inter_stubs.size() - 1)(rng));
        std::shuffle(inter_stubs.begin(), inter_stubs.end(), rng);
        std::vector<std::pair<int, int>> pairs;
        for (size_t i = 0; i + 1 < inter_stubs.size(); i += 2)
            pairs.emplace_back(inter_stubs[i], inter_stubs[i + 1]);
        auto bad_pair = [&](const std::pair<int, int>& pr, const std::set<std::pair<int, int>>& cur) {
            auto [a, b] = pr;
            if (a == b || assign[a] == assign[b]) return true;
            return cur.count({std::min(a, b), std::max(a, b)}) > 0;
        };
        if (!pairs.empty()) {
            std::uniform_int_distribution<size_t> pick(0, pairs.size() - 1);
            for (int pass = 0; pass < 400; ++pass) {
                std::set<std::pair<int, int>> cur = eset;
                std::vector<size_t> bad;
                for (size_t i = 0; i < pairs.size(); ++i) {
                    if (bad_pair(pairs[i], cur))
                        bad.push_back(i);
                    else
                        cur.insert({std::min(pairs[i].first, pairs[i].second),
                                    std::max(pairs[i].first, pairs[i].second)});
                }
                if (bad.empty()) break;
                for (size_t i : bad) {
                    size_t j = pick(rng);
                    std::swap(pairs[i].second, pairs[j].second);
                }
            }
        }
        // commit good pairs, drop irreparable leftovers
        for (auto& pr : pairs) {
            if (bad_pair(pr, eset)) continue;
            eset.insert({std::min(pr.first, pr.second), std::max(pr.first, pr.second)});
        }

        LfrResult res;
        std::vector<std::pair<int, int>> all_edges(eset.begin(), eset.end());
        res.graph = Graph::from_edges(n, all_edges);
        res.cover = cover_from_labels(assign);
        res.realized_mixing = realized_mixing(res.graph, res.cover);
        return res;
    }
    throw Error("lfr: no feasible realization after 100 restarts (" + last_violation + ")");
}

} // namespace rcdmap

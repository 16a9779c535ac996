#include "rcdmap/sir.hpp"

#include <algorithm>
#include <set>

#include "rcdmap/rng.hpp"

namespace rcdmap {

double default_beta(const Graph& g) {
    double tau = spectral_radius(g);
    if (tau <= 0) throw Error("default_beta: spectral radius is zero");
    return 1.0 / tau;
}

SirOutcome simulate_sir(const Graph& g, const SirConfig& cfg) {
    int n = g.num_nodes();
    if (cfg.beta < 0.0 || cfg.beta > 1.0) throw Error("sir: beta must be in [0,1]");
    if (!(cfg.gamma > 0.0) || cfg.gamma > 1.0) throw Error("sir: gamma must be in (0,1]");
    if (cfg.seeds.empty()) throw Error("sir: need at least one seed node");
    if (cfg.runs < 1) throw Error("sir: runs must be >= 1");
    std::set<int> seed_set(cfg.seeds.begin(), cfg.seeds.end());
    for (int s : seed_set)
        if (s < 0 || s >= n) throw Error("sir: seed node " + std::to_string(s) + " out of range");

    SirOutcome out;
    out.supercritical = cfg.gamma > 0 && cfg.beta / cfg.gamma >= 1.0;
    out.final_infected.reserve(cfg.runs);

    std::vector<std::vector<std::array<double, 3>>> all_series;
    all_series.reserve(cfg.runs);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    enum : unsigned char { S = 0, I = 1, R = 2 };

    for (int run = 0; run < cfg.runs; ++run) {
        auto rng = make_rng(derive_seed(cfg.rng_seed, "sir-run", static_cast<std::uint64_t>(run)));
        std::vector<unsigned char> state(n, S);
        std::vector<int> infected(seed_set.begin(), seed_set.end());
        for (int s : infected) state[s] = I;
        int s_count = n - static_cast<int>(infected.size());
        int i_count = static_cast<int>(infected.size());
        int r_count = 0;

        std::vector<std::array<double, 3>> series;
        series.push_back({static_cast<double>(s_count), static_cast<double>(i_count),
                          static_cast<double>(r_count)});
        for (int t = 0; t < cfg.max_steps && !infected.empty(); ++t) {
            std::vector<int> fresh;
            for (int u : infected)
                for (int v : g.neighbors(u))
                    if (state[v] == S && unif(rng) < cfg.beta) {
                        state[v] = I;
                        fresh.push_back(v);
                    }
            std::vector<int> still;
            for (int u : infected) {
                if (unif(rng) < cfg.gamma) {
                    state[u] = R;
                    ++r_count;
                } else {
                    still.push_back(u);
                }
            }
            s_count -= static_cast<int>(fresh.size());
            i_count = static_cast<int>(still.size() + fresh.size());
            still.insert(still.end(), fresh.begin(), fresh.end());
            std::sort(still.begin(), still.end());
            infected.swap(still);
            series.push_back({static_cast<double>(s_count), static_cast<double>(i_count),
                              static_cast<double>(r_count)});
        }
        out.final_infected.push_back(r_count);
        all_series.push_back(std::move(series));
    }

    double total = 0.0;
    for (int f : out.final_infected) total += f;
    out.mean_final_infected = total / cfg.runs;

    size_t longest = 0;
    for (auto& s : all_series) longest = std::max(longest, s.size());
    out.timeseries_mean.assign(longest, {0.0, 0.0, 0.0});
    for (auto& s : all_series)
        for (size_t t = 0; t < longest; ++t) {
            const auto& row = t < s.size() ? s[t] : s.back(); // carry terminal values
            for (int k = 0; k < 3; ++k) out.timeseries_mean[t][k] += row[k];
        }
    for (auto& row : out.timeseries_mean)
        for (int k = 0; k < 3; ++k) row[k] /= cfg.runs;
    return out;
}

} // namespace rcdmap

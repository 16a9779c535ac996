#include "rcdmap/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rcdmap/rng.hpp"

namespace rcdmap {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

const std::map<std::string, std::string>& display_names() {
    static const std::map<std::string, std::string> names{
        {"degree", "Centrality"},   {"closeness", "Closeness"}, {"betweenness", "Betweenness"},
        {"kshell", "K-shell"},      {"pagerank", "PageRank"}};
    return names;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t a = tok.find_first_not_of(" \t");
        size_t b = tok.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(tok.substr(a, b - a + 1));
    }
    return out;
}

struct CellResult {
    std::string ranker, detector;
    bool ok = false;
    std::string error;
    std::vector<int> seed_counts;
    std::vector<std::vector<int>> seeds_used;      // per seed count
    std::vector<double> mean_final;                // per seed count
    std::vector<std::array<double, 3>> timeseries; // at the first seed count
    double alpha_used = 0.0;
};

} // namespace

ExperimentSpec parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open experiment config: " + path);
    ExperimentSpec spec;
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos)
                throw Error("config parse error at line " + std::to_string(lineno));
            continue;
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r\n");
            if (a == std::string::npos) return std::string();
            size_t b = s.find_last_not_of(" \t\r\n");
            return s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto has = [&](const std::string& k) { return kv.count(k) > 0; };
    if (has("dataset")) spec.dataset = kv["dataset"];
    if (has("lfr_n")) {
        LfrConfig l;
        l.n = std::stoi(kv["lfr_n"]);
        if (has("lfr_tau1")) l.tau1 = std::stod(kv["lfr_tau1"]);
        if (has("lfr_tau2")) l.tau2 = std::stod(kv["lfr_tau2"]);
        if (has("lfr_mu")) l.mu = std::stod(kv["lfr_mu"]);
        if (has("lfr_avg_degree")) l.avg_degree = std::stod(kv["lfr_avg_degree"]);
        if (has("lfr_max_degree")) l.max_degree = std::stoi(kv["lfr_max_degree"]);
        if (has("lfr_min_community")) l.min_community = std::stoi(kv["lfr_min_community"]);
        if (has("lfr_max_community")) l.max_community = std::stoi(kv["lfr_max_community"]);
        if (has("lfr_seed")) l.seed = std::stoull(kv["lfr_seed"]);
        spec.lfr = l;
    }
    if (spec.dataset.empty() && !spec.lfr) throw Error("config: set dataset= or lfr_n=");
    if (has("rankers")) spec.rankers = split_list(kv["rankers"]);
    if (has("detectors")) spec.detectors = split_list(kv["detectors"]);
    if (has("epsilon")) spec.epsilon = std::stod(kv["epsilon"]);
    if (has("rounds")) spec.rounds = std::stoi(kv["rounds"]);
    if (has("sir_runs")) spec.sir_runs = std::stoi(kv["sir_runs"]);
    if (has("sir_gamma")) spec.sir_gamma = std::stod(kv["sir_gamma"]);
    if (has("sir_beta") && kv["sir_beta"] != "auto") spec.sir_beta = std::stod(kv["sir_beta"]);
    if (has("seed_counts")) {
        spec.seed_counts.clear();
        for (auto& tok : split_list(kv["seed_counts"])) spec.seed_counts.push_back(std::stoi(tok));
    }
    if (has("outdir")) spec.outdir = kv["outdir"];
    if (has("master_seed")) spec.master_seed = std::stoull(kv["master_seed"]);
    if (has("threads")) spec.threads = std::stoi(kv["threads"]);
    return spec;
}

namespace {

ordered_json spec_to_json(const ExperimentSpec& s) {
    ordered_json j;
    j["dataset"] = s.dataset;
    if (s.lfr) {
        ordered_json l;
        l["n"] = s.lfr->n;
        l["tau1"] = s.lfr->tau1;
        l["tau2"] = s.lfr->tau2;
        l["mu"] = s.lfr->mu;
        l["avg_degree"] = s.lfr->avg_degree;
        l["max_degree"] = s.lfr->max_degree;
        l["min_community"] = s.lfr->min_community;
        l["max_community"] = s.lfr->max_community;
        l["seed"] = s.lfr->seed;
        j["lfr"] = l;
    } else {
        j["lfr"] = nullptr;
    }
    j["rankers"] = s.rankers;
    j["detectors"] = s.detectors;
    j["epsilon"] = s.epsilon;
    j["rounds"] = s.rounds;
    j["sir_runs"] = s.sir_runs;
    j["sir_gamma"] = s.sir_gamma;
    if (s.sir_beta)
        j["sir_beta"] = *s.sir_beta;
    else
        j["sir_beta"] = nullptr;
    j["seed_counts"] = s.seed_counts;
    j["outdir"] = s.outdir;
    j["master_seed"] = s.master_seed;
    j["threads"] = s.threads;
    return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec s;
    s.dataset = j.at("dataset").get<std::string>();
    if (!j.at("lfr").is_null()) {
        LfrConfig l;
        auto& lj = j.at("lfr");
        l.n = lj.at("n");
        l.tau1 = lj.at("tau1");
        l.tau2 = lj.at("tau2");
        l.mu = lj.at("mu");
        l.avg_degree = lj.at("avg_degree");
        l.max_degree = lj.at("max_degree");
        l.min_community = lj.at("min_community");
        l.max_community = lj.at("max_community");
        l.seed = lj.at("seed");
        s.lfr = l;
    }
    s.rankers = j.at("rankers").get<std::vector<std::string>>();
    s.detectors = j.at("detectors").get<std::vector<std::string>>();
    s.epsilon = j.at("epsilon");
    s.rounds = j.at("rounds");
    s.sir_runs = j.at("sir_runs");
    s.sir_gamma = j.at("sir_gamma");
    if (!j.at("sir_beta").is_null()) s.sir_beta = j.at("sir_beta").get<double>();
    s.seed_counts = j.at("seed_counts").get<std::vector<int>>();
    s.outdir = j.at("outdir").get<std::string>();
    s.master_seed = j.at("master_seed");
    s.threads = j.at("threads");
    return s;
}

} // namespace

ExperimentSpec spec_from_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw Error("cannot open manifest: " + manifest_path);
    nlohmann::json j = nlohmann::json::parse(in);
    return spec_from_json(j.at("config"));
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
    // input graph
    Graph g;
    Cover planted;
    bool have_planted = false;
    if (spec.lfr) {
        auto lfr = generate_lfr(*spec.lfr);
        g = std::move(lfr.graph);
        planted = std::move(lfr.cover);
        have_planted = true;
    } else {
        auto parsed = parse_edge_list_file(spec.dataset);
        auto lcc = largest_connected_component(parsed.graph);
        g = std::move(lcc.graph);
    }
    double beta = spec.sir_beta ? *spec.sir_beta : default_beta(g);

    struct Cell {
        std::string ranker, detector;
    };
    std::vector<Cell> cells;
    for (auto& r : spec.rankers) {
        cells.push_back({r, "base"});
        for (auto& d : spec.detectors) cells.push_back({r, d});
    }

    std::vector<CellResult> results(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            CellResult& res = results[i];
            res.ranker = cells[i].ranker;
            res.detector = cells[i].detector;
            res.seed_counts = spec.seed_counts;
            try {
                std::vector<int> full_order;
                if (cells[i].detector == "base") {
                    auto sv = compute_scores(g, cells[i].ranker);
                    full_order = ranked_order(sv.scores);
                } else {
                    PenaltyConfig pc;
                    pc.base_method = cells[i].ranker;
                    pc.epsilon = spec.epsilon;
                    pc.rounds = spec.rounds;
                    pc.seed = derive_seed(spec.master_seed, "rcd:" + cells[i].ranker + ":" + cells[i].detector);
                    RcdMapResult rr;
                    if (cells[i].detector == "planted") {
                        if (!have_planted) throw Error("planted detector requires an lfr input");
                        rr = rcd_map_with_cover(g, pc, planted);
                    } else {
                        pc.detector.algorithm = detector_from_string(cells[i].detector);
                        rr = rcd_map(g, pc);
                    }
                    full_order = rr.seeds.order;
                    res.alpha_used = rr.alpha_used;
                }
                for (size_t ks = 0; ks < spec.seed_counts.size(); ++ks) {
                    int k = spec.seed_counts[ks];
                    if (k < 1 || k > g.num_nodes())
                        throw Error("seed count " + std::to_string(k) + " out of range");
                    SirConfig sc;
                    sc.beta = beta;
                    sc.gamma = spec.sir_gamma;
                    sc.runs = spec.sir_runs;
                    sc.seeds.assign(full_order.begin(), full_order.begin() + k);
                    sc.rng_seed = derive_seed(spec.master_seed, "sir:" + cells[i].ranker, ks);
                    auto outcome = simulate_sir(g, sc);
                    res.seeds_used.push_back(sc.seeds);
                    res.mean_final.push_back(outcome.mean_final_infected);
                    if (ks == 0) res.timeseries = outcome.timeseries_mean;
                }
                res.ok = true;
            } catch (const std::exception& e) {
                res.ok = false;
                res.error = e.what();
            }
        }
    };
    int nthreads = std::max(1, spec.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // persist everything in deterministic order
    fs::create_directories(spec.outdir);
    fs::create_directories(fs::path(spec.outdir) / "cells");
    ExperimentOutcome out;

    {
        std::ofstream csv(fs::path(spec.outdir) / "summary.csv", std::ios::binary);
        csv << "ranker,detector,seed_count,mean_final_infected\n";
        for (auto& res : results) {
            if (!res.ok) continue;
            auto it = display_names().find(res.ranker);
            std::string rname = it != display_names().end() ? it->second : res.ranker;
            std::string dname = res.detector == "base" ? "Base" : res.detector;
            csv << rname << ',' << dname << ',' << res.seed_counts[0] << ','
                << fmt6(res.mean_final[0]) << '\n';
        }
    }
    {
        // same numbers reshaped for the anova subcommand: detectors are the
        // treatments, rankers the blocks
        std::ofstream csv(fs::path(spec.outdir) / "anova_input.csv", std::ios::binary);
        csv << "treatment,block,value\n";
        for (auto& res : results) {
            if (!res.ok) continue;
            std::string dname = res.detector == "base" ? "Base" : res.detector;
            csv << dname << ',' << res.ranker << ',' << fmt6(res.mean_final[0]) << '\n';
        }
    }
    for (auto& res : results) {
        std::string stem = res.ranker + "__" + res.detector;
        if (!res.ok) {
            out.partial = true;
            out.failed_cells.push_back(stem + ": " + res.error);
            continue;
        }
        ordered_json j;
        j["ranker"] = res.ranker;
        j["detector"] = res.detector;
        if (res.detector != "base") j["alpha"] = res.alpha_used;
        ordered_json sweeps = ordered_json::array();
        for (size_t ks = 0; ks < res.seed_counts.size(); ++ks) {
            ordered_json e;
            e["seed_count"] = res.seed_counts[ks];
            e["seeds"] = res.seeds_used[ks];
            e["mean_final_infected"] = res.mean_final[ks];
            sweeps.push_back(e);
        }
        j["sweep"] = sweeps;
        std::ofstream jf(fs::path(spec.outdir) / "cells" / (stem + ".json"), std::ios::binary);
        jf << j.dump(2) << '\n';

        std::ofstream sweep_csv(fs::path(spec.outdir) / "cells" / (stem + "_sweep.csv"),
                                std::ios::binary);
        sweep_csv << "seed_count,mean_final_infected\n";
        for (size_t ks = 0; ks < res.seed_counts.size(); ++ks)
            sweep_csv << res.seed_counts[ks] << ',' << fmt6(res.mean_final[ks]) << '\n';

        std::ofstream ts(fs::path(spec.outdir) / "cells" / (stem + "_timeseries.csv"),
                         std::ios::binary);
        ts << "t,s,i,r\n";
        for (size_t t = 0; t < res.timeseries.size(); ++t)
            ts << t << ',' << fmt6(res.timeseries[t][0]) << ',' << fmt6(res.timeseries[t][1]) << ','
               << fmt6(res.timeseries[t][2]) << '\n';
    }

    ordered_json manifest;
    manifest["version"] = 1;
    manifest["config"] = spec_to_json(spec);
    manifest["beta_used"] = beta;
    manifest["partial"] = out.partial;
    ordered_json cellsj = ordered_json::array();
    for (auto& res : results) {
        ordered_json c;
        c["ranker"] = res.ranker;
        c["detector"] = res.detector;
        c["status"] = res.ok ? "ok" : "failed";
        if (!res.ok) c["error"] = res.error;
        if (res.detector != "base")
            c["rcd_seed"] = derive_seed(spec.master_seed, "rcd:" + res.ranker + ":" + res.detector);
        ordered_json sirseeds = ordered_json::array();
        for (size_t ks = 0; ks < res.seed_counts.size(); ++ks)
            sirseeds.push_back(derive_seed(spec.master_seed, "sir:" + res.ranker, ks));
        c["sir_rng_seeds"] = sirseeds;
        cellsj.push_back(c);
    }
    manifest["cells"] = cellsj;
    out.manifest_path = (fs::path(spec.outdir) / "manifest.json").string();
    std::ofstream mf(out.manifest_path, std::ios::binary);
    mf << manifest.dump(2) << '\n';
    return out;
}

} // namespace rcdmap

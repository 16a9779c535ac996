#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcdmap/experiment.hpp"
#include "rcdmap/lfr.hpp"
#include "rcdmap/perturb.hpp"
#include "rcdmap/rng.hpp"
#include "rcdmap/select.hpp"
#include "rcdmap/sir.hpp"
#include "rcdmap/stats.hpp"

using nlohmann::ordered_json;
using namespace rcdmap;

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

ParsedGraph load_graph(const std::string& path) { return parse_edge_list_file(path, true); }

std::vector<int> parse_id_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

int map_to_dense(const ParsedGraph& pg, long long original) {
    auto it = std::lower_bound(pg.original_ids.begin(), pg.original_ids.end(), original);
    if (it == pg.original_ids.end() || *it != original)
        throw Error("node id " + std::to_string(original) + " not present in the graph");
    return static_cast<int>(it - pg.original_ids.begin());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rcdmap: community-penalized influential node selection toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may appear after the subcommand name

    std::uint64_t global_seed = 0;
    int threads = 1;
    std::string format = "csv";
    app.add_option("--seed", global_seed, "master random seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for grid experiments")->capture_default_str();
    app.add_option("--format", format, "output format for tabular results")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // ---- stats ----
    auto* cmd_stats = app.add_subcommand("stats", "topological statistics of the largest component");
    std::string stats_input;
    bool stats_whole = false;
    cmd_stats->add_option("--input", stats_input, "edge list file")->required();
    cmd_stats->add_flag("--no-lcc", stats_whole, "do not restrict to the largest component");

    // ---- rank ----
    auto* cmd_rank = app.add_subcommand("rank", "baseline node ranking");
    std::string rank_method, rank_input;
    int rank_top = 0;
    cmd_rank->add_option("--method", rank_method, "degree|closeness|betweenness|kshell|pagerank")
        ->required();
    cmd_rank->add_option("--input", rank_input, "edge list file")->required();
    cmd_rank->add_option("--top", rank_top, "emit only the best K rows (0 = all)");

    // ---- communities ----
    auto* cmd_comm = app.add_subcommand("communities", "community detection");
    std::string comm_algorithm, comm_input;
    int comm_k = 3, comm_c = 0;
    double comm_eps_merge = 0.25;
    cmd_comm->add_option("--algorithm", comm_algorithm, "lpa|gn|infomap|demon|kclique|bigclam")
        ->required();
    cmd_comm->add_option("--input", comm_input, "edge list file")->required();
    cmd_comm->add_option("--k", comm_k, "clique size for kclique");
    cmd_comm->add_option("--communities", comm_c, "bigclam community count (0 = sweep)");
    cmd_comm->add_option("--epsilon-merge", comm_eps_merge, "demon merge threshold");

    // ---- perturb ----
    auto* cmd_pert = app.add_subcommand("perturb", "uniform edge resampling");
    std::string pert_input, pert_output;
    double pert_eps = 0.05;
    cmd_pert->add_option("--epsilon", pert_eps, "expected fraction of edges changed")->required();
    cmd_pert->add_option("--input", pert_input, "edge list file")->required();
    cmd_pert->add_option("--output", pert_output, "output edge list file")->required();

    // ---- rcdmap ----
    auto* cmd_rcd = app.add_subcommand("rcdmap", "resampled community-penalized ranking");
    std::string rcd_method, rcd_detector = "infomap", rcd_input, rcd_sidecar, rcd_cover_file;
    double rcd_eps = 0.05;
    int rcd_rounds = 20, rcd_top = 0, rcd_kexp = 0;
    double rcd_alpha = 0.0;
    bool rcd_rank_avg = false;
    cmd_rcd->add_option("--method", rcd_method, "base ranking method")->required();
    cmd_rcd->add_option("--detector", rcd_detector, "community detector (or 'planted' with --communities-file)");
    cmd_rcd->add_option("--communities-file", rcd_cover_file, "JSON cover for --detector planted");
    cmd_rcd->add_option("--epsilon", rcd_eps, "perturbation fraction")->capture_default_str();
    cmd_rcd->add_option("--rounds", rcd_rounds, "resampling rounds M")->capture_default_str();
    cmd_rcd->add_option("--input", rcd_input, "edge list file")->required();
    cmd_rcd->add_option("--top", rcd_top, "emit only the best K rows (0 = all)");
    cmd_rcd->add_option("--alpha", rcd_alpha, "penalty coefficient (0 = derive from method)");
    cmd_rcd->add_option("--k-exponent", rcd_kexp, "community size exponent (0 = auto)");
    cmd_rcd->add_flag("--rank-average", rcd_rank_avg, "average ranks instead of scores");
    cmd_rcd->add_option("--sidecar", rcd_sidecar, "write per-round selections JSON here");

    // ---- sir ----
    auto* cmd_sir = app.add_subcommand("sir", "SIR spreading evaluation");
    std::string sir_input, sir_seeds_str, sir_ts;
    double sir_beta = -1.0, sir_gamma = 0.8;
    int sir_runs = 1000;
    cmd_sir->add_option("--input", sir_input, "edge list file")->required();
    cmd_sir->add_option("--seeds", sir_seeds_str, "comma separated node ids")->required();
    cmd_sir->add_option("--beta", sir_beta, "infection probability (default 1/spectral radius)");
    cmd_sir->add_option("--gamma", sir_gamma, "recovery probability")->capture_default_str();
    cmd_sir->add_option("--runs", sir_runs, "independent runs")->capture_default_str();
    std::uint64_t sir_rng_seed = 0;
    bool sir_rng_seed_set = false;
    cmd_sir->add_option("--rng-seed", sir_rng_seed, "SIR RNG seed (default: --seed)")
        ->each([&](const std::string&) { sir_rng_seed_set = true; });
    cmd_sir->add_option("--timeseries", sir_ts, "write averaged t,s,i,r CSV here");

    // ---- lfr ----
    auto* cmd_lfr = app.add_subcommand("lfr", "LFR synthetic benchmark generator");
    LfrConfig lfr_cfg;
    std::string lfr_graph_out, lfr_comm_out;
    cmd_lfr->add_option("--n", lfr_cfg.n, "node count")->required();
    cmd_lfr->add_option("--tau1", lfr_cfg.tau1, "degree exponent")->capture_default_str();
    cmd_lfr->add_option("--tau2", lfr_cfg.tau2, "community size exponent")->capture_default_str();
    cmd_lfr->add_option("--mu", lfr_cfg.mu, "mixing parameter")->capture_default_str();
    cmd_lfr->add_option("--avg-degree", lfr_cfg.avg_degree, "target average degree")->capture_default_str();
    cmd_lfr->add_option("--max-degree", lfr_cfg.max_degree, "maximum degree")->capture_default_str();
    cmd_lfr->add_option("--min-community", lfr_cfg.min_community, "minimum community size")->capture_default_str();
    cmd_lfr->add_option("--max-community", lfr_cfg.max_community, "maximum community size")->capture_default_str();
    cmd_lfr->add_option("--out-graph", lfr_graph_out, "edge list output")->required();
    cmd_lfr->add_option("--out-communities", lfr_comm_out, "ground-truth cover JSON output")->required();

    // ---- anova ----
    auto* cmd_anova = app.add_subcommand("anova", "randomized complete block design analysis");
    std::string anova_input;
    double anova_alpha = 0.05;
    cmd_anova->add_option("--input", anova_input, "CSV with treatment,block,value rows")->required();
    cmd_anova->add_option("--alpha", anova_alpha, "significance level for Fisher LSD")->capture_default_str();

    // ---- experiment ----
    auto* cmd_exp = app.add_subcommand("experiment", "full pipeline grid run");
    std::string exp_config, exp_manifest;
    cmd_exp->add_option("--config", exp_config, "flat key=value experiment config");
    cmd_exp->add_option("--manifest", exp_manifest, "replay a previous run from its manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) {
            ordered_json err;
            err["error"] = e.what();
            err["kind"] = "usage";
            std::cerr << err.dump() << '\n';
        }
        return app.exit(e);
    }

    try {
        if (*cmd_stats) {
            auto pg = load_graph(stats_input);
            Graph g = pg.graph;
            if (!stats_whole) g = largest_connected_component(pg.graph).graph;
            auto s = graph_stats(g);
            ordered_json j;
            j["n"] = s.n;
            j["m"] = s.m;
            j["avg_degree"] = s.avg_degree;
            j["max_degree"] = s.max_degree;
            j["spectral_radius"] = s.spectral_radius;
            j["avg_shortest_path"] = s.avg_shortest_path;
            j["avg_betweenness"] = s.avg_betweenness;
            j["self_loops_dropped"] = pg.self_loops_dropped;
            std::cout << j.dump(2) << '\n';
        } else if (*cmd_rank) {
            auto pg = load_graph(rank_input);
            auto sv = compute_scores(pg.graph, rank_method);
            auto order = ranked_order(sv.scores);
            int top = rank_top > 0 ? std::min<int>(rank_top, order.size()) : static_cast<int>(order.size());
            if (format == "json") {
                ordered_json rows = ordered_json::array();
                for (int r = 0; r < top; ++r) {
                    ordered_json row;
                    row["node"] = pg.original_ids[order[r]];
                    row["score"] = sv.scores[order[r]];
                    row["rank"] = r + 1;
                    rows.push_back(row);
                }
                std::cout << rows.dump(2) << '\n';
            } else {
                std::cout << "node,score,rank\n";
                for (int r = 0; r < top; ++r)
                    std::cout << pg.original_ids[order[r]] << ',' << fmt(sv.scores[order[r]]) << ','
                              << (r + 1) << '\n';
            }
        } else if (*cmd_comm) {
            auto pg = load_graph(comm_input);
            DetectorConfig dc;
            dc.algorithm = detector_from_string(comm_algorithm);
            dc.seed = global_seed;
            dc.k = comm_k;
            dc.num_communities = comm_c;
            dc.epsilon_merge = comm_eps_merge;
            Cover cover = detect(pg.graph, dc);
            ordered_json j;
            j["algorithm"] = comm_algorithm;
            j["overlapping"] = cover.overlapping;
            j["converged"] = cover.converged;
            j["num_communities"] = cover.num_communities();
            ordered_json comms = ordered_json::array();
            for (auto& c : cover.communities) {
                ordered_json ids = ordered_json::array();
                for (int v : c) ids.push_back(pg.original_ids[v]);
                comms.push_back(ids);
            }
            j["communities"] = comms;
            ordered_json mem = ordered_json::array();
            for (auto& m : cover.membership) mem.push_back(m);
            j["membership"] = mem;
            ordered_json unc = ordered_json::array();
            for (int v : cover.uncovered) unc.push_back(pg.original_ids[v]);
            j["uncovered"] = unc;
            std::cout << j.dump(2) << '\n';
        } else if (*cmd_pert) {
            auto pg = load_graph(pert_input);
            PerturbConfig pc{pert_eps, global_seed};
            Graph out = perturb_erp(pg.graph, pc);
            std::ofstream f(pert_output, std::ios::binary);
            if (!f) throw Error("cannot write " + pert_output);
            write_edge_list(f, out, &pg.original_ids);
        } else if (*cmd_rcd) {
            auto pg = load_graph(rcd_input);
            PenaltyConfig pc;
            pc.base_method = rcd_method;
            pc.epsilon = rcd_eps;
            pc.rounds = rcd_rounds;
            pc.seed = global_seed;
            pc.rank_average = rcd_rank_avg;
            pc.k_exponent = rcd_kexp;
            if (rcd_alpha > 0) pc.alpha = rcd_alpha;
            RcdMapResult rr;
            if (rcd_detector == "planted") {
                if (rcd_cover_file.empty()) throw Error("--detector planted needs --communities-file");
                std::ifstream cf(rcd_cover_file);
                if (!cf) throw Error("cannot open " + rcd_cover_file);
                nlohmann::json cj = nlohmann::json::parse(cf);
                Cover cover;
                for (auto& arr : cj.at("communities")) {
                    std::vector<int> nodes;
                    for (auto& id : arr) nodes.push_back(map_to_dense(pg, id.get<long long>()));
                    cover.communities.push_back(std::move(nodes));
                }
                cover.overlapping = cj.value("overlapping", false);
                cover.finalize(pg.graph.num_nodes());
                rr = rcd_map_with_cover(pg.graph, pc, cover);
            } else {
                pc.detector.algorithm = detector_from_string(rcd_detector);
                rr = rcd_map(pg.graph, pc);
            }
            int top = rcd_top > 0 ? std::min<int>(rcd_top, rr.seeds.order.size())
                                  : static_cast<int>(rr.seeds.order.size());
            if (format == "json") {
                ordered_json rows = ordered_json::array();
                for (int r = 0; r < top; ++r) {
                    ordered_json row;
                    row["rank"] = r + 1;
                    row["node"] = pg.original_ids[rr.seeds.order[r]];
                    row["avg_score"] = rr.seeds.final_scores[r];
                    rows.push_back(row);
                }
                std::cout << rows.dump(2) << '\n';
            } else {
                std::cout << "rank,node,avg_score\n";
                for (int r = 0; r < top; ++r)
                    std::cout << (r + 1) << ',' << pg.original_ids[rr.seeds.order[r]] << ','
                              << fmt(rr.seeds.final_scores[r]) << '\n';
            }
            if (!rcd_sidecar.empty()) {
                ordered_json sj;
                sj["method"] = rcd_method;
                sj["detector"] = rcd_detector;
                sj["epsilon"] = rcd_eps;
                sj["rounds"] = rcd_rounds;
                sj["seed"] = global_seed;
                sj["alpha"] = rr.alpha_used;
                ordered_json rounds = ordered_json::array();
                for (size_t i = 0; i < rr.round_orders.size(); ++i) {
                    ordered_json rj;
                    rj["round"] = i + 1;
                    rj["perturb_seed"] = global_seed + i + 1;
                    ordered_json ord = ordered_json::array();
                    for (int v : rr.round_orders[i]) ord.push_back(pg.original_ids[v]);
                    rj["order"] = ord;
                    rj["selection_scores"] = rr.round_scores[i];
                    rounds.push_back(rj);
                }
                sj["rounds"] = rounds;
                std::ofstream sf(rcd_sidecar, std::ios::binary);
                if (!sf) throw Error("cannot write " + rcd_sidecar);
                sf << sj.dump(2) << '\n';
            }
        } else if (*cmd_sir) {
            auto pg = load_graph(sir_input);
            SirConfig sc;
            sc.beta = sir_beta >= 0 ? sir_beta : default_beta(pg.graph);
            sc.gamma = sir_gamma;
            sc.runs = sir_runs;
            sc.rng_seed = sir_rng_seed_set ? sir_rng_seed : global_seed;
            for (long long id : parse_id_list(sir_seeds_str)) sc.seeds.push_back(map_to_dense(pg, id));
            auto out = simulate_sir(pg.graph, sc);
            if (out.supercritical)
                std::cerr << "warning: beta/gamma >= 1, spreading is supercritical\n";
            ordered_json j;
            j["beta"] = sc.beta;
            j["gamma"] = sc.gamma;
            j["runs"] = sc.runs;
            ordered_json seeds = ordered_json::array();
            for (int s : sc.seeds) seeds.push_back(pg.original_ids[s]);
            j["seeds"] = seeds;
            j["mean_final_infected"] = out.mean_final_infected;
            j["supercritical"] = out.supercritical;
            j["per_run_final"] = out.final_infected;
            std::cout << j.dump(2) << '\n';
            if (!sir_ts.empty()) {
                std::ofstream tf(sir_ts, std::ios::binary);
                if (!tf) throw Error("cannot write " + sir_ts);
                tf << "t,s,i,r\n";
                for (size_t t = 0; t < out.timeseries_mean.size(); ++t) {
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f\n", t,
                                  out.timeseries_mean[t][0], out.timeseries_mean[t][1],
                                  out.timeseries_mean[t][2]);
                    tf << buf;
                }
            }
        } else if (*cmd_lfr) {
            lfr_cfg.seed = global_seed;
            auto res = generate_lfr(lfr_cfg);
            std::ofstream gf(lfr_graph_out, std::ios::binary);
            if (!gf) throw Error("cannot write " + lfr_graph_out);
            write_edge_list(gf, res.graph);
            ordered_json cj;
            cj["overlapping"] = false;
            cj["realized_mixing"] = res.realized_mixing;
            ordered_json comms = ordered_json::array();
            for (auto& c : res.cover.communities) comms.push_back(c);
            cj["communities"] = comms;
            std::ofstream cf(lfr_comm_out, std::ios::binary);
            if (!cf) throw Error("cannot write " + lfr_comm_out);
            cf << cj.dump(2) << '\n';
            std::cerr << "n=" << res.graph.num_nodes() << " m=" << res.graph.num_edges()
                      << " communities=" << res.cover.num_communities()
                      << " realized_mixing=" << fmt(res.realized_mixing) << '\n';
        } else if (*cmd_anova) {
            std::ifstream f(anova_input);
            if (!f) throw Error("cannot open " + anova_input);
            std::vector<std::tuple<std::string, std::string, double>> rows;
            std::string line;
            long long lineno = 0;
            while (std::getline(f, line)) {
                ++lineno;
                if (line.empty() || line[0] == '#') continue;
                std::stringstream ss(line);
                std::string t, b, v;
                if (!std::getline(ss, t, ',') || !std::getline(ss, b, ',') || !std::getline(ss, v))
                    throw Error("anova: malformed line " + std::to_string(lineno));
                try {
                    rows.emplace_back(t, b, std::stod(v));
                } catch (const std::exception&) {
                    if (lineno == 1) continue; // header row
                    throw Error("anova: non-numeric value at line " + std::to_string(lineno));
                }
            }
            auto data = stats::blocked_from_rows(rows);
            auto tab = stats::rcbd_anova(data);
            ordered_json j;
            j["ss_treat"] = tab.ss_treat;
            j["ss_block"] = tab.ss_block;
            j["ss_error"] = tab.ss_error;
            j["ss_total"] = tab.ss_total;
            j["df_treat"] = tab.df_treat;
            j["df_block"] = tab.df_block;
            j["df_error"] = tab.df_error;
            j["df_total"] = tab.df_total;
            j["ms_treat"] = tab.ms_treat;
            j["ms_error"] = tab.ms_error;
            j["f0"] = tab.f0;
            j["p_value"] = tab.p_value;
            j["degenerate"] = tab.degenerate;
            // the block factor is a nuisance dimension in this design; its
            // test statistics are reported as supplementary only
            j["block_f0_supplementary"] = tab.f_block;
            j["block_p_value_supplementary"] = tab.p_block;
            std::cout << j.dump(2) << '\n';
            if (!tab.degenerate) {
                std::vector<double> means(data.treatments.size(), 0.0);
                for (size_t i = 0; i < data.values.size(); ++i) {
                    for (double v : data.values[i]) means[i] += v;
                    means[i] /= data.values[i].size();
                }
                auto lsd = stats::fisher_lsd(means, tab.ms_error, tab.df_error,
                                             static_cast<int>(data.blocks.size()), anova_alpha);
                std::cout << "\nFisher LSD = " << fmt(lsd.lsd)
                          << " (levels not connected by the same letter differ)\n";
                for (int idx : lsd.order) {
                    char buf[160];
                    std::snprintf(buf, sizeof(buf), "%-16s %10.4f  %s\n",
                                  data.treatments[idx].c_str(), means[idx],
                                  lsd.letters[idx].c_str());
                    std::cout << buf;
                }
            }
        } else if (*cmd_exp) {
            ExperimentSpec spec;
            if (!exp_manifest.empty())
                spec = spec_from_manifest(exp_manifest);
            else if (!exp_config.empty())
                spec = parse_experiment_config(exp_config);
            else
                throw Error("experiment: pass --config or --manifest");
            if (threads > 1) spec.threads = threads;
            auto out = run_experiment(spec);
            std::cout << "manifest: " << out.manifest_path << '\n';
            if (out.partial) {
                std::cerr << "warning: " << out.failed_cells.size() << " cell(s) failed\n";
                for (auto& c : out.failed_cells) std::cerr << "  " << c << '\n';
                return 3;
            }
        }
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = e.what();
        err["kind"] = "runtime";
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 0;
}

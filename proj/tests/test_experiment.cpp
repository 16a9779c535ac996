#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rcdmap/experiment.hpp"

using namespace rcdmap;
namespace fs = std::filesystem;

namespace {
const std::string kKarate = std::string(TEST_DATA_DIR) + "/karate.txt";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}
} // namespace

TEST_CASE("config parsing") {
    fs::path cfg = fresh_dir("rcdmap_cfg_test");
    fs::create_directories(cfg);
    std::ofstream f(cfg / "exp.conf");
    f << "# comment line\n"
      << "dataset = " << kKarate << "\n"
      << "rankers = degree, kshell\n"
      << "detectors = infomap\n"
      << "epsilon = 0.1\n"
      << "rounds = 3\n"
      << "sir_runs = 50\n"
      << "sir_beta = auto\n"
      << "seed_counts = 2,5\n"
      << "outdir = " << (cfg / "out").string() << "\n"
      << "master_seed = 9\n";
    f.close();
    auto spec = parse_experiment_config((cfg / "exp.conf").string());
    CHECK(spec.rankers == std::vector<std::string>{"degree", "kshell"});
    CHECK(spec.detectors == std::vector<std::string>{"infomap"});
    CHECK(spec.epsilon == doctest::Approx(0.1));
    CHECK(spec.rounds == 3);
    CHECK(spec.sir_runs == 50);
    CHECK_FALSE(spec.sir_beta.has_value());
    CHECK(spec.seed_counts == std::vector<int>{2, 5});
    CHECK(spec.master_seed == 9);
}

TEST_CASE("experiment run: summary shape, manifest replay determinism") {
    ExperimentSpec spec;
    spec.dataset = kKarate;
    spec.rankers = {"degree", "kshell"};
    spec.detectors = {"infomap"};
    spec.rounds = 3;
    spec.sir_runs = 60;
    spec.seed_counts = {5, 8};
    spec.master_seed = 31;
    fs::path out = fresh_dir("rcdmap_exp_run");
    spec.outdir = out.string();

    auto outcome = run_experiment(spec);
    CHECK_FALSE(outcome.partial);

    auto summary = slurp(out / "summary.csv");
    int rows = -1; // subtract the header
    for (char c : summary)
        if (c == '\n') ++rows;
    CHECK(rows == 2 * (1 + 1)); // rankers x (detectors + base)
    CHECK(summary.find("Centrality,Base,5,") != std::string::npos);
    CHECK(summary.find("K-shell,infomap,5,") != std::string::npos);

    CHECK(fs::exists(out / "cells" / "degree__base.json"));
    CHECK(fs::exists(out / "cells" / "kshell__infomap_timeseries.csv"));
    CHECK(fs::exists(out / "cells" / "kshell__infomap_sweep.csv"));

    // replay from the manifest into a second directory: byte-identical bundle
    auto spec2 = spec_from_manifest((out / "manifest.json").string());
    fs::path out2 = fresh_dir("rcdmap_exp_replay");
    spec2.outdir = out2.string();
    auto outcome2 = run_experiment(spec2);
    CHECK_FALSE(outcome2.partial);
    CHECK(slurp(out / "summary.csv") == slurp(out2 / "summary.csv"));
    for (auto& name : {"degree__base.json", "degree__infomap.json", "kshell__base.json",
                       "kshell__infomap.json"})
        CHECK(slurp(out / "cells" / name) == slurp(out2 / "cells" / name));
}

TEST_CASE("experiment run: lfr input with the planted detector") {
    ExperimentSpec spec;
    LfrConfig lfr;
    lfr.n = 120;
    lfr.seed = 5;
    spec.lfr = lfr;
    spec.rankers = {"degree"};
    spec.detectors = {"planted"};
    spec.rounds = 2;
    spec.sir_runs = 40;
    spec.seed_counts = {4};
    spec.master_seed = 77;
    fs::path out = fresh_dir("rcdmap_exp_lfr");
    spec.outdir = out.string();
    auto outcome = run_experiment(spec);
    CHECK_FALSE(outcome.partial);
    CHECK(fs::exists(out / "cells" / "degree__planted.json"));
}

TEST_CASE("experiment run: a failing cell marks the run partial") {
    ExperimentSpec spec;
    spec.dataset = kKarate;
    spec.rankers = {"degree"};
    spec.detectors = {};
    spec.sir_runs = 10;
    spec.seed_counts = {99}; // more seeds than nodes
    spec.master_seed = 1;
    fs::path out = fresh_dir("rcdmap_exp_fail");
    spec.outdir = out.string();
    auto outcome = run_experiment(spec);
    CHECK(outcome.partial);
    CHECK(outcome.failed_cells.size() == 1);
    auto manifest = slurp(out / "manifest.json");
    CHECK(manifest.find("\"partial\": true") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "rcdmap/graph.hpp"

using namespace rcdmap;

namespace {
const std::string kKarate = std::string(TEST_DATA_DIR) + "/karate.txt";
}

TEST_CASE("parse: triangle") {
    std::istringstream in("0 1\n0 2\n1 2\n");
    auto pg = parse_edge_list(in);
    CHECK(pg.graph.num_nodes() == 3);
    CHECK(pg.graph.num_edges() == 3);
    CHECK(pg.self_loops_dropped == 0);
}

TEST_CASE("parse: karate counts") {
    auto pg = parse_edge_list_file(kKarate);
    CHECK(pg.graph.num_nodes() == 34);
    CHECK(pg.graph.num_edges() == 78);
}

TEST_CASE("parse: dedup and self-loop rules") {
    std::istringstream in("0 1\n1 0\n0 0\n");
    auto pg = parse_edge_list(in);
    CHECK(pg.graph.num_nodes() == 2);
    CHECK(pg.graph.num_edges() == 1);
    CHECK(pg.self_loops_dropped == 1);
    CHECK(pg.duplicates_collapsed == 1);
}

TEST_CASE("parse: comments, malformed lines, empty input") {
    std::istringstream ok("# comment\n% other comment\n3 7\n");
    auto pg = parse_edge_list(ok);
    CHECK(pg.graph.num_nodes() == 2); // relabeled densely
    CHECK(pg.original_ids == std::vector<long long>{3, 7});

    std::istringstream bad("0 1\n0 x\n");
    CHECK_THROWS_WITH_AS(parse_edge_list(bad), doctest::Contains("line 2"), Error);

    std::istringstream three_tokens("0 1 5\n");
    CHECK_THROWS_AS(parse_edge_list(three_tokens), Error);

    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_edge_list(empty), Error);
}

TEST_CASE("parse/serialize round trip") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = oracles::random_graph(2 + static_cast<int>(rng() % 12), 0.4, rng());
        std::ostringstream out;
        write_edge_list(out, g);
        if (g.num_edges() == 0) continue;
        std::istringstream in(out.str());
        auto pg = parse_edge_list(in);
        CHECK(pg.graph.edge_list() == [&] {
            // relabeling may drop isolated nodes; compare via original ids
            std::vector<std::pair<int, int>> expect;
            for (auto [u, v] : g.edge_list())
                expect.emplace_back(static_cast<int>(std::lower_bound(pg.original_ids.begin(),
                                                                      pg.original_ids.end(), u) -
                                                     pg.original_ids.begin()),
                                    static_cast<int>(std::lower_bound(pg.original_ids.begin(),
                                                                      pg.original_ids.end(), v) -
                                                     pg.original_ids.begin()));
            std::sort(expect.begin(), expect.end());
            return expect;
        }());
    }
}

TEST_CASE("degree sum equals 2m") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracles::random_graph(1 + static_cast<int>(rng() % 15), 0.3, rng());
        long long sum = 0;
        for (int v = 0; v < g.num_nodes(); ++v) sum += g.degree(v);
        CHECK(sum == 2 * g.num_edges());
    }
}

TEST_CASE("lcc: triangle plus isolated edge") {
    auto g = Graph::from_edges(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}});
    auto lcc = largest_connected_component(g);
    CHECK(lcc.graph.num_nodes() == 3);
    CHECK(lcc.graph.num_edges() == 3);
    CHECK(lcc.old_ids == std::vector<int>{0, 1, 2});
}

TEST_CASE("lcc: karate is one component (BFS oracle)") {
    auto pg = parse_edge_list_file(kKarate);
    auto d = pg.graph.bfs_distances(0);
    for (int v = 0; v < pg.graph.num_nodes(); ++v) CHECK(d[v] >= 0);
    auto lcc = largest_connected_component(pg.graph);
    CHECK(lcc.graph.num_nodes() == 34);
    CHECK(lcc.graph.num_edges() == 78);
}

TEST_CASE("lcc: equal-size tie keeps the component containing node 0") {
    auto g = Graph::from_edges(4, {{0, 2}, {1, 3}});
    auto lcc = largest_connected_component(g);
    CHECK(lcc.old_ids == std::vector<int>{0, 2});
}

TEST_CASE("stats: karate two-decimal table values") {
    auto pg = parse_edge_list_file(kKarate);
    auto s = graph_stats(pg.graph);
    CHECK(s.n == 34);
    CHECK(s.m == 78);
    CHECK(s.avg_degree == doctest::Approx(4.59).epsilon(0.002));
    CHECK(s.max_degree == 17);
    CHECK(s.spectral_radius == doctest::Approx(6.73).epsilon(0.002));
}

TEST_CASE("stats: regular and path graphs") {
    auto tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    auto st = graph_stats(tri);
    CHECK(st.avg_degree == doctest::Approx(2.0));
    CHECK(st.max_degree == 2);
    CHECK(st.spectral_radius == doctest::Approx(2.0).epsilon(1e-8));

    auto p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(spectral_radius(p3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("stats: disconnected graph errors") {
    auto g = Graph::from_edges(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(graph_stats(g), Error);
}

TEST_CASE("spectral radius sits between average and maximum degree") {
    std::mt19937_64 rng(29);
    int checked = 0;
    while (checked < 30) {
        int n = 3 + static_cast<int>(rng() % 12);
        auto g = oracles::random_graph(n, 0.5, rng());
        int nc = 0;
        g.component_labels(&nc);
        if (nc != 1) continue;
        ++checked;
        auto s = graph_stats(g);
        CHECK(s.spectral_radius >= s.avg_degree - 1e-9);
        CHECK(s.spectral_radius <= s.max_degree + 1e-9);
    }
}

TEST_CASE("power iteration matches dense Jacobi oracle on small graphs") {
    std::mt19937_64 rng(23);
    int tested = 0;
    while (tested < 40) {
        int n = 2 + static_cast<int>(rng() % 9);
        auto g = oracles::random_graph(n, 0.45, rng());
        if (g.num_edges() == 0) continue;
        ++tested;
        double pi = spectral_radius(g);
        double ja = oracles::spectral_radius(g);
        CHECK(pi == doctest::Approx(ja).epsilon(1e-6));
    }
}

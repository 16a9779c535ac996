#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rcdmap/stats.hpp"

using namespace rcdmap::stats;
using rcdmap::Error;

TEST_CASE("incomplete beta matches the quadrature oracle") {
    const double params[][2] = {{0.5, 0.5}, {1, 1}, {2, 3}, {3, 12}, {12, 12}, {0.5, 5}, {24, 2}};
    const double xs[] = {0.05, 0.3, 0.5, 0.9};
    int points = 0;
    for (auto& ab : params)
        for (double x : xs) {
            double fast = incomplete_beta(ab[0], ab[1], x);
            double slow = oracles::incbeta_quadrature(ab[0], ab[1], x);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-7));
            ++points;
        }
    CHECK(points >= 20);
}

TEST_CASE("t and F distribution basics") {
    CHECK(t_cdf(0.0, 7) == doctest::Approx(0.5));
    CHECK(t_cdf(2.0, 7) + t_cdf(-2.0, 7) == doctest::Approx(1.0).epsilon(1e-12));
    // quantile inverts the cdf
    for (double p : {0.6, 0.9, 0.975, 0.999})
        for (double df : {1.0, 5.0, 24.0, 100.0})
            CHECK(t_cdf(t_quantile(p, df), df) == doctest::Approx(p).epsilon(1e-8));
    // classic table entry
    CHECK(t_quantile(0.975, 24) == doctest::Approx(2.0639).epsilon(1e-4));
    CHECK(f_cdf(0.0, 3, 10) == doctest::Approx(0.0));
    CHECK(f_cdf(1e9, 3, 10) == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        double c = f_cdf(x, 6, 24);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("rcbd anova: hand-computed 2x2") {
    BlockedData d;
    d.values = {{1, 2}, {3, 4}};
    auto t = rcbd_anova(d);
    CHECK(t.ss_treat == doctest::Approx(4.0));
    CHECK(t.ss_block == doctest::Approx(1.0));
    CHECK(t.ss_error == doctest::Approx(0.0));
    CHECK(t.degenerate);
    CHECK(t.p_value == 0.0);
}

TEST_CASE("rcbd anova: degrees of freedom for a 7x5 design") {
    BlockedData d;
    d.values.assign(7, std::vector<double>(5));
    std::mt19937_64 rng(3);
    for (auto& row : d.values)
        for (auto& v : row) v = std::uniform_real_distribution<double>(0, 1)(rng);
    auto t = rcbd_anova(d);
    CHECK(t.df_treat == 6);
    CHECK(t.df_block == 4);
    CHECK(t.df_error == 24);
    CHECK(t.df_total == 34);
    CHECK(t.ss_total ==
          doctest::Approx(t.ss_treat + t.ss_block + t.ss_error).epsilon(1e-9));
}

TEST_CASE("rcbd anova: all cells equal is degenerate") {
    BlockedData d;
    d.values.assign(3, std::vector<double>(4, 2.5));
    auto t = rcbd_anova(d);
    CHECK(t.ss_treat == doctest::Approx(0.0));
    CHECK(t.ss_block == doctest::Approx(0.0));
    CHECK(t.ss_error == doctest::Approx(0.0));
    CHECK(t.degenerate);
}

TEST_CASE("rcbd anova matches triple-summation oracle on random matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int a = 2 + static_cast<int>(rng() % 9), b = 2 + static_cast<int>(rng() % 9);
        BlockedData d;
        d.values.assign(a, std::vector<double>(b));
        for (auto& row : d.values)
            for (auto& v : row) v = std::uniform_real_distribution<double>(-5, 5)(rng);
        auto t = rcbd_anova(d);
        auto ss = oracles::anova_ss(d.values);
        CHECK(t.ss_treat == doctest::Approx(ss.treat).epsilon(1e-9));
        CHECK(t.ss_block == doctest::Approx(ss.block).epsilon(1e-9));
        CHECK(t.ss_error == doctest::Approx(ss.error).epsilon(1e-9));
        CHECK(t.ss_total == doctest::Approx(ss.total).epsilon(1e-9));
    }
}

TEST_CASE("published seven-treatment analysis: F statistic and p-value") {
    // sums of squares as published for the seven-detector comparison
    double ms_treat = 1.9966 / 6, ms_error = 2.0241 / 24;
    double f0 = ms_treat / ms_error;
    CHECK(f0 == doctest::Approx(3.9459).epsilon(2e-4));
    CHECK(1.0 - f_cdf(f0, 6, 24) == doctest::Approx(0.0069).epsilon(0.02));
}

TEST_CASE("fisher lsd reproduces the published letter display") {
    std::vector<double> means = {18.4540, 18.4248, 18.3738, 18.2932, 18.2744, 17.9750, 17.7610};
    // order: Infomap DEMON BigCLAM K-clique LPA GN Base
    auto lsd = fisher_lsd(means, 0.0843, 24, 5);
    CHECK(lsd.lsd == doctest::Approx(0.379).epsilon(0.001 / 0.379));
    CHECK(lsd.letters[0] == "A");  // Infomap
    CHECK(lsd.letters[1] == "A");  // DEMON
    CHECK(lsd.letters[2] == "A");  // BigCLAM
    CHECK(lsd.letters[3] == "AB"); // K-clique
    CHECK(lsd.letters[4] == "AB"); // LPA
    CHECK(lsd.letters[5] == "BC"); // GN
    CHECK(lsd.letters[6] == "C");  // Base
    // pairwise statements from the published table
    CHECK(means[0] - means[5] > lsd.lsd);  // Infomap vs GN differ
    CHECK(means[0] - means[4] < lsd.lsd);  // Infomap vs LPA do not
    CHECK(means[5] - means[6] < lsd.lsd);  // GN vs Base do not
}

TEST_CASE("fisher lsd edge cases") {
    auto same = fisher_lsd({3.0, 3.0}, 0.5, 10, 4);
    CHECK(same.letters[0] == "A");
    CHECK(same.letters[1] == "A");

    auto far = fisher_lsd({10.0, 0.0}, 1e-12, 10, 4);
    CHECK(far.letters[0] != far.letters[1]);

    CHECK_THROWS_AS(fisher_lsd({1.0, 2.0}, 0.5, 0, 4), Error);
}

TEST_CASE("blocked data from long rows") {
    std::vector<std::tuple<std::string, std::string, double>> rows = {
        {"t1", "b1", 1.0}, {"t1", "b2", 2.0}, {"t2", "b1", 3.0}, {"t2", "b2", 4.0}};
    auto d = blocked_from_rows(rows);
    CHECK(d.treatments == std::vector<std::string>{"t1", "t2"});
    CHECK(d.values[1][0] == 3.0);

    rows.push_back({"t1", "b1", 9.0});
    CHECK_THROWS_AS(blocked_from_rows(rows), Error);

    std::vector<std::tuple<std::string, std::string, double>> missing = {
        {"t1", "b1", 1.0}, {"t1", "b2", 2.0}, {"t2", "b1", 3.0}};
    CHECK_THROWS_AS(blocked_from_rows(missing), Error);
}

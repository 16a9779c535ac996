#pragma once

#include <string>
#include <vector>

#include "rcdmap/graph.hpp"

namespace rcdmap {
namespace stats {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

double f_cdf(double x, double df1, double df2);
double t_cdf(double t, double df);
// Inverse of t_cdf in p (Newton with bisection fallback).
double t_quantile(double p, double df);

struct BlockedData {
    // values[i][j]: treatment i, block j. Complete design.
    std::vector<std::vector<double>> values;
    std::vector<std::string> treatments;
    std::vector<std::string> blocks;
};

struct AnovaTable {
    double ss_treat = 0, ss_block = 0, ss_error = 0, ss_total = 0;
    int df_treat = 0, df_block = 0, df_error = 0, df_total = 0;
    double ms_treat = 0, ms_error = 0;
    double f0 = 0;
    double p_value = 0;
    bool degenerate = false; // ms_error == 0
    // supplementary block-factor stats (the design treats blocks as nuisance)
    double ms_block = 0, f_block = 0, p_block = 0;
};

AnovaTable rcbd_anova(const BlockedData& data);

struct LsdResult {
    double lsd = 0;
    std::vector<int> order;            // treatment indices, mean descending
    std::vector<std::string> letters;  // per treatment (original index)
    std::vector<double> means;         // per treatment (original index)
};

// Fisher least significant difference with the standard letter-group sweep:
// each maximal run of consecutively-sorted means within LSD of each other
// shares a letter; runs contained in earlier runs are skipped.
LsdResult fisher_lsd(const std::vector<double>& means, double ms_error, int df_error,
                     int reps_per_treatment, double alpha_level = 0.05);

// Long-format rows (treatment, block, value) -> complete matrix.
BlockedData blocked_from_rows(
    const std::vector<std::tuple<std::string, std::string, double>>& rows);

} // namespace stats
} // namespace rcdmap

#include "rcdmap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace rcdmap {
namespace stats {

namespace {

// Lentz continued fraction for the incomplete beta (Numerical Recipes form).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) throw Error("incomplete_beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double df1, double df2) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return incomplete_beta(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2));
}

double t_cdf(double t, double df) {
    if (df <= 0) throw Error("t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw Error("t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;
    // Newton from a normal-ish start with bisection safety net
    double lo = -1e10, hi = 1e10;
    double x = p > 0.5 ? 1.0 : -1.0;
    for (int it = 0; it < 200; ++it) {
        double f = t_cdf(x, df) - p;
        if (std::abs(f) < 1e-14) break;
        if (f > 0)
            hi = std::min(hi, x);
        else
            lo = std::max(lo, x);
        double pdf = std::exp(std::lgamma((df + 1) / 2.0) - std::lgamma(df / 2.0)) /
                     std::sqrt(df * std::acos(-1.0)) *
                     std::pow(1.0 + x * x / df, -(df + 1) / 2.0);
        double nx = pdf > 1e-300 ? x - f / pdf : (lo + hi) / 2.0;
        if (nx <= lo || nx >= hi) nx = (lo + hi) / 2.0;
        if (std::abs(nx - x) < 1e-12 * std::max(1.0, std::abs(nx))) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

AnovaTable rcbd_anova(const BlockedData& data) {
    int a = static_cast<int>(data.values.size());
    if (a < 2) throw Error("rcbd_anova: need at least 2 treatments");
    int b = static_cast<int>(data.values[0].size());
    if (b < 2) throw Error("rcbd_anova: need at least 2 blocks");
    for (auto& row : data.values)
        if (static_cast<int>(row.size()) != b) throw Error("rcbd_anova: incomplete design");

    double grand = 0.0;
    for (auto& row : data.values)
        for (double y : row) grand += y;
    grand /= a * b;

    std::vector<double> treat_mean(a, 0.0), block_mean(b, 0.0);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            treat_mean[i] += data.values[i][j];
            block_mean[j] += data.values[i][j];
        }
    for (auto& t : treat_mean) t /= b;
    for (auto& m : block_mean) m /= a;

    AnovaTable t;
    for (int i = 0; i < a; ++i) t.ss_treat += b * (treat_mean[i] - grand) * (treat_mean[i] - grand);
    for (int j = 0; j < b; ++j) t.ss_block += a * (block_mean[j] - grand) * (block_mean[j] - grand);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            double y = data.values[i][j];
            t.ss_total += (y - grand) * (y - grand);
            double e = y - treat_mean[i] - block_mean[j] + grand;
            t.ss_error += e * e;
        }
    t.df_treat = a - 1;
    t.df_block = b - 1;
    t.df_error = (a - 1) * (b - 1);
    t.df_total = a * b - 1;
    t.ms_treat = t.ss_treat / t.df_treat;
    t.ms_error = t.ss_error / t.df_error;
    t.ms_block = t.ss_block / t.df_block;
    if (t.ms_error <= 0.0) {
        t.degenerate = true;
        t.f0 = t.ms_treat > 0 ? std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::quiet_NaN();
        t.p_value = 0.0;
        t.f_block = t.ms_block > 0 ? std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::quiet_NaN();
        t.p_block = 0.0;
        return t;
    }
    t.f0 = t.ms_treat / t.ms_error;
    t.p_value = 1.0 - f_cdf(t.f0, t.df_treat, t.df_error);
    t.f_block = t.ms_block / t.ms_error;
    t.p_block = 1.0 - f_cdf(t.f_block, t.df_block, t.df_error);
    return t;
}

LsdResult fisher_lsd(const std::vector<double>& means, double ms_error, int df_error,
                     int reps_per_treatment, double alpha_level) {
    if (df_error < 1) throw Error("fisher_lsd: error degrees of freedom must be >= 1");
    if (reps_per_treatment < 1) throw Error("fisher_lsd: reps must be >= 1");
    int k = static_cast<int>(means.size());
    if (k < 2) throw Error("fisher_lsd: need at least 2 treatments");

    LsdResult res;
    res.means = means;
    double tq = t_quantile(1.0 - alpha_level / 2.0, df_error);
    res.lsd = tq * std::sqrt(2.0 * ms_error / reps_per_treatment);

    res.order.resize(k);
    std::iota(res.order.begin(), res.order.end(), 0);
    std::stable_sort(res.order.begin(), res.order.end(),
                     [&](int x, int y) { return means[x] > means[y]; });

    // maximal runs of sorted means whose extremes differ by at most LSD
    std::vector<std::pair<int, int>> runs; // [lo, hi] in sorted positions
    for (int i = 0; i < k; ++i) {
        int j = i;
        while (j + 1 < k && means[res.order[i]] - means[res.order[j + 1]] <= res.lsd) ++j;
        if (runs.empty() || runs.back().second < j) runs.push_back({i, j});
    }
    res.letters.assign(k, "");
    for (size_t r = 0; r < runs.size(); ++r) {
        char letter = static_cast<char>('A' + (r % 26));
        for (int i = runs[r].first; i <= runs[r].second; ++i) res.letters[res.order[i]] += letter;
    }
    return res;
}

BlockedData blocked_from_rows(
    const std::vector<std::tuple<std::string, std::string, double>>& rows) {
    BlockedData d;
    std::map<std::string, int> tix, bix;
    for (auto& [t, b, v] : rows) {
        if (!tix.count(t)) {
            tix[t] = static_cast<int>(d.treatments.size());
            d.treatments.push_back(t);
        }
        if (!bix.count(b)) {
            bix[b] = static_cast<int>(d.blocks.size());
            d.blocks.push_back(b);
        }
    }
    int a = static_cast<int>(d.treatments.size()), b = static_cast<int>(d.blocks.size());
    d.values.assign(a, std::vector<double>(b, std::numeric_limits<double>::quiet_NaN()));
    for (auto& [t, blk, v] : rows) {
        double& cell = d.values[tix[t]][bix[blk]];
        if (!std::isnan(cell)) throw Error("blocked data: duplicate cell " + t + "/" + blk);
        cell = v;
    }
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            if (std::isnan(d.values[i][j]))
                throw Error("blocked data: missing cell " + d.treatments[i] + "/" + d.blocks[j]);
    return d;
}

} // namespace stats
} // namespace rcdmap

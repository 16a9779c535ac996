// Independent brute-force reference implementations used only by tests.
// They intentionally avoid the algorithms used in the library (Brandes,
// bucket peeling, continued fractions, power iteration).
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "rcdmap/community.hpp"
#include "rcdmap/graph.hpp"

namespace oracles {

using rcdmap::Graph;

inline Graph random_graph(int n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (unif(rng) < p) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

// all-pairs distances by Floyd-Warshall (no BFS)
inline std::vector<std::vector<int>> floyd_warshall(const Graph& g) {
    int n = g.num_nodes();
    const int INF = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, INF));
    for (int v = 0; v < n; ++v) d[v][v] = 0;
    for (auto [u, v] : g.edge_list()) d[u][v] = d[v][u] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// shortest-path counts sigma[s][t] from the distance matrix by DP over
// nodes ordered by distance from s
inline std::vector<std::vector<double>> path_counts(const Graph& g,
                                                    const std::vector<std::vector<int>>& d) {
    int n = g.num_nodes();
    const int INF = 1 << 28;
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (int s = 0; s < n; ++s) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return d[s][a] < d[s][b]; });
        sigma[s][s] = 1.0;
        for (int t : order) {
            if (t == s || d[s][t] >= INF) continue;
            double c = 0.0;
            for (int u : g.neighbors(t))
                if (d[s][u] == d[s][t] - 1) c += sigma[s][u];
            sigma[s][t] = c;
        }
    }
    return sigma;
}

// BC(i) = sum over unordered pairs {s,t}, s!=i!=t of sigma_st(i)/sigma_st
inline std::vector<double> betweenness(const Graph& g) {
    int n = g.num_nodes();
    const int INF = 1 << 28;
    auto d = floyd_warshall(g);
    auto sigma = path_counts(g, d);
    std::vector<double> bc(n, 0.0);
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t) {
            if (d[s][t] >= INF || sigma[s][t] == 0.0) continue;
            for (int i = 0; i < n; ++i) {
                if (i == s || i == t) continue;
                if (d[s][i] + d[i][t] == d[s][t]) bc[i] += sigma[s][i] * sigma[i][t] / sigma[s][t];
            }
        }
    return bc;
}

inline std::vector<double> closeness(const Graph& g) {
    auto d = floyd_warshall(g);
    int n = g.num_nodes();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        long long sum = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) sum += d[i][j];
        out[i] = sum > 0 ? 1.0 / sum : 0.0;
    }
    return out;
}

// literal shell peeling: k = 1, 2, ...; at each k repeatedly remove nodes of
// current degree <= k and assign them shell k
inline std::vector<int> kshell(const Graph& g) {
    int n = g.num_nodes();
    std::vector<int> deg(n), shell(n, -1);
    for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
    std::vector<bool> removed(n, false);
    int assigned = 0;
    for (int k = 1; assigned < n && k <= n; ++k) {
        bool again = true;
        while (again) {
            again = false;
            for (int v = 0; v < n; ++v) {
                if (removed[v] || deg[v] > k) continue;
                removed[v] = true;
                shell[v] = k;
                ++assigned;
                again = true;
                for (int u : g.neighbors(v))
                    if (!removed[u]) --deg[u];
            }
        }
    }
    return shell;
}

inline double modularity(const Graph& g, const rcdmap::Cover& p) {
    double m = static_cast<double>(g.num_edges());
    if (m == 0) return 0.0;
    double q = 0.0;
    for (auto& comm : p.communities) {
        double e_c = 0.0, d_c = 0.0;
        for (auto [u, v] : g.edge_list()) {
            bool uin = std::binary_search(comm.begin(), comm.end(), u);
            bool vin = std::binary_search(comm.begin(), comm.end(), v);
            if (uin && vin) e_c += 1.0;
        }
        for (int v : comm) d_c += g.degree(v);
        q += e_c / m - (d_c / (2.0 * m)) * (d_c / (2.0 * m));
    }
    return q;
}

// edge betweenness by per-pair shortest-path counting: edge (u,v) carries
// sigma_s(u) * sigma_v(t) / sigma_st for every pair {s,t} it serves
inline std::map<std::pair<int, int>, double> edge_betweenness(const Graph& g) {
    const int INF = 1 << 28;
    auto d = floyd_warshall(g);
    auto sigma = path_counts(g, d);
    std::map<std::pair<int, int>, double> eb;
    for (auto e : g.edge_list()) eb[e] = 0.0;
    int n = g.num_nodes();
    for (int s = 0; s < n; ++s)
        for (int t = s + 1; t < n; ++t) {
            if (d[s][t] >= INF || sigma[s][t] == 0.0) continue;
            for (auto [u, v] : g.edge_list()) {
                double credit = 0.0;
                if (d[s][u] + 1 + d[v][t] == d[s][t]) credit += sigma[s][u] * sigma[v][t];
                if (d[s][v] + 1 + d[u][t] == d[s][t]) credit += sigma[s][v] * sigma[u][t];
                eb[{u, v}] += credit / sigma[s][t];
            }
        }
    return eb;
}

// two-level map equation straight from its textbook form
// L = q H(Q) + sum_i p_i H(P_i), visit rates proportional to degree
inline double map_equation(const Graph& g, const rcdmap::Cover& p) {
    double S = 2.0 * static_cast<double>(g.num_edges());
    if (S <= 0) return 0.0;
    size_t k = p.communities.size();
    std::vector<double> cut(k, 0.0), vol(k, 0.0);
    for (auto [u, v] : g.edge_list()) {
        int cu = p.membership[u][0], cv = p.membership[v][0];
        if (cu != cv) {
            cut[cu] += 1.0 / S;
            cut[cv] += 1.0 / S;
        }
    }
    for (int v = 0; v < g.num_nodes(); ++v) vol[p.membership[v][0]] += g.degree(v) / S;
    double q = 0.0;
    for (double c : cut) q += c;
    double L = 0.0;
    if (q > 0) {
        double h = 0.0;
        for (double c : cut)
            if (c > 0) h -= c / q * std::log2(c / q);
        L += q * h;
    }
    for (size_t i = 0; i < k; ++i) {
        double total = cut[i] + vol[i];
        if (total <= 0) continue;
        double h = 0.0;
        if (cut[i] > 0) h -= cut[i] / total * std::log2(cut[i] / total);
        for (int v : p.communities[i]) {
            double pv = g.degree(v) / S;
            if (pv > 0) h -= pv / total * std::log2(pv / total);
        }
        L += total * h;
    }
    return L;
}

// pagerank as the direct solution of the dense linear system
//   p = c/n + (1-c) (A D^{-1}) p   (degree-0 mass spread uniformly)
inline std::vector<double> pagerank_solve(const Graph& g, double c) {
    int n = g.num_nodes();
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        m[i][i] = 1.0;
        for (int j : g.neighbors(i)) m[i][j] -= (1.0 - c) / g.degree(j);
        for (int j = 0; j < n; ++j)
            if (g.degree(j) == 0) m[i][j] -= (1.0 - c) / n;
        m[i][n] = c / n;
    }
    for (int col = 0; col < n; ++col) { // gaussian elimination, partial pivot
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[piv], m[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0.0) continue;
            double f = m[r][col] / m[col][col];
            for (int cc = col; cc <= n; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = m[i][n] / m[i][i];
    return p;
}

// symmetric Jacobi eigenvalue sweep; returns the largest eigenvalue
inline double jacobi_max_eigenvalue(std::vector<std::vector<double>> a) {
    int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    double mx = a[0][0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, a[i][i]);
    return mx;
}

inline double spectral_radius(const Graph& g) {
    int n = g.num_nodes();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (auto [u, v] : g.edge_list()) a[u][v] = a[v][u] = 1.0;
    return jacobi_max_eigenvalue(std::move(a));
}

// ANOVA sums of squares by direct summation over cells
struct AnovaSS {
    double treat = 0, block = 0, error = 0, total = 0;
};

inline AnovaSS anova_ss(const std::vector<std::vector<double>>& y) {
    int a = static_cast<int>(y.size()), b = static_cast<int>(y[0].size());
    double grand = 0;
    for (auto& row : y)
        for (double v : row) grand += v;
    grand /= a * b;
    AnovaSS ss;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            double ti = 0, bj = 0;
            for (int jj = 0; jj < b; ++jj) ti += y[i][jj];
            for (int ii = 0; ii < a; ++ii) bj += y[ii][j];
            ti /= b;
            bj /= a;
            ss.total += (y[i][j] - grand) * (y[i][j] - grand);
            ss.treat += (ti - grand) * (ti - grand);
            ss.block += (bj - grand) * (bj - grand);
            ss.error += (y[i][j] - ti - bj + grand) * (y[i][j] - ti - bj + grand);
        }
    return ss;
}

// regularized incomplete beta by adaptive Simpson quadrature after the
// substitution t = sin^2(theta), which removes the endpoint singularities
// for a, b >= 1/2:
//   integrand(theta) = 2 sin^(2a-1)(theta) cos^(2b-1)(theta)
inline double incbeta_quadrature(double a, double b, double x) {
    auto f = [&](double th) {
        double s = std::sin(th), c = std::cos(th);
        if (s <= 0.0 || c <= 0.0) {
            // limits are finite only because a, b >= 1/2 in the test points
            if (s <= 0.0) return (2.0 * a - 1.0) == 0.0 ? 2.0 * std::pow(c, 2.0 * b - 1.0) : 0.0;
            return (2.0 * b - 1.0) == 0.0 ? 2.0 * std::pow(s, 2.0 * a - 1.0) : 0.0;
        }
        return 2.0 * std::pow(s, 2.0 * a - 1.0) * std::pow(c, 2.0 * b - 1.0);
    };
    std::function<double(double, double, double, double, double, int)> simp =
        [&](double lo, double hi, double flo, double fhi, double fm, int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        double flm = f(lm), frm = f(rm);
        double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fm);
        double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fhi);
        if (depth > 44 || std::abs(left + right - whole) < 1e-14 * std::abs(left + right) + 1e-300)
            return left + right;
        return simp(lo, mid, flo, fm, flm, depth + 1) + simp(mid, hi, fm, fhi, frm, depth + 1);
    };
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double hi = std::asin(std::sqrt(x));
    double integral = simp(0.0, hi, f(0.0), f(hi), f(0.5 * hi), 0);
    double lnB = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return integral / std::exp(lnB);
}

// discrete power-law exponent by maximum likelihood (Clauset et al. with the
// -1/2 continuity correction), degrees below kmin excluded
inline double powerlaw_mle(const std::vector<int>& degrees, int kmin) {
    double s = 0.0;
    int cnt = 0;
    for (int d : degrees) {
        if (d < kmin) continue;
        s += std::log(d / (kmin - 0.5));
        ++cnt;
    }
    return 1.0 + cnt / s;
}

} // namespace oracles

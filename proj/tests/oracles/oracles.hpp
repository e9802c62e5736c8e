#pragma once

// Brute-force reference implementations used only by tests. They share no code
// with the library beyond its plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "reebmm/complex.hpp"
#include "reebmm/diagram.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm::oracle {

inline double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// delta_{mu,s}(x) straight from the definition: the smallest support distance r
/// with mu(closed ball(x, r)) > s.
inline double quantile_radius(const EmpiricalMeasure& mu, double s, std::span<const double> x) {
    std::vector<double> radii;
    for (std::size_t i = 0; i < mu.size(); ++i) radii.push_back(dist(mu.point(i), x));
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        double ball = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (dist(mu.point(i), x) <= r) ball += mu.mass(i);
        }
        if (ball > s) return r;
    }
    return radii.back();
}

/// sqrt((1/m) int_0^m delta_s^2 ds) by the midpoint rule on `steps` cells.
inline double dtm_grid(const EmpiricalMeasure& mu, double m, std::span<const double> x, std::size_t steps) {
    std::vector<std::pair<double, double>> by_dist;
    for (std::size_t i = 0; i < mu.size(); ++i) by_dist.emplace_back(dist(mu.point(i), x), mu.mass(i));
    std::sort(by_dist.begin(), by_dist.end());
    const double h = m / static_cast<double>(steps);
    double acc = 0.0;
    std::size_t k = 0;
    double cum = by_dist[0].second;
    for (std::size_t j = 0; j < steps; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * h;
        while (cum <= s && k + 1 < by_dist.size()) cum += by_dist[++k].second;
        acc += by_dist[k].first * by_dist[k].first * h;
    }
    return std::sqrt(acc / m);
}

/// W2 on the line through the quantile coupling of sorted supports.
inline double wasserstein2_1d(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    auto sorted = [](const EmpiricalMeasure& m) {
        std::vector<std::pair<double, double>> v;
        for (std::size_t i = 0; i < m.size(); ++i) v.emplace_back(m.point(i)[0], m.mass(i));
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto a = sorted(mu);
    const auto b = sorted(nu);
    std::size_t i = 0, j = 0;
    double ra = a[0].second, rb = b[0].second, cost = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(ra, rb);
        cost += t * (a[i].first - b[j].first) * (a[i].first - b[j].first);
        ra -= t;
        rb -= t;
        if (ra <= 1e-15 && ++i < a.size()) ra = a[i].second;
        if (rb <= 1e-15 && ++j < b.size()) rb = b[j].second;
    }
    return std::sqrt(cost);
}

/// The PL CDF surrogate built by hand: cumulative mass at each distinct sample,
/// linear in between, zero one first-gap below the smallest sample.
struct PlCdf {
    std::vector<double> x;
    std::vector<double> y;

    PlCdf(std::vector<double> samples, std::vector<double> masses) {
        std::map<double, double> at;
        double total = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            at[samples[i]] += masses[i];
            total += masses[i];
        }
        auto it = at.begin();
        const double s1 = it->first;
        const double s2 = std::next(it)->first;
        x.push_back(s1 - (s2 - s1));
        y.push_back(0.0);
        double cum = 0.0;
        for (const auto& [s, w] : at) {
            cum += w;
            x.push_back(s);
            y.push_back(cum / total);
        }
        y.back() = 1.0;
    }

    double operator()(double t) const {
        if (t <= x.front()) return 0.0;
        if (t >= x.back()) return 1.0;
        const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
        const double lam = (t - x[k - 1]) / (x[k] - x[k - 1]);
        return y[k - 1] + lam * (y[k] - y[k - 1]);
    }
};

/// sup over a uniform grid of `n` + 1 points on [lo, hi].
inline double ks_grid(const PlCdf& F, const PlCdf& G, double lo, double hi, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
        best = std::max(best, std::abs(F(t) - G(t)));
    }
    return best;
}

/// Largest difference quotient over a uniform grid.
inline double lipschitz_grid(const PlCdf& F, double lo, double hi, std::size_t n) {
    const double h = (hi - lo) / static_cast<double>(n);
    double best = 0.0;
    double prev = F(lo);
    for (std::size_t i = 1; i <= n; ++i) {
        const double cur = F(lo + h * static_cast<double>(i));
        best = std::max(best, std::abs(cur - prev) / h);
        prev = cur;
    }
    return best;
}

/// Bottleneck distance by enumerating every partial matching. Points only match
/// within one (dim, class); an unmatched point pays half its persistence.
inline double bottleneck_exhaustive(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const auto& P = a.points;
    const auto& Q = b.points;
    auto diag = [](const DiagramPoint& p) { return std::abs(p.birth - p.death) / 2.0; };
    auto pair_cost = [](const DiagramPoint& p, const DiagramPoint& q) {
        if (p.dim != q.dim || p.cls != q.cls) return std::numeric_limits<double>::infinity();
        return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
    };
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> used(Q.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cur) {
        if (cur >= best) return;
        if (i == P.size()) {
            double c = cur;
            for (std::size_t j = 0; j < Q.size(); ++j) {
                if (!used[j]) c = std::max(c, diag(Q[j]));
            }
            best = std::min(best, c);
            return;
        }
        rec(i + 1, std::max(cur, diag(P[i])));
        for (std::size_t j = 0; j < Q.size(); ++j) {
            if (used[j]) continue;
            used[j] = 1;
            rec(i + 1, std::max(cur, pair_cost(P[i], Q[j])));
            used[j] = 0;
        }
    };
    rec(0, 0.0);
    return best;
}

/// Cycle rank |E| - |V| + components of the subgraph on nodes with value in [lo, hi].
inline long long cycle_rank(const ReebGraph& g, double lo, double hi) {
    std::vector<std::size_t> parent(g.num_nodes());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    auto in = [&](std::size_t v) { return g.value(v) >= lo && g.value(v) <= hi; };
    long long nodes = 0, edges = 0, comps = 0;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) nodes += in(v) ? 1 : 0;
    comps = nodes;
    for (const auto& e : g.edges) {
        if (!in(e[0]) || !in(e[1])) continue;
        ++edges;
        const auto a = find(e[0]), b = find(e[1]);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return edges - nodes + comps;
}

/// Extended dim-1 points (top, bottom) as a sorted multiset, recovered from the
/// rank of H1(G_{<=x}) -> H1(G, G_{>=y}), which on a graph equals
/// z(G_{<=x}) - z(G_{<=x} and G_{>=y}) for the cycle rank z.
inline std::vector<std::pair<double, double>> extended_loops_by_rank(const ReebGraph& g) {
    std::vector<double> v;
    for (const auto& n : g.nodes) v.push_back(n.value);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    const auto k = static_cast<long long>(v.size());
    const double inf = std::numeric_limits<double>::infinity();
    // R(i, j) = #{points with top <= v_i and bottom <= v_j}; index -1 means "none".
    auto R = [&](long long i, long long j) -> long long {
        if (i < 0 || j < 0) return 0;
        const double x = v[i];
        const double y = j + 1 < k ? v[j + 1] : inf;
        return cycle_rank(g, -inf, x) - cycle_rank(g, y, x);
    };
    std::vector<std::pair<double, double>> out;
    for (long long i = 0; i < k; ++i) {
        for (long long j = 0; j < k; ++j) {
            const long long c = R(i, j) - R(i - 1, j) - R(i, j - 1) + R(i - 1, j - 1);
            for (long long r = 0; r < c; ++r) out.emplace_back(v[i], v[j]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Euler characteristic of the boundary surface of a 3-complex: triangles with
/// exactly one incident tetrahedron, plus their edges and vertices.
inline long long boundary_euler_characteristic(const SimplicialComplex& X) {
    std::map<std::array<VertexId, 3>, int> incidence;
    for (const auto& t : X.tetrahedra()) {
        for (int skip = 0; skip < 4; ++skip) {
            std::array<VertexId, 3> f{};
            int k = 0;
            for (int i = 0; i < 4; ++i) {
                if (i != skip) f[k++] = t[i];
            }
            ++incidence[f];
        }
    }
    std::set<std::array<VertexId, 2>> edges;
    std::set<VertexId> verts;
    long long faces = 0;
    for (const auto& [f, n] : incidence) {
        if (n != 1) continue;
        ++faces;
        edges.insert({f[0], f[1]});
        edges.insert({f[0], f[2]});
        edges.insert({f[1], f[2]});
        verts.insert(f.begin(), f.end());
    }
    return static_cast<long long>(verts.size()) - static_cast<long long>(edges.size()) + faces;
}

}  // namespace reebmm::oracle

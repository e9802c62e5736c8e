#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "reebmm/error.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm {

namespace {

struct Matcher {
    const ReebGraph& g;
    const ReebGraph& h;
    double tol;
    std::size_t n;
    std::vector<int> mult_g;  // n x n edge multiplicities
    std::vector<int> mult_h;
    std::vector<std::size_t> deg_g;
    std::vector<std::size_t> deg_h;
    std::vector<std::size_t> order;  // g nodes in assignment order
    std::vector<std::size_t> image;
    std::vector<bool> used;

    Matcher(const ReebGraph& g_, const ReebGraph& h_, double tol_)
        : g(g_), h(h_), tol(tol_), n(g_.num_nodes()), mult_g(n * n, 0), mult_h(n * n, 0),
          deg_g(g_.degrees()), deg_h(h_.degrees()), image(n, SIZE_MAX), used(n, false) {
        for (const auto& [a, b] : g.edges) {
            ++mult_g[a * n + b];
            ++mult_g[b * n + a];
        }
        for (const auto& [a, b] : h.edges) {
            ++mult_h[a * n + b];
            ++mult_h[b * n + a];
        }
        // Breadth-first from the lowest node of each component, so each new node
        // usually has an already assigned neighbour to prune against.
        std::vector<std::size_t> by_value(n);
        std::iota(by_value.begin(), by_value.end(), std::size_t{0});
        std::stable_sort(by_value.begin(), by_value.end(),
                         [&](std::size_t a, std::size_t b) { return g.value(a) < g.value(b); });
        std::vector<bool> queued(n, false);
        for (std::size_t seed : by_value) {
            if (queued[seed]) continue;
            queued[seed] = true;
            std::size_t k = order.size();
            order.push_back(seed);
            for (; k < order.size(); ++k) {
                const std::size_t x = order[k];
                for (std::size_t y : by_value) {
                    if (!queued[y] && mult_g[x * n + y] > 0) {
                        queued[y] = true;
                        order.push_back(y);
                    }
                }
            }
        }
    }

    bool compatible(std::size_t x, std::size_t y) const {
        if (deg_g[x] != deg_h[y]) return false;
        if (!(std::abs(g.value(x) - h.value(y)) <= tol)) return false;
        for (std::size_t k = 0; k < n; ++k) {
            if (image[k] != SIZE_MAX && mult_g[x * n + k] != mult_h[y * n + image[k]]) return false;
        }
        return true;
    }

    bool search(std::size_t depth) {
        if (depth == n) return true;
        const std::size_t x = order[depth];
        for (std::size_t y = 0; y < n; ++y) {
            if (used[y] || !compatible(x, y)) continue;
            image[x] = y;
            used[y] = true;
            if (search(depth + 1)) return true;
            image[x] = SIZE_MAX;
            used[y] = false;
        }
        return false;
    }
};

}  // namespace

bool is_isomorphic(const ReebGraph& g, const ReebGraph& h, double value_tol, std::size_t max_nodes) {
    if (g.num_nodes() > max_nodes || h.num_nodes() > max_nodes) {
        throw GuardError("is_isomorphic handles at most " + std::to_string(max_nodes) + " nodes");
    }
    if (g.num_nodes() != h.num_nodes() || g.num_edges() != h.num_edges()) return false;

    auto sorted_values = [](const ReebGraph& x) {
        std::vector<double> v;
        for (const auto& node : x.nodes) v.push_back(node.value);
        std::sort(v.begin(), v.end());
        return v;
    };
    if (std::isfinite(value_tol)) {
        const auto vg = sorted_values(g);
        const auto vh = sorted_values(h);
        // A value-respecting bijection exists only if the sorted values pair up.
        for (std::size_t i = 0; i < vg.size(); ++i) {
            if (!(std::abs(vg[i] - vh[i]) <= value_tol)) return false;
        }
    }
    auto dg = g.degrees();
    auto dh = h.degrees();
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    if (dg != dh) return false;

    Matcher matcher(g, h, value_tol);
    return matcher.search(0);
}

}  // namespace reebmm

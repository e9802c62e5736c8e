#include "transport.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace reebmm::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
// Residual amounts below this are treated as exhausted.
constexpr double kMassEps = 1e-15;
}  // namespace

double min_cost_transport(std::span<const double> supply, std::span<const double> demand,
                          std::span<const double> cost) {
    const std::size_t n = supply.size();
    const std::size_t m = demand.size();
    if (cost.size() != n * m) throw std::invalid_argument("cost matrix shape mismatch");
    if (n == 0 || m == 0) return 0.0;

    // Nodes: sources 0..n-1, sinks n..n+m-1. Forward arcs i->j are uncapacitated;
    // the reverse residual j->i has capacity flow(i, j).
    std::vector<double> flow(n * m, 0.0);
    std::vector<double> left_supply(supply.begin(), supply.end());
    std::vector<double> left_demand(demand.begin(), demand.end());
    std::vector<double> potential(n + m, 0.0);
    // Initial potentials: sinks get min incoming cost so reduced costs are >= 0.
    for (std::size_t j = 0; j < m; ++j) {
        double best = kInf;
        for (std::size_t i = 0; i < n; ++i) best = std::min(best, cost[i * m + j]);
        potential[n + j] = best;
    }

    std::vector<double> dist(n + m);
    std::vector<std::ptrdiff_t> parent(n + m);
    std::vector<char> done(n + m);

    const std::size_t max_rounds = 4 * (n + m) * (n + m) + 16;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        bool any_source = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (left_supply[i] > kMassEps) {
                dist[i] = 0.0;
                any_source = true;
            }
        }
        if (!any_source) break;

        // Dense Dijkstra on reduced costs.
        for (;;) {
            std::ptrdiff_t u = -1;
            for (std::size_t k = 0; k < n + m; ++k) {
                if (!done[k] && dist[k] < kInf && (u < 0 || dist[k] < dist[u])) u = static_cast<std::ptrdiff_t>(k);
            }
            if (u < 0) break;
            done[u] = 1;
            if (static_cast<std::size_t>(u) < n) {
                const std::size_t i = u;
                for (std::size_t j = 0; j < m; ++j) {
                    const double reduced = std::max(0.0, cost[i * m + j] + potential[i] - potential[n + j]);
                    if (dist[i] + reduced < dist[n + j]) {
                        dist[n + j] = dist[i] + reduced;
                        parent[n + j] = u;
                    }
                }
            } else {
                const std::size_t j = u - n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (flow[i * m + j] <= kMassEps) continue;
                    const double reduced = std::max(0.0, potential[n + j] - cost[i * m + j] - potential[i]);
                    if (dist[n + j] + reduced < dist[i]) {
                        dist[i] = dist[n + j] + reduced;
                        parent[i] = u;
                    }
                }
            }
        }

        std::ptrdiff_t sink = -1;
        for (std::size_t j = 0; j < m; ++j) {
            if (left_demand[j] > kMassEps && dist[n + j] < kInf && (sink < 0 || dist[n + j] < dist[sink])) {
                sink = static_cast<std::ptrdiff_t>(n + j);
            }
        }
        if (sink < 0) break;

        // Capping at the sink distance keeps every residual reduced cost nonnegative.
        for (std::size_t k = 0; k < n + m; ++k) potential[k] += std::min(dist[k], dist[sink]);

        double amount = left_demand[sink - n];
        std::ptrdiff_t v = sink;
        while (parent[v] >= 0) {
            const std::ptrdiff_t u = parent[v];
            if (static_cast<std::size_t>(u) >= n) amount = std::min(amount, flow[v * m + (u - n)]);
            v = u;
        }
        amount = std::min(amount, left_supply[v]);

        v = sink;
        while (parent[v] >= 0) {
            const std::ptrdiff_t u = parent[v];
            if (static_cast<std::size_t>(u) < n) flow[u * m + (v - n)] += amount;
            else flow[v * m + (u - n)] -= amount;
            v = u;
        }
        left_supply[v] -= amount;
        left_demand[sink - n] -= amount;
    }

    double total = 0.0;
    for (std::size_t k = 0; k < n * m; ++k) {
        if (flow[k] > 0.0) total += flow[k] * cost[k];
    }
    return total;
}

}  // namespace reebmm::detail

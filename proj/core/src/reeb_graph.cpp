#include "reebmm/reeb_graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "reebmm/error.hpp"
#include "reeb_internal.hpp"
#include "union_find.hpp"

namespace reebmm {

namespace detail {

std::vector<std::size_t> vertex_ranks(const ScalarField& f) {
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return f[a] < f[b] || (f[a] == f[b] && a < b);
    });
    std::vector<std::size_t> rank(f.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    return rank;
}

ReebGraph simplify(const RawReebGraph& raw) {
    const std::size_t n = raw.values.size();
    UnionFind plateaus(n);
    for (const auto& [a, b] : raw.arcs) {
        if (raw.values[a] == raw.values[b]) plateaus.unite(a, b);
    }

    std::vector<std::size_t> group(n, SIZE_MAX);
    std::vector<double> value;
    std::vector<VertexId> vertex;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = plateaus.find(i);
        if (group[root] == SIZE_MAX) {
            group[root] = value.size();
            value.push_back(raw.values[i]);
            vertex.push_back(raw.vertices[i]);
        } else {
            vertex[group[root]] = std::min(vertex[group[root]], raw.vertices[i]);
        }
        group[i] = group[root];
    }

    const std::size_t m = value.size();
    std::vector<std::array<std::size_t, 2>> edges;
    for (const auto& [a, b] : raw.arcs) {
        std::size_t u = group[a];
        std::size_t v = group[b];
        if (u == v) continue;
        if (value[u] > value[v]) std::swap(u, v);
        edges.push_back({u, v});
    }

    std::vector<std::vector<std::size_t>> incident(m);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        incident[edges[e][0]].push_back(e);
        incident[edges[e][1]].push_back(e);
    }
    std::vector<bool> edge_alive(edges.size(), true);
    std::vector<bool> node_alive(m, true);
    for (std::size_t x = 0; x < m; ++x) {
        if (incident[x].size() != 2) continue;
        std::size_t below = SIZE_MAX;
        std::size_t above = SIZE_MAX;
        for (std::size_t e : incident[x]) (edges[e][1] == x ? below : above) = e;
        if (below == SIZE_MAX || above == SIZE_MAX) continue;
        // Splice: the lower edge now runs to the far end of the upper one.
        const std::size_t top = edges[above][1];
        edges[below][1] = top;
        edge_alive[above] = false;
        std::replace(incident[top].begin(), incident[top].end(), above, below);
        incident[x].clear();
        node_alive[x] = false;
    }

    std::vector<std::size_t> order;
    for (std::size_t x = 0; x < m; ++x) {
        if (node_alive[x]) order.push_back(x);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return value[a] < value[b] || (value[a] == value[b] && vertex[a] < vertex[b]);
    });
    std::vector<std::size_t> renumber(m, SIZE_MAX);
    ReebGraph out;
    for (std::size_t x : order) {
        renumber[x] = out.nodes.size();
        out.nodes.push_back({value[x], vertex[x]});
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edge_alive[e]) out.edges.push_back({renumber[edges[e][0]], renumber[edges[e][1]]});
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

}  // namespace detail

std::vector<std::size_t> ReebGraph::degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

bool is_valid_reeb_graph(const ReebGraph& g, std::string* why) {
    auto fail = [&](std::string reason) {
        if (why) *why = std::move(reason);
        return false;
    };
    for (const auto& node : g.nodes) {
        if (!std::isfinite(node.value)) return fail("non-finite node value");
    }
    for (const auto& [a, b] : g.edges) {
        if (a >= g.nodes.size() || b >= g.nodes.size()) return fail("edge references a missing node");
        if (a == b) return fail("self-loop at node " + std::to_string(a));
        if (!(g.nodes[a].value < g.nodes[b].value)) {
            return fail("edge " + std::to_string(a) + "-" + std::to_string(b) + " is not strictly increasing");
        }
    }
    return true;
}

ReebGraph reeb_graph(const SimplicialComplex& complex, const ScalarField& f) {
    require_field_on(complex, f);
    const std::size_t n = complex.num_vertices();
    const auto rank = detail::vertex_ranks(f);
    std::vector<VertexId> by_rank(n);
    for (std::size_t v = 0; v < n; ++v) by_rank[rank[v]] = static_cast<VertexId>(v);

    const auto edges = complex.edges();
    const auto triangles = complex.triangles();
    // Endpoints of each edge as (lower-ranked, higher-ranked).
    std::vector<std::array<VertexId, 2>> ends(edges.size());
    std::vector<std::vector<std::size_t>> lower_star(n);
    std::vector<std::vector<std::size_t>> upper_star(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [a, b] = edges[e];
        if (rank[a] > rank[b]) std::swap(a, b);
        ends[e] = {a, b};
        upper_star[a].push_back(e);
        lower_star[b].push_back(e);
    }
    std::vector<std::vector<std::size_t>> edge_triangles(edges.size());
    std::vector<std::array<std::size_t, 3>> triangle_edges(triangles.size());
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        auto tri = triangles[t];
        std::sort(tri.begin(), tri.end(), [&](VertexId a, VertexId b) { return rank[a] < rank[b]; });
        // Edges lo-mid, lo-hi, mid-hi in rank order.
        const std::array<std::ptrdiff_t, 3> ids{complex.find_edge(tri[0], tri[1]), complex.find_edge(tri[0], tri[2]),
                                                complex.find_edge(tri[1], tri[2])};
        for (int k = 0; k < 3; ++k) {
            triangle_edges[t][k] = static_cast<std::size_t>(ids[k]);
            edge_triangles[static_cast<std::size_t>(ids[k])].push_back(t);
        }
    }

    detail::RawReebGraph raw;
    struct Arc {
        std::size_t start;
        std::vector<std::size_t> edges;
    };
    std::vector<Arc> arcs;
    std::vector<std::size_t> edge_arc(edges.size(), SIZE_MAX);
    std::vector<std::size_t> local(edges.size(), SIZE_MAX);
    detail::UnionFind uf;

    for (std::size_t i = 0; i < n; ++i) {
        const VertexId v = by_rank[i];
        const std::size_t node = raw.add_node(f[v], v);

        std::vector<std::size_t> ending;
        for (std::size_t e : lower_star[v]) ending.push_back(edge_arc[e]);
        std::sort(ending.begin(), ending.end());
        ending.erase(std::unique(ending.begin(), ending.end()), ending.end());

        std::vector<std::size_t> active;
        for (std::size_t a : ending) {
            raw.arcs.push_back({arcs[a].start, node});
            for (std::size_t e : arcs[a].edges) {
                if (ends[e][1] != v) active.push_back(e);
            }
            arcs[a].edges.clear();
            arcs[a].edges.shrink_to_fit();
        }
        for (std::size_t e : upper_star[v]) active.push_back(e);
        for (std::size_t e : lower_star[v]) edge_arc[e] = SIZE_MAX;
        if (active.empty()) continue;

        for (std::size_t k = 0; k < active.size(); ++k) local[active[k]] = k;
        uf.reset(active.size());
        for (std::size_t e : active) {
            for (std::size_t t : edge_triangles[e]) {
                const auto& te = triangle_edges[t];
                const std::size_t lo = rank[ends[te[0]][0]];
                const std::size_t mid = rank[ends[te[2]][0]];
                const std::size_t hi = rank[ends[te[1]][1]];
                if (!(lo <= i && i < hi)) continue;
                const std::size_t other = i < mid ? te[0] : te[2];
                assert(local[te[1]] != SIZE_MAX && local[other] != SIZE_MAX);
                uf.unite(local[te[1]], local[other]);
            }
        }

        std::map<std::size_t, std::size_t> component_arc;
        for (std::size_t e : active) {
            const std::size_t root = uf.find(local[e]);
            auto [it, inserted] = component_arc.try_emplace(root, arcs.size());
            if (inserted) arcs.push_back({node, {}});
            arcs[it->second].edges.push_back(e);
            edge_arc[e] = it->second;
        }
        for (std::size_t e : active) local[e] = SIZE_MAX;
    }
    return detail::simplify(raw);
}

std::size_t connected_components(const ReebGraph& g) {
    detail::UnionFind uf(g.nodes.size());
    std::size_t components = g.nodes.size();
    for (const auto& [a, b] : g.edges) {
        if (uf.unite(a, b)) --components;
    }
    return components;
}

std::size_t betti1(const ReebGraph& g) {
    return g.edges.size() + connected_components(g) - g.nodes.size();
}

nlohmann::json to_json(const ReebGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        nlohmann::json node{{"id", i}, {"value", g.nodes[i].value}};
        if (g.nodes[i].vertex) node["vertex"] = *g.nodes[i].vertex;
        nodes.push_back(std::move(node));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : g.edges) edges.push_back({a, b});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

ReebGraph reeb_graph_from_json(const nlohmann::json& doc) {
    ReebGraph g;
    try {
        const auto& nodes = doc.at("nodes");
        g.nodes.resize(nodes.size());
        std::vector<bool> seen(nodes.size(), false);
        for (const auto& node : nodes) {
            const auto id = node.at("id").get<std::size_t>();
            if (id >= nodes.size() || seen[id]) throw ParseError(0, "node ids must be a permutation of 0..n-1");
            seen[id] = true;
            g.nodes[id].value = node.at("value").get<double>();
            if (node.contains("vertex")) g.nodes[id].vertex = node.at("vertex").get<VertexId>();
        }
        for (const auto& edge : doc.at("edges")) {
            auto a = edge.at(0).get<std::size_t>();
            auto b = edge.at(1).get<std::size_t>();
            if (edge.size() != 2) throw ParseError(0, "edges must have two endpoints");
            if (a < g.nodes.size() && b < g.nodes.size() && g.nodes[a].value > g.nodes[b].value) std::swap(a, b);
            g.edges.push_back({a, b});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed Reeb graph JSON: ") + e.what());
    }
    std::string why;
    if (!is_valid_reeb_graph(g, &why)) throw ParseError(0, "invalid Reeb graph: " + why);
    return g;
}

std::string to_dot(const ReebGraph& g) {
    std::ostringstream out;
    out.precision(17);
    out << "digraph reeb {\n  rankdir=BT;\n  node [shape=circle];\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        out << "  n" << i << " [label=\"" << i << "\\n" << g.nodes[i].value << "\", value=" << g.nodes[i].value
            << "];\n";
    }
    std::map<double, std::vector<std::size_t>> ranks;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) ranks[g.nodes[i].value].push_back(i);
    for (const auto& [value, members] : ranks) {
        out << "  { rank=same;";
        for (std::size_t i : members) out << " n" << i << ";";
        out << " }\n";
    }
    for (const auto& [a, b] : g.edges) out << "  n" << a << " -> n" << b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace reebmm

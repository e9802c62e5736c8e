#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "reebmm/error.hpp"
#include "reebmm/reeb_graph.hpp"
#include "reeb_internal.hpp"
#include "union_find.hpp"

namespace reebmm {

namespace {

// Level-set pieces are tracked through "atoms": the swept vertex (index E) and
// the points where the level crosses an edge interior (index = edge id). Inside a
// simplex the level set is convex, so every atom it contains lies in one component.
struct Clipper {
    const SimplicialComplex& complex;
    const std::vector<std::size_t>& rank;
    std::vector<std::array<std::size_t, 2>> edge_span;  // (low rank, high rank)

    Clipper(const SimplicialComplex& c, const std::vector<std::size_t>& r) : complex(c), rank(r) {
        for (const auto& e : complex.edges()) {
            const auto a = rank[e[0]];
            const auto b = rank[e[1]];
            edge_span.push_back({std::min(a, b), std::max(a, b)});
        }
    }

    std::size_t edge_id(VertexId a, VertexId b) const {
        const auto id = complex.find_edge(a, b);
        if (id < 0) throw std::logic_error("complex is not closed");
        return static_cast<std::size_t>(id);
    }

    // Atoms of simplex `s` on the level through rank i (slab == false) or inside
    // the open slab (i, i+1) (slab == true).
    template <std::size_t K>
    void atoms_of(const std::array<VertexId, K>& s, std::size_t i, bool slab, std::vector<std::size_t>& out) const {
        out.clear();
        const std::size_t vertex_atom = complex.edges().size();
        for (std::size_t a = 0; a < K; ++a) {
            if (!slab && rank[s[a]] == i) out.push_back(vertex_atom);
            for (std::size_t b = a + 1; b < K; ++b) {
                const std::size_t e = edge_id(s[a], s[b]);
                const auto [lo, hi] = edge_span[e];
                const bool crosses = slab ? (lo <= i && i < hi) : (lo < i && i < hi);
                if (crosses) out.push_back(e);
            }
        }
    }
};

}  // namespace

ReebGraph slab_oracle(const SimplicialComplex& complex, const ScalarField& f, std::size_t max_simplices) {
    require_field_on(complex, f);
    if (complex.total_simplices() > max_simplices) {
        throw GuardError("slab_oracle handles at most " + std::to_string(max_simplices) + " simplices, got " +
                         std::to_string(complex.total_simplices()));
    }
    const std::size_t n = complex.num_vertices();
    const std::size_t num_edges = complex.edges().size();
    const auto rank = detail::vertex_ranks(f);
    std::vector<VertexId> by_rank(n);
    for (std::size_t v = 0; v < n; ++v) by_rank[rank[v]] = static_cast<VertexId>(v);
    const Clipper clip(complex, rank);
    const std::size_t vertex_atom = num_edges;

    std::vector<std::size_t> atoms;
    auto components = [&](std::size_t i, bool slab, detail::UnionFind& uf) {
        uf.reset(num_edges + 1);
        auto glue = [&](const auto& simplex) {
            clip.atoms_of(simplex, i, slab, atoms);
            for (std::size_t k = 1; k < atoms.size(); ++k) uf.unite(atoms[0], atoms[k]);
        };
        for (const auto& s : complex.edges()) glue(s);
        for (const auto& s : complex.triangles()) glue(s);
        for (const auto& s : complex.tetrahedra()) glue(s);
    };

    detail::RawReebGraph raw;
    // Level components of the previous and current vertex levels, as union-find
    // over atoms plus the node created for each root.
    detail::UnionFind level_uf[2];
    std::unordered_map<std::size_t, std::size_t> level_node[2];
    detail::UnionFind slab_uf;
    for (std::size_t i = 0; i < n; ++i) {
        auto& uf = level_uf[i % 2];
        auto& nodes = level_node[i % 2];
        components(i, false, uf);
        nodes.clear();
        const VertexId v = by_rank[i];
        auto add = [&](std::size_t atom) {
            const std::size_t root = uf.find(atom);
            if (!nodes.contains(root)) nodes[root] = raw.add_node(f[v], v);
        };
        add(vertex_atom);
        for (std::size_t e = 0; e < num_edges; ++e) {
            if (clip.edge_span[e][0] < i && i < clip.edge_span[e][1]) add(e);
        }
        if (i == 0) continue;

        // Glue the open slab (i-1, i) to the levels on either side.
        const std::size_t s = i - 1;
        auto& below_uf = level_uf[s % 2];
        const auto& below_nodes = level_node[s % 2];
        components(s, true, slab_uf);
        std::unordered_map<std::size_t, std::array<std::size_t, 2>> slab_arc;
        for (std::size_t e = 0; e < num_edges; ++e) {
            const auto [lo, hi] = clip.edge_span[e];
            if (!(lo <= s && s < hi)) continue;
            const std::size_t below = below_nodes.at(below_uf.find(lo == s ? vertex_atom : e));
            const std::size_t above = nodes.at(uf.find(hi == i ? vertex_atom : e));
            const std::array<std::size_t, 2> ends{below, above};
            auto [it, inserted] = slab_arc.try_emplace(slab_uf.find(e), ends);
            if (!inserted && it->second != ends) {
                throw std::logic_error("slab component meets two level components");
            }
        }
        std::vector<std::array<std::size_t, 2>> found;
        for (const auto& [root, ends] : slab_arc) found.push_back(ends);
        std::sort(found.begin(), found.end());
        raw.arcs.insert(raw.arcs.end(), found.begin(), found.end());
    }
    return detail::simplify(raw);
}

}  // namespace reebmm

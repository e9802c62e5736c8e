#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reebmm/complex.hpp"

namespace reebmm {

struct ReebNode {
    double value = 0.0;
    /// Base vertex the node was created from, when known.
    std::optional<VertexId> vertex;
};

/// Finite multigraph with a function value per node. Node ids are indices into
/// `nodes`; each edge is stored as {low node, high node} with value(low) < value(high).
/// Parallel edges are allowed, self-loops are not.
struct ReebGraph {
    std::vector<ReebNode> nodes;
    std::vector<std::array<std::size_t, 2>> edges;

    std::size_t num_nodes() const noexcept { return nodes.size(); }
    std::size_t num_edges() const noexcept { return edges.size(); }
    std::vector<std::size_t> degrees() const;
    double value(std::size_t node) const { return nodes[node].value; }
};

/// Checks edge orientation, id range and the no-self-loop rule. On failure the
/// reason goes to `why` if given.
bool is_valid_reeb_graph(const ReebGraph& g, std::string* why = nullptr);

/// Reeb graph of a PL field on a complex of dimension <= 3, by a sweep over vertices
/// in (value, id) order. Equal-valued vertices connected through a flat region
/// collapse to one node; degree-2 monotone nodes are removed.
ReebGraph reeb_graph(const SimplicialComplex& complex, const ScalarField& f);

inline constexpr std::size_t kSlabOracleMaxSimplices = 10'000;

/// Brute-force Reeb graph: level-set components at every vertex level and in every
/// open slab between consecutive levels, found by clipping each simplex, then glued.
/// Throws GuardError above `max_simplices`.
ReebGraph slab_oracle(const SimplicialComplex& complex, const ScalarField& f,
                      std::size_t max_simplices = kSlabOracleMaxSimplices);

inline constexpr std::size_t kIsomorphismMaxNodes = 64;

/// True iff a bijection of nodes matches values within `value_tol` and preserves
/// edge multiplicities. Throws GuardError when either graph exceeds `max_nodes`.
bool is_isomorphic(const ReebGraph& g, const ReebGraph& h, double value_tol,
                   std::size_t max_nodes = kIsomorphismMaxNodes);

/// Isomorphism of the underlying multigraphs, ignoring values.
inline bool is_isomorphic_structure(const ReebGraph& g, const ReebGraph& h,
                                    std::size_t max_nodes = kIsomorphismMaxNodes) {
    return is_isomorphic(g, h, std::numeric_limits<double>::infinity(), max_nodes);
}

/// |E| - |V| + number of connected components.
std::size_t betti1(const ReebGraph& g);
std::size_t connected_components(const ReebGraph& g);

/// {"nodes":[{"id","value"[,"vertex"]}],"edges":[[u,v],...]}
nlohmann::json to_json(const ReebGraph& g);
/// Throws ParseError on a malformed or invalid graph.
ReebGraph reeb_graph_from_json(const nlohmann::json& doc);
/// Graphviz digraph, bottom to top, nodes of equal value on one rank.
std::string to_dot(const ReebGraph& g);

}  // namespace reebmm

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "reebmm/complex.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm::detail {

/// Graph on simulation-of-simplicity levels, before plateau collapse.
struct RawReebGraph {
    std::vector<double> values;
    std::vector<VertexId> vertices;
    std::vector<std::array<std::size_t, 2>> arcs;

    std::size_t add_node(double value, VertexId vertex) {
        values.push_back(value);
        vertices.push_back(vertex);
        return values.size() - 1;
    }
};

/// Contracts arcs whose ends share a value, drops the self-loops this creates,
/// splices out nodes with exactly one lower and one upper edge, and renumbers
/// nodes by (value, vertex).
ReebGraph simplify(const RawReebGraph& raw);

/// Vertex ranks in (value, id) order.
std::vector<std::size_t> vertex_ranks(const ScalarField& f);

}  // namespace reebmm::detail

#include "reebmm/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "reebmm/error.hpp"
#include "union_find.hpp"

namespace reebmm {

std::vector<DiagramPoint> PersistenceDiagram::select(int dim, PointClass cls) const {
    std::vector<DiagramPoint> out;
    for (const auto& p : points) {
        if (p.dim == dim && p.cls == cls) out.push_back(p);
    }
    return out;
}

std::string to_string(PointClass cls) {
    switch (cls) {
        case PointClass::ordinary: return "ordinary";
        case PointClass::relative: return "relative";
        case PointClass::extended: return "extended";
    }
    return "ordinary";
}

PointClass point_class_from_string(const std::string& name) {
    if (name == "ordinary") return PointClass::ordinary;
    if (name == "relative") return PointClass::relative;
    if (name == "extended") return PointClass::extended;
    throw std::invalid_argument("unknown diagram class '" + name + "'");
}

namespace {

// Merge-tree pairing. `order` lists nodes in sweep order; a node joins the
// components of its already-swept neighbours and the younger one dies there.
void sweep_pairs(const ReebGraph& g, const std::vector<std::size_t>& order, int dim, PointClass cls,
                 PersistenceDiagram& out, std::vector<std::size_t>* oldest) {
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> position(n);
    for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
    std::vector<std::vector<std::size_t>> neighbours(n);
    for (const auto& [a, b] : g.edges) {
        neighbours[a].push_back(b);
        neighbours[b].push_back(a);
    }
    detail::UnionFind uf(n);
    std::vector<std::size_t> birth(n);  // oldest node of each root's component
    std::iota(birth.begin(), birth.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t x = order[k];
        for (std::size_t y : neighbours[x]) {
            if (position[y] > k) continue;
            const std::size_t rx = uf.find(x);
            const std::size_t ry = uf.find(y);
            if (rx == ry) continue;
            std::size_t keep = birth[rx];
            std::size_t die = birth[ry];
            if (position[die] < position[keep]) std::swap(keep, die);
            if (g.value(die) != g.value(x)) out.points.push_back({g.value(die), g.value(x), dim, cls, die, x});
            uf.unite(rx, ry);
            birth[uf.find(x)] = keep;
        }
    }
    if (oldest) {
        oldest->assign(n, 0);
        for (std::size_t x = 0; x < n; ++x) (*oldest)[x] = birth[uf.find(x)];
    }
}

// Loop pairs from the Z/2 reduction of the coned filtration: the graph by lower
// stars, then the cone point, then cone simplices by upper stars from the top.
void loop_pairs(const ReebGraph& g, PersistenceDiagram& out) {
    const std::size_t n = g.num_nodes();
    const std::size_t m = g.num_edges();
    if (m == 0) return;
    // Nodes are already sorted by value; index order breaks ties.
    std::vector<std::vector<std::size_t>> upper_end(n);
    std::vector<std::vector<std::size_t>> lower_end(n);
    for (std::size_t e = 0; e < m; ++e) {
        upper_end[g.edges[e][1]].push_back(e);
        lower_end[g.edges[e][0]].push_back(e);
    }

    enum class Kind { node, edge, apex, cone_node, cone_edge };
    struct Cell {
        Kind kind;
        std::size_t id;
    };
    std::vector<Cell> cells;
    std::vector<std::size_t> node_index(n);
    std::vector<std::size_t> edge_index(m);
    std::vector<std::size_t> cone_node_index(n);
    for (std::size_t x = 0; x < n; ++x) {
        node_index[x] = cells.size();
        cells.push_back({Kind::node, x});
        for (std::size_t e : upper_end[x]) {
            edge_index[e] = cells.size();
            cells.push_back({Kind::edge, e});
        }
    }
    const std::size_t apex = cells.size();
    cells.push_back({Kind::apex, 0});
    for (std::size_t k = n; k-- > 0;) {
        cone_node_index[k] = cells.size();
        cells.push_back({Kind::cone_node, k});
        for (std::size_t e : lower_end[k]) cells.push_back({Kind::cone_edge, e});
    }

    std::vector<std::vector<std::size_t>> columns(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto [kind, id] = cells[c];
        auto& col = columns[c];
        switch (kind) {
            case Kind::node:
            case Kind::apex: break;
            case Kind::edge: col = {node_index[g.edges[id][0]], node_index[g.edges[id][1]]}; break;
            case Kind::cone_node: col = {node_index[id], apex}; break;
            case Kind::cone_edge:
                col = {edge_index[id], cone_node_index[g.edges[id][0]], cone_node_index[g.edges[id][1]]};
                break;
        }
        std::sort(col.begin(), col.end());
    }

    std::vector<std::size_t> pivot_owner(cells.size(), SIZE_MAX);
    std::vector<std::size_t> merged;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& col = columns[c];
        while (!col.empty() && pivot_owner[col.back()] != SIZE_MAX) {
            const auto& other = columns[pivot_owner[col.back()]];
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(merged));
            col.swap(merged);
        }
        if (col.empty()) continue;
        const std::size_t low = col.back();
        pivot_owner[low] = c;
        if (cells[low].kind == Kind::edge && cells[c].kind == Kind::cone_edge) {
            const std::size_t top = g.edges[cells[low].id][1];
            const std::size_t bottom = g.edges[cells[c].id][0];
            out.points.push_back({g.value(top), g.value(bottom), 1, PointClass::extended, top, bottom});
        }
    }
}

}  // namespace

PersistenceDiagram extended_persistence(const ReebGraph& g) {
    PersistenceDiagram out;
    const std::size_t n = g.num_nodes();
    std::vector<std::size_t> up(n);
    std::iota(up.begin(), up.end(), std::size_t{0});
    std::stable_sort(up.begin(), up.end(), [&](std::size_t a, std::size_t b) { return g.value(a) < g.value(b); });
    std::vector<std::size_t> down(up.rbegin(), up.rend());

    std::vector<std::size_t> lowest;
    std::vector<std::size_t> highest;
    sweep_pairs(g, up, 0, PointClass::ordinary, out, &lowest);
    sweep_pairs(g, down, 1, PointClass::relative, out, &highest);

    std::vector<bool> done(n, false);
    for (std::size_t x : up) {
        if (done[lowest[x]]) continue;
        done[lowest[x]] = true;
        out.points.push_back({g.value(lowest[x]), g.value(highest[x]), 0, PointClass::extended, lowest[x], highest[x]});
    }
    loop_pairs(g, out);
    return out;
}

namespace {

double linf(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diagonal_charge(const DiagramPoint& p) { return std::abs(p.birth - p.death) / 2.0; }

// Perfect matching of A + diag(B) against B + diag(A) using only pairs of cost <= delta.
bool matchable(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b, double delta) {
    const std::size_t p = a.size();
    const std::size_t q = b.size();
    const std::size_t size = p + q;
    std::vector<std::vector<std::size_t>> adj(size);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (linf(a[i], b[j]) <= delta) adj[i].push_back(j);
        }
        if (diagonal_charge(a[i]) <= delta) adj[i].push_back(q + i);
    }
    for (std::size_t j = 0; j < q; ++j) {
        if (diagonal_charge(b[j]) <= delta) adj[p + j].push_back(j);
        for (std::size_t i = 0; i < p; ++i) adj[p + j].push_back(q + i);
    }

    std::vector<std::size_t> match_right(size, SIZE_MAX);
    std::vector<char> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
        for (std::size_t v : adj[u]) {
            if (visited[v]) continue;
            visited[v] = 1;
            if (match_right[v] == SIZE_MAX || augment(match_right[v])) {
                match_right[v] = u;
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < size; ++u) {
        visited.assign(size, 0);
        if (!augment(u)) return false;
    }
    return true;
}

double group_bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b) {
    std::vector<double> candidates{0.0};
    for (const auto& x : a) {
        candidates.push_back(diagonal_charge(x));
        for (const auto& y : b) candidates.push_back(linf(x, y));
    }
    for (const auto& y : b) candidates.push_back(diagonal_charge(y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // Matching everything to the diagonal always works at the largest charge.
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (matchable(a, b, candidates[mid])) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

}  // namespace

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, std::size_t max_points) {
    if (a.size() > max_points || b.size() > max_points) {
        throw GuardError("bottleneck handles at most " + std::to_string(max_points) + " points per diagram");
    }
    std::map<std::pair<int, PointClass>, std::array<std::vector<DiagramPoint>, 2>> groups;
    for (const auto& p : a.points) groups[{p.dim, p.cls}][0].push_back(p);
    for (const auto& p : b.points) groups[{p.dim, p.cls}][1].push_back(p);
    double result = 0.0;
    for (const auto& [key, sides] : groups) result = std::max(result, group_bottleneck(sides[0], sides[1]));
    return result;
}

double interleaving_lower_bound(const ReebGraph& g, const ReebGraph& h, double c_proxy) {
    if (!(c_proxy > 0.0) || !std::isfinite(c_proxy)) throw std::invalid_argument("proxy constant must be positive");
    return bottleneck(extended_persistence(g), extended_persistence(h)) / c_proxy;
}

nlohmann::json to_json(const PersistenceDiagram& diagram) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : diagram.points) {
        points.push_back({{"birth", p.birth}, {"death", p.death}, {"dim", p.dim}, {"class", to_string(p.cls)}});
    }
    return {{"points", std::move(points)}};
}

PersistenceDiagram diagram_from_json(const nlohmann::json& doc) {
    PersistenceDiagram out;
    try {
        for (const auto& p : doc.at("points")) {
            out.points.push_back({p.at("birth").get<double>(), p.at("death").get<double>(), p.at("dim").get<int>(),
                                  point_class_from_string(p.at("class").get<std::string>())});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("malformed diagram JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, e.what());
    }
    return out;
}

}  // namespace reebmm

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reebmm/reeb_graph.hpp"

namespace reebmm {

/// ordinary: up-sweep dim-0 pairs, birth < death.
/// relative: down-sweep pairs, stored as dim 1 with birth (a maximum) > death (a saddle).
/// extended: dim 0 (component min, component max) and dim 1 (loop top, loop bottom).
enum class PointClass { ordinary, relative, extended };

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    int dim = 0;
    PointClass cls = PointClass::ordinary;
    /// Graph nodes realizing birth and death, when known.
    std::size_t birth_node = SIZE_MAX;
    std::size_t death_node = SIZE_MAX;
};

struct PersistenceDiagram {
    std::vector<DiagramPoint> points;

    std::size_t size() const noexcept { return points.size(); }
    /// Points of one dimension and class.
    std::vector<DiagramPoint> select(int dim, PointClass cls) const;
};

std::string to_string(PointClass cls);
PointClass point_class_from_string(const std::string& name);

PersistenceDiagram extended_persistence(const ReebGraph& g);

inline constexpr std::size_t kBottleneckMaxPoints = 128;

/// Bottleneck distance. Points are matched only within the same (dim, class);
/// a point left unmatched costs half its |birth - death|. Throws GuardError when
/// either diagram has more than `max_points` points.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b,
                  std::size_t max_points = kBottleneckMaxPoints);

inline constexpr double kDefaultProxyConstant = 5.0;

/// bottleneck(EP(G), EP(H)) / c_proxy, a lower bound for the interleaving distance.
double interleaving_lower_bound(const ReebGraph& g, const ReebGraph& h, double c_proxy = kDefaultProxyConstant);

/// {"points":[{"birth","death","dim","class"}]}
nlohmann::json to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const nlohmann::json& doc);

}  // namespace reebmm

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "reebmm/complex.hpp"
#include "reebmm/measure.hpp"

namespace reebmm {

/// Cycle of n vertices at (sin a, 1 - cos a), a = 2 pi k / n: the height ranges over [0, 2].
SimplicialComplex circle_mesh(std::size_t n = 16);

/// Upright torus (axis along z, y vertical) on an n x n grid, 2 n^2 triangles.
/// Grid angles are offset by a fraction of a cell so no two vertices share a height.
SimplicialComplex torus_mesh(std::size_t n = 16, double major = 2.0, double minor = 1.0);

/// Planar curve complex: an outer circle of diameter 1 holding loop alpha (diameter
/// 0.45, lower left, bridged down to the outer circle) and loop beta (diameter 0.3,
/// upper right, bridged up to it).
SimplicialComplex fig4_mesh();

/// Measure on the fig4 plane: a broad cloud around alpha carrying most of the mass
/// and a tight ring of points on beta carrying the rest.
EmpiricalMeasure fig4_measure();

/// Height range [low, high] of a loop of the fig4 mesh.
struct LoopRange {
    std::string name;
    double low;
    double high;
};
/// outer, alpha, beta.
std::array<LoopRange, 3> fig4_loops();

/// For each vertex, the index in fig4_loops() of the circle it lies on, or -1
/// (bridge vertices). Decided from coordinates, so it also works for a loaded copy.
std::vector<int> fig4_vertex_loops(const SimplicialComplex& complex);

/// Second coordinate of every vertex (the first one for 1-d coordinates).
ScalarField height_field(const SimplicialComplex& complex);

/// Names accepted by fixture_mesh.
std::vector<std::string> fixture_names();
/// circle, torus or fig4; throws std::invalid_argument otherwise.
SimplicialComplex fixture_mesh(const std::string& name);

}  // namespace reebmm

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace reebmm {

using VertexId = std::uint32_t;
using Edge = std::array<VertexId, 2>;
using Triangle = std::array<VertexId, 3>;
using Tetrahedron = std::array<VertexId, 4>;

/// Finite simplicial complex of dimension <= 3 with vertex coordinates in R^k, k <= 3.
///
/// Vertex ids are the contiguous indices 0..n-1. Every simplex is stored with its
/// vertex tuple sorted ascending, each dimension's list is sorted and duplicate
/// free, and the complex is closed under taking faces. Instances are immutable;
/// build them with ComplexBuilder.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    std::size_t num_vertices() const noexcept { return num_vertices_; }
    int coord_dim() const noexcept { return coord_dim_; }
    std::span<const double> coords(VertexId v) const {
        return {coords_.data() + static_cast<std::size_t>(v) * coord_dim_,
                static_cast<std::size_t>(coord_dim_)};
    }
    std::span<const double> all_coords() const noexcept { return coords_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Triangle> triangles() const noexcept { return triangles_; }
    std::span<const Tetrahedron> tetrahedra() const noexcept { return tets_; }

    /// Number of simplices of dimension `dim` (0..3).
    std::size_t count(int dim) const;
    std::size_t total_simplices() const;
    /// Highest dimension with a simplex; -1 for the empty complex.
    int dimension() const noexcept;

    /// Index of edge {a, b} in edges(), or -1.
    std::ptrdiff_t find_edge(VertexId a, VertexId b) const;

    /// Largest Euclidean distance between two vertices.
    double diameter() const;

    /// Euler characteristic V - E + F - T.
    long long euler_characteristic() const;

private:
    friend class ComplexBuilder;

    std::size_t num_vertices_ = 0;
    int coord_dim_ = 0;
    std::vector<double> coords_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<Tetrahedron> tets_;
};

/// Accumulates vertices and simplices; build() sorts, deduplicates and closes.
class ComplexBuilder {
public:
    explicit ComplexBuilder(int coord_dim);

    VertexId add_vertex(std::span<const double> coords);
    VertexId add_vertex(std::initializer_list<double> coords) {
        return add_vertex(std::span<const double>(coords.begin(), coords.size()));
    }
    /// Adds a simplex given by 1..4 distinct vertex ids, in any order.
    void add_simplex(std::span<const VertexId> vertices);
    void add_simplex(std::initializer_list<VertexId> vertices) {
        add_simplex(std::span<const VertexId>(vertices.begin(), vertices.size()));
    }

    std::size_t num_vertices() const noexcept { return coords_.size() / coord_dim_; }

    /// Throws std::invalid_argument on unknown or repeated vertex ids.
    SimplicialComplex build() const;

private:
    int coord_dim_;
    std::vector<double> coords_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<Tetrahedron> tets_;
};

/// Checks the closure, id-range, sortedness and uniqueness invariants.
bool is_valid_complex(const SimplicialComplex& complex);

/// One finite real per vertex, linearly interpolated on simplices.
class ScalarField {
public:
    ScalarField() = default;
    /// Throws std::invalid_argument if any value is not finite.
    explicit ScalarField(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t v) const { return values_[v]; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const;
    double max() const;

private:
    std::vector<double> values_;
};

/// One finite R^d tuple per vertex (d >= 1), stored row-major.
class VectorField {
public:
    VectorField() = default;
    VectorField(int dim, std::vector<double> values);
    static VectorField from_scalar(const ScalarField& f);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    std::span<const double> operator[](std::size_t v) const {
        return {values_.data() + v * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> values() const noexcept { return values_; }
    ScalarField component(int i) const;

private:
    int dim_ = 0;
    std::vector<double> values_;
};

/// Throws std::invalid_argument unless the field has one value per vertex.
void require_field_on(const SimplicialComplex& complex, const ScalarField& f);
void require_field_on(const SimplicialComplex& complex, const VectorField& f);

/// Position of a thickened vertex: base vertex x and vertical offset t.
struct ColumnPoint {
    VertexId base;
    double offset;
};

/// Triangulated region {(x, t) : |t| <= r(x)} over a base complex, carrying f(x) + t.
struct ThickenedComplex {
    SimplicialComplex complex;
    /// Indexed by thickened vertex id.
    std::vector<ColumnPoint> columns;
    ScalarField field;
    /// Half-width r(x) per base vertex.
    std::vector<double> half_width;
    /// sup_x r(x).
    double max_half_width = 0.0;
    int layers = 3;

    /// Thickened vertex id of base vertex `base` at layer `layer` (0 = bottom).
    VertexId vertex_at(VertexId base, int layer) const {
        return static_cast<VertexId>(base * static_cast<VertexId>(layers) + static_cast<VertexId>(layer));
    }
};

struct ThickenOptions {
    /// Layers per vertex column, odd and >= 3; the middle layer is t = 0.
    int layers = 3;
};

/// Triangulates X x [-eps, eps] with field f(x) + t.
ThickenedComplex thicken_global(const SimplicialComplex& base, const ScalarField& f, double eps,
                                const ThickenOptions& options = {});

/// Triangulates {(x, t) : |t| <= r(x)} with field f(x) + t; r must be positive.
ThickenedComplex thicken_local(const SimplicialComplex& base, const ScalarField& f,
                               const ScalarField& r, const ThickenOptions& options = {});

}  // namespace reebmm

#include "reebmm/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace reebmm {

namespace {

template <std::size_t N>
void sort_unique(std::vector<std::array<VertexId, N>>& simplices) {
    std::sort(simplices.begin(), simplices.end());
    simplices.erase(std::unique(simplices.begin(), simplices.end()), simplices.end());
}

template <std::size_t N>
bool contains(const std::vector<std::array<VertexId, N>>& sorted, const std::array<VertexId, N>& s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
}

template <std::size_t N>
bool strictly_sorted(const std::array<VertexId, N>& s) {
    for (std::size_t i = 1; i < N; ++i) {
        if (s[i - 1] >= s[i]) return false;
    }
    return true;
}

}  // namespace

std::size_t SimplicialComplex::count(int dim) const {
    switch (dim) {
        case 0: return num_vertices_;
        case 1: return edges_.size();
        case 2: return triangles_.size();
        case 3: return tets_.size();
        default: return 0;
    }
}

std::size_t SimplicialComplex::total_simplices() const {
    return num_vertices_ + edges_.size() + triangles_.size() + tets_.size();
}

int SimplicialComplex::dimension() const noexcept {
    if (!tets_.empty()) return 3;
    if (!triangles_.empty()) return 2;
    if (!edges_.empty()) return 1;
    return num_vertices_ > 0 ? 0 : -1;
}

std::ptrdiff_t SimplicialComplex::find_edge(VertexId a, VertexId b) const {
    const Edge e = a < b ? Edge{a, b} : Edge{b, a};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return -1;
    return it - edges_.begin();
}

double SimplicialComplex::diameter() const {
    double best = 0.0;
    for (std::size_t a = 0; a < num_vertices_; ++a) {
        auto pa = coords(static_cast<VertexId>(a));
        for (std::size_t b = a + 1; b < num_vertices_; ++b) {
            auto pb = coords(static_cast<VertexId>(b));
            double d2 = 0.0;
            for (int k = 0; k < coord_dim_; ++k) d2 += (pa[k] - pb[k]) * (pa[k] - pb[k]);
            best = std::max(best, d2);
        }
    }
    return std::sqrt(best);
}

long long SimplicialComplex::euler_characteristic() const {
    return static_cast<long long>(num_vertices_) - static_cast<long long>(edges_.size()) +
           static_cast<long long>(triangles_.size()) - static_cast<long long>(tets_.size());
}

ComplexBuilder::ComplexBuilder(int coord_dim) : coord_dim_(coord_dim) {
    if (coord_dim < 1 || coord_dim > 4) {
        throw std::invalid_argument("coordinate dimension must be in 1..4");
    }
}

VertexId ComplexBuilder::add_vertex(std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != coord_dim_) {
        throw std::invalid_argument("vertex has " + std::to_string(coords.size()) +
                                    " coordinates, expected " + std::to_string(coord_dim_));
    }
    for (double c : coords) {
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite vertex coordinate");
    }
    const auto id = static_cast<VertexId>(num_vertices());
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    return id;
}

void ComplexBuilder::add_simplex(std::span<const VertexId> vertices) {
    std::vector<VertexId> s(vertices.begin(), vertices.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
        throw std::invalid_argument("simplex repeats a vertex");
    }
    for (VertexId v : s) {
        if (v >= num_vertices()) {
            throw std::invalid_argument("simplex references unknown vertex " + std::to_string(v));
        }
    }
    switch (s.size()) {
        case 1: break;
        case 2: edges_.push_back({s[0], s[1]}); break;
        case 3: triangles_.push_back({s[0], s[1], s[2]}); break;
        case 4: tets_.push_back({s[0], s[1], s[2], s[3]}); break;
        default: throw std::invalid_argument("simplices must have 1 to 4 vertices");
    }
}

SimplicialComplex ComplexBuilder::build() const {
    SimplicialComplex out;
    out.coord_dim_ = coord_dim_;
    out.num_vertices_ = num_vertices();
    out.coords_ = coords_;
    out.tets_ = tets_;
    out.triangles_ = triangles_;
    out.edges_ = edges_;

    sort_unique(out.tets_);
    for (const auto& t : out.tets_) {
        out.triangles_.push_back({t[0], t[1], t[2]});
        out.triangles_.push_back({t[0], t[1], t[3]});
        out.triangles_.push_back({t[0], t[2], t[3]});
        out.triangles_.push_back({t[1], t[2], t[3]});
    }
    sort_unique(out.triangles_);
    for (const auto& t : out.triangles_) {
        out.edges_.push_back({t[0], t[1]});
        out.edges_.push_back({t[0], t[2]});
        out.edges_.push_back({t[1], t[2]});
    }
    sort_unique(out.edges_);
    return out;
}

bool is_valid_complex(const SimplicialComplex& complex) {
    const auto n = complex.num_vertices();
    if (complex.all_coords().size() != n * static_cast<std::size_t>(complex.coord_dim())) return false;

    const std::vector<Edge> edges(complex.edges().begin(), complex.edges().end());
    const std::vector<Triangle> tris(complex.triangles().begin(), complex.triangles().end());
    const std::vector<Tetrahedron> tets(complex.tetrahedra().begin(), complex.tetrahedra().end());

    auto ordered_unique = [](const auto& list) {
        return std::adjacent_find(list.begin(), list.end(),
                                  [](const auto& a, const auto& b) { return !(a < b); }) == list.end();
    };
    if (!ordered_unique(edges) || !ordered_unique(tris) || !ordered_unique(tets)) return false;

    for (const auto& e : edges) {
        if (!strictly_sorted(e) || e[1] >= n) return false;
    }
    for (const auto& t : tris) {
        if (!strictly_sorted(t) || t[2] >= n) return false;
        if (!contains(edges, Edge{t[0], t[1]}) || !contains(edges, Edge{t[0], t[2]}) ||
            !contains(edges, Edge{t[1], t[2]})) {
            return false;
        }
    }
    for (const auto& t : tets) {
        if (!strictly_sorted(t) || t[3] >= n) return false;
        if (!contains(tris, Triangle{t[0], t[1], t[2]}) || !contains(tris, Triangle{t[0], t[1], t[3]}) ||
            !contains(tris, Triangle{t[0], t[2], t[3]}) || !contains(tris, Triangle{t[1], t[2], t[3]})) {
            return false;
        }
    }
    return true;
}

ScalarField::ScalarField(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("scalar field contains a non-finite value");
    }
}

double ScalarField::min() const {
    if (values_.empty()) throw std::logic_error("min of empty field");
    return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max() const {
    if (values_.empty()) throw std::logic_error("max of empty field");
    return *std::max_element(values_.begin(), values_.end());
}

VectorField::VectorField(int dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
    if (dim < 1) throw std::invalid_argument("vector field dimension must be >= 1");
    if (values_.size() % static_cast<std::size_t>(dim) != 0) {
        throw std::invalid_argument("vector field values are not a multiple of its dimension");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("vector field contains a non-finite value");
    }
}

VectorField VectorField::from_scalar(const ScalarField& f) {
    return VectorField(1, std::vector<double>(f.values().begin(), f.values().end()));
}

ScalarField VectorField::component(int i) const {
    if (i < 0 || i >= dim_) throw std::out_of_range("vector field component out of range");
    std::vector<double> out(size());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = values_[v * dim_ + i];
    return ScalarField(std::move(out));
}

void require_field_on(const SimplicialComplex& complex, const ScalarField& f) {
    if (f.size() != complex.num_vertices()) {
        throw std::invalid_argument("field has " + std::to_string(f.size()) + " values for " +
                                    std::to_string(complex.num_vertices()) + " vertices");
    }
}

void require_field_on(const SimplicialComplex& complex, const VectorField& f) {
    if (f.size() != complex.num_vertices()) {
        throw std::invalid_argument("field has " + std::to_string(f.size()) + " tuples for " +
                                    std::to_string(complex.num_vertices()) + " vertices");
    }
}

namespace {

// Staircase split of (simplex x [layer, layer+1]): with bottom copies a_i and top
// copies b_i of the sorted vertices v_0 < ... < v_k, emit [a_0..a_i, b_i..b_k].
template <std::size_t N>
void add_prisms(ComplexBuilder& builder, const std::array<VertexId, N>& simplex, int layers) {
    std::array<VertexId, N + 1> cell{};
    for (int layer = 0; layer + 1 < layers; ++layer) {
        for (std::size_t i = 0; i < N; ++i) {
            std::size_t k = 0;
            for (std::size_t j = 0; j <= i; ++j) cell[k++] = simplex[j] * layers + layer;
            for (std::size_t j = i; j < N; ++j) cell[k++] = simplex[j] * layers + layer + 1;
            builder.add_simplex(cell);
        }
    }
}

double layer_offset(double half_width, int layer, int layers) {
    const int mid = (layers - 1) / 2;
    if (layer == mid) return 0.0;
    return half_width * (2.0 * layer / (layers - 1) - 1.0);
}

}  // namespace

ThickenedComplex thicken_local(const SimplicialComplex& base, const ScalarField& f, const ScalarField& r,
                               const ThickenOptions& options) {
    require_field_on(base, f);
    require_field_on(base, r);
    if (options.layers < 3 || options.layers % 2 == 0) {
        throw std::invalid_argument("thickening needs an odd layer count >= 3");
    }
    if (base.dimension() > 2) {
        throw std::invalid_argument("thickening is limited to base complexes of dimension <= 2");
    }
    for (std::size_t v = 0; v < r.size(); ++v) {
        if (!(r[v] > 0.0)) {
            throw std::invalid_argument("smoothing half-width must be positive at vertex " + std::to_string(v));
        }
    }

    const int layers = options.layers;
    const std::size_t n = base.num_vertices();
    ComplexBuilder builder(base.coord_dim() + 1);

    ThickenedComplex out;
    out.layers = layers;
    out.half_width.assign(r.values().begin(), r.values().end());
    out.columns.reserve(n * layers);
    std::vector<double> values;
    values.reserve(n * layers);
    std::vector<double> point(base.coord_dim() + 1);

    for (std::size_t v = 0; v < n; ++v) {
        auto c = base.coords(static_cast<VertexId>(v));
        std::copy(c.begin(), c.end(), point.begin());
        for (int layer = 0; layer < layers; ++layer) {
            const double t = layer_offset(r[v], layer, layers);
            point.back() = t;
            builder.add_vertex(point);
            out.columns.push_back({static_cast<VertexId>(v), t});
            values.push_back(f[v] + t);
        }
        out.max_half_width = std::max(out.max_half_width, r[v]);
    }

    for (std::size_t v = 0; v < n; ++v) {
        add_prisms(builder, std::array<VertexId, 1>{static_cast<VertexId>(v)}, layers);
    }
    for (const auto& e : base.edges()) add_prisms(builder, e, layers);
    for (const auto& t : base.triangles()) add_prisms(builder, t, layers);

    out.complex = builder.build();
    out.field = ScalarField(std::move(values));
    return out;
}

ThickenedComplex thicken_global(const SimplicialComplex& base, const ScalarField& f, double eps,
                                const ThickenOptions& options) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("smoothing parameter eps must be positive and finite");
    }
    return thicken_local(base, f, ScalarField(std::vector<double>(base.num_vertices(), eps)), options);
}

}  // namespace reebmm

#include "reebmm/range.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace reebmm {

ScalarField compose_cdf(const ScalarField& f, const ContinuousCDF& F) {
    std::vector<double> values(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) values[v] = F(f[v]);
    return ScalarField(std::move(values));
}

ReebGraph range_integrated_reeb(const SimplicialComplex& complex, const ScalarField& f, const ContinuousCDF& F,
                                const RangeOptions& options) {
    require_field_on(complex, f);
    if (!options.subdivide_at_knots) return reeb_graph(complex, compose_cdf(f, F));
    const auto refined = subdivide_at_levels(complex, f, F.knots());
    return reeb_graph(refined.complex, compose_cdf(refined.field, F));
}

ReebGraph range_integrated_reeb(const SimplicialComplex& complex, const ScalarField& f, const EmpiricalMeasure& mu,
                                const RangeOptions& options) {
    return range_integrated_reeb(complex, f, empirical_cdf(mu), options);
}

SubdividedComplex subdivide_at_levels(const SimplicialComplex& complex, const ScalarField& f,
                                      std::span<const double> levels) {
    require_field_on(complex, f);
    std::vector<double> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const int dim = complex.coord_dim();
    std::vector<double> coords(complex.all_coords().begin(), complex.all_coords().end());
    std::vector<double> values(f.values().begin(), f.values().end());
    std::vector<std::vector<VertexId>> simplices;
    for (const auto& e : complex.edges()) simplices.push_back({e.begin(), e.end()});
    for (const auto& t : complex.triangles()) simplices.push_back({t.begin(), t.end()});
    for (const auto& t : complex.tetrahedra()) simplices.push_back({t.begin(), t.end()});

    auto contains = [](const std::vector<VertexId>& s, VertexId v) { return std::find(s.begin(), s.end(), v) != s.end(); };

    for (const auto& edge : complex.edges()) {
        VertexId lo = edge[0];
        VertexId hi = edge[1];
        if (values[lo] > values[hi]) std::swap(lo, hi);
        const double f_hi = values[hi];
        const auto first = std::upper_bound(sorted.begin(), sorted.end(), values[lo]);
        const auto last = std::lower_bound(sorted.begin(), sorted.end(), f_hi);
        // Split the remaining piece [lo, hi] one level at a time, bottom up.
        for (auto it = first; it < last; ++it) {
            const double c = *it;
            const double lambda = (c - values[lo]) / (f_hi - values[lo]);
            const auto w = static_cast<VertexId>(values.size());
            for (int k = 0; k < dim; ++k) {
                const double a = coords[lo * dim + k];
                const double b = coords[hi * dim + k];
                coords.push_back(a + lambda * (b - a));
            }
            values.push_back(c);
            const std::size_t count = simplices.size();
            for (std::size_t s = 0; s < count; ++s) {
                if (!contains(simplices[s], lo) || !contains(simplices[s], hi)) continue;
                auto upper = simplices[s];
                std::replace(simplices[s].begin(), simplices[s].end(), hi, w);
                std::replace(upper.begin(), upper.end(), lo, w);
                simplices.push_back(std::move(upper));
            }
            lo = w;
        }
    }

    ComplexBuilder builder(dim);
    for (std::size_t v = 0; v < values.size(); ++v) {
        builder.add_vertex(std::span<const double>(coords.data() + v * dim, static_cast<std::size_t>(dim)));
    }
    for (const auto& s : simplices) builder.add_simplex(s);
    return {builder.build(), ScalarField(std::move(values))};
}

CoordinatewiseCDF CoordinatewiseCDF::from_measure(const EmpiricalMeasure& mu) {
    CoordinatewiseCDF out;
    std::vector<double> samples(mu.size());
    for (int k = 0; k < mu.dim(); ++k) {
        for (std::size_t i = 0; i < mu.size(); ++i) samples[i] = mu.point(i)[k];
        out.marginals.push_back(empirical_cdf(samples, mu.masses()));
    }
    return out;
}

double CoordinatewiseCDF::lipschitz() const {
    double best = 0.0;
    for (const auto& F : marginals) best = std::max(best, F.lipschitz());
    return best;
}

VectorField coordinatewise_transform(const VectorField& f, const CoordinatewiseCDF& F) {
    if (f.dim() != F.dim()) throw std::invalid_argument("field and CDF dimensions differ");
    std::vector<double> values(f.values().begin(), f.values().end());
    const auto d = static_cast<std::size_t>(f.dim());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = F.marginals[i % d](values[i]);
    return VectorField(f.dim(), std::move(values));
}

ReebGraph remap_values(const ReebGraph& g, const ContinuousCDF& F) {
    ReebGraph out = g;
    for (auto& node : out.nodes) node.value = F(node.value);
    return out;
}

MonotoneInvarianceReport check_monotone_invariance(const SimplicialComplex& complex, const ScalarField& f,
                                                   const ContinuousCDF& F, double tol) {
    require_field_on(complex, f);
    MonotoneInvarianceReport report;
    if (!F.strictly_increasing_on(f.min(), f.max())) {
        report.reason = "F is not strictly increasing on the field range";
        return report;
    }
    report.applicable = true;
    const auto original = reeb_graph(complex, f);
    const auto composed = reeb_graph(complex, compose_cdf(f, F));
    report.nodes = composed.num_nodes();
    report.edges = composed.num_edges();
    report.isomorphic = is_isomorphic(remap_values(original, F), composed, tol);
    if (!report.isomorphic) report.reason = "composed Reeb graph differs from the remapped original";
    return report;
}

nlohmann::json to_json(const MonotoneInvarianceReport& report) {
    return {{"applicable", report.applicable},
            {"isomorphic", report.isomorphic},
            {"nodes", report.nodes},
            {"edges", report.edges},
            {"passed", report.passed()},
            {"reason", report.reason}};
}

}  // namespace reebmm

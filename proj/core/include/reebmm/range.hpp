#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reebmm/complex.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm {

/// F(f(v)) at every vertex. Values between vertices are not refined.
ScalarField compose_cdf(const ScalarField& f, const ContinuousCDF& F);

struct RangeOptions {
    /// Split edges where f crosses a CDF knot first, so flat CDF segments
    /// collapse exactly rather than only at vertices.
    bool subdivide_at_knots = false;
};

/// Reeb graph of F_mu o f, mu a measure on the real line.
ReebGraph range_integrated_reeb(const SimplicialComplex& complex, const ScalarField& f, const EmpiricalMeasure& mu,
                                const RangeOptions& options = {});
ReebGraph range_integrated_reeb(const SimplicialComplex& complex, const ScalarField& f, const ContinuousCDF& F,
                                const RangeOptions& options = {});

/// Complex and field after splitting every edge at each level strictly between
/// its endpoint values. New vertices carry exactly the level as field value.
struct SubdividedComplex {
    SimplicialComplex complex;
    ScalarField field;
};
SubdividedComplex subdivide_at_levels(const SimplicialComplex& complex, const ScalarField& f,
                                      std::span<const double> levels);

/// One CDF per coordinate.
struct CoordinatewiseCDF {
    std::vector<ContinuousCDF> marginals;

    int dim() const noexcept { return static_cast<int>(marginals.size()); }
    /// Marginal CDFs of a measure on R^d.
    static CoordinatewiseCDF from_measure(const EmpiricalMeasure& mu);
    /// max_i Lip(F_i), the l-infinity Lipschitz constant of the vector map.
    double lipschitz() const;
};

/// (F_1(f_1(v)), ..., F_d(f_d(v))) at every vertex.
VectorField coordinatewise_transform(const VectorField& f, const CoordinatewiseCDF& F);

/// Node values pushed through F.
ReebGraph remap_values(const ReebGraph& g, const ContinuousCDF& F);

struct MonotoneInvarianceReport {
    /// False when F is not strictly increasing on [min f, max f]; nothing else is checked then.
    bool applicable = false;
    bool isomorphic = false;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::string reason;

    bool passed() const noexcept { return applicable && isomorphic; }
};

/// Compares R(X, F o f) with R(X, f) whose node values are mapped through F.
MonotoneInvarianceReport check_monotone_invariance(const SimplicialComplex& complex, const ScalarField& f,
                                                   const ContinuousCDF& F, double tol = 1e-9);

nlohmann::json to_json(const MonotoneInvarianceReport& report);

}  // namespace reebmm

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "reebmm/complex.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm {

enum class FactorKind { constant, dtm, kernel, field };

/// Local smoothing factor r resolved on the vertices of a base complex, with
/// r(v) >= floor > 0 everywhere.
struct SmoothingFactor {
    FactorKind kind = FactorKind::constant;
    /// eps, m or sigma depending on kind; unused for `field`.
    double parameter = 0.0;
    double floor = 0.0;
    ScalarField r;

    static SmoothingFactor constant(const SimplicialComplex& complex, double eps);
    static SmoothingFactor dtm(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m, double floor);
    static SmoothingFactor dtm(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m);
    static SmoothingFactor kernel(const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                                  const KernelSpec& kernel, double floor);
    static SmoothingFactor kernel(const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                                  const KernelSpec& kernel);
    /// Arbitrary per-vertex values, lifted to `floor`.
    static SmoothingFactor from_field(const ScalarField& r, double floor);

    /// Same factor with every value multiplied by `scale` (> 0), floor kept.
    SmoothingFactor scaled(double scale) const;
    /// M = max_v r(v).
    double sup() const { return r.max(); }
};

/// Reeb graph of f(x) + t on X x [-eps, eps].
ReebGraph smooth_global(const SimplicialComplex& complex, const ScalarField& f, double eps,
                        const ThickenOptions& options = {});
/// Smoothing of a Reeb graph itself, through its realization as a 1-complex.
ReebGraph smooth_global(const ReebGraph& g, double eps, const ThickenOptions& options = {});

/// Reeb graph of f(x) + t on {(x, t) : |t| <= r(x)}.
ReebGraph smooth_local(const SimplicialComplex& complex, const ScalarField& f, const SmoothingFactor& r,
                       const ThickenOptions& options = {});

/// Geometric realization of a Reeb graph: a vertex per node and a midpoint vertex
/// per edge, so parallel edges stay distinct. The coordinate and field are the value.
struct RealizedGraph {
    SimplicialComplex complex;
    ScalarField field;
};
RealizedGraph realize(const ReebGraph& g);

/// Nearest point of [-r, r] to t.
double clamp_projection(double t, double r);
/// Nearest point of the l-infinity box [-r, r]^d to t.
std::vector<double> clamp_projection(std::span<const double> t, double r);

/// One vertex of a source space sent to (base, target offset) in the target space,
/// together with the extra coordinate (residual) in [-eps, eps]^d.
struct MapEntry {
    VertexId source = 0;
    VertexId base = 0;
    std::vector<double> source_offset;
    std::vector<double> target_offset;
    std::vector<double> residual;
};

/// A map between thickened spaces. Each side carries its base field so the
/// function values at either end of an entry are computable.
struct InterleavingMap {
    VectorField source_field;
    VectorField target_field;
    std::vector<MapEntry> entries;
};

enum class InterleavingKind { local, ambient };

struct InterleavingMapPair {
    InterleavingKind kind = InterleavingKind::local;
    int dim = 1;
    double epsilon = 0.0;
    InterleavingMap phi;
    InterleavingMap psi;
    /// Half-widths of the two thickenings per base vertex (local pairs only).
    std::vector<double> r1;
    std::vector<double> r2;
};

/// phi(x, t) = ((x, pi_{r2(x)}(t)), t - pi_{r2(x)}(t)) on every vertex of X_{r1}, and psi
/// symmetrically; eps = max_v |r1(v) - r2(v)|.
InterleavingMapPair build_local_interleaving(const SimplicialComplex& complex, const ScalarField& f,
                                             const SmoothingFactor& r1, const SmoothingFactor& r2,
                                             const ThickenOptions& options = {});

/// phi(x) = (x, f(x) - g(x)), psi(x) = (x, g(x) - f(x)); eps = max_v |f - g|_inf.
InterleavingMapPair build_ambient_interleaving(const SimplicialComplex& complex, const VectorField& f,
                                               const VectorField& g);
InterleavingMapPair build_ambient_interleaving(const SimplicialComplex& complex, const ScalarField& f,
                                               const ScalarField& g);

struct PreservationReport {
    std::size_t checked = 0;
    double max_violation = 0.0;
    std::size_t violations = 0;
    double max_residual = 0.0;
    std::size_t residual_violations = 0;
    bool passed = true;
};

/// Checks target value + target offset + residual = source value + source offset
/// on every entry, and |residual| <= eps, both within tol.
PreservationReport verify_function_preservation(const InterleavingMapPair& pair, double tol = 1e-12);

struct CommutativityOptions {
    int path_samples = 16;
    double tol = 1e-9;
};

struct CommutativityReport {
    std::size_t checked = 0;
    std::size_t coincident = 0;
    std::size_t path_checked = 0;
    /// Images of phi leaving the target thickening or the eps box.
    std::size_t range_violations = 0;
    std::size_t escapes = 0;
    double max_level_drift = 0.0;
    bool passed = true;
};

/// For every source vertex p = (x, t), writes T_eps[psi](phi(p)) as ((x, b), u) and walks
/// the straight segment ((x, b + s (t - b)), (1 - s) u), s in [0, 1], to (p, 0), checking
/// each sample stays in the double thickening at the source value. Both directions are checked.
CommutativityReport verify_commutativity(const InterleavingMapPair& pair, const SimplicialComplex& complex,
                                         const CommutativityOptions& options = {});

nlohmann::json to_json(const PreservationReport& report);
nlohmann::json to_json(const CommutativityReport& report);
nlohmann::json to_json(const InterleavingMapPair& pair);

}  // namespace reebmm

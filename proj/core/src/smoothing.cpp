#include "reebmm/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reebmm {

namespace {

ScalarField lifted(std::span<const double> values, double floor) {
    if (!(floor > 0.0) || !std::isfinite(floor)) throw std::invalid_argument("smoothing floor must be positive");
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v = std::max(v, floor);
    return ScalarField(std::move(out));
}

}  // namespace

SmoothingFactor SmoothingFactor::constant(const SimplicialComplex& complex, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("smoothing eps must be positive");
    return {FactorKind::constant, eps, eps, ScalarField(std::vector<double>(complex.num_vertices(), eps))};
}

SmoothingFactor SmoothingFactor::dtm(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m,
                                     double floor) {
    return {FactorKind::dtm, m, floor, dtm_field(complex, mu, m, floor)};
}

SmoothingFactor SmoothingFactor::dtm(const SimplicialComplex& complex, const EmpiricalMeasure& mu, double m) {
    return dtm(complex, mu, m, default_floor(complex));
}

SmoothingFactor SmoothingFactor::kernel(const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                                        const KernelSpec& kernel, double floor) {
    return {FactorKind::kernel, kernel.bandwidth, floor, kdist_field(complex, mu, kernel, floor)};
}

SmoothingFactor SmoothingFactor::kernel(const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                                        const KernelSpec& kernel) {
    return SmoothingFactor::kernel(complex, mu, kernel, default_floor(complex));
}

SmoothingFactor SmoothingFactor::from_field(const ScalarField& r, double floor) {
    return {FactorKind::field, 0.0, floor, lifted(r.values(), floor)};
}

SmoothingFactor SmoothingFactor::scaled(double scale) const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("scale must be positive");
    std::vector<double> values(r.values().begin(), r.values().end());
    for (double& v : values) v *= scale;
    SmoothingFactor out = *this;
    out.r = lifted(values, floor);
    return out;
}

ReebGraph smooth_global(const SimplicialComplex& complex, const ScalarField& f, double eps,
                        const ThickenOptions& options) {
    const auto thick = thicken_global(complex, f, eps, options);
    return reeb_graph(thick.complex, thick.field);
}

ReebGraph smooth_global(const ReebGraph& g, double eps, const ThickenOptions& options) {
    const auto realized = realize(g);
    return smooth_global(realized.complex, realized.field, eps, options);
}

ReebGraph smooth_local(const SimplicialComplex& complex, const ScalarField& f, const SmoothingFactor& r,
                       const ThickenOptions& options) {
    const auto thick = thicken_local(complex, f, r.r, options);
    return reeb_graph(thick.complex, thick.field);
}

RealizedGraph realize(const ReebGraph& g) {
    ComplexBuilder builder(1);
    std::vector<double> values;
    for (const auto& node : g.nodes) {
        builder.add_vertex({node.value});
        values.push_back(node.value);
    }
    for (const auto& [a, b] : g.edges) {
        const double mid = 0.5 * (g.value(a) + g.value(b));
        const VertexId m = builder.add_vertex({mid});
        values.push_back(mid);
        builder.add_simplex({static_cast<VertexId>(a), m});
        builder.add_simplex({m, static_cast<VertexId>(b)});
    }
    if (g.nodes.empty()) throw std::invalid_argument("cannot realize an empty Reeb graph");
    return {builder.build(), ScalarField(std::move(values))};
}

double clamp_projection(double t, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("projection radius must be positive");
    return std::clamp(t, -r, r);
}

std::vector<double> clamp_projection(std::span<const double> t, double r) {
    std::vector<double> out(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) out[k] = clamp_projection(t[k], r);
    return out;
}

namespace {

InterleavingMap local_map(const ThickenedComplex& source, const ScalarField& f, const ScalarField& target_r) {
    InterleavingMap map;
    map.source_field = VectorField::from_scalar(f);
    map.target_field = map.source_field;
    map.entries.reserve(source.columns.size());
    for (std::size_t v = 0; v < source.columns.size(); ++v) {
        const auto [base, t] = source.columns[v];
        const double a = clamp_projection(t, target_r[base]);
        map.entries.push_back({static_cast<VertexId>(v), base, {t}, {a}, {t - a}});
    }
    return map;
}

void require_same_base(const SimplicialComplex& complex, const SmoothingFactor& r) {
    if (r.r.size() != complex.num_vertices()) {
        throw std::invalid_argument("smoothing factor is resolved on a different complex");
    }
}

}  // namespace

InterleavingMapPair build_local_interleaving(const SimplicialComplex& complex, const ScalarField& f,
                                             const SmoothingFactor& r1, const SmoothingFactor& r2,
                                             const ThickenOptions& options) {
    require_field_on(complex, f);
    require_same_base(complex, r1);
    require_same_base(complex, r2);
    InterleavingMapPair pair;
    pair.kind = InterleavingKind::local;
    pair.r1.assign(r1.r.values().begin(), r1.r.values().end());
    pair.r2.assign(r2.r.values().begin(), r2.r.values().end());
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        pair.epsilon = std::max(pair.epsilon, std::abs(pair.r1[v] - pair.r2[v]));
    }
    pair.phi = local_map(thicken_local(complex, f, r1.r, options), f, r2.r);
    pair.psi = local_map(thicken_local(complex, f, r2.r, options), f, r1.r);
    return pair;
}

InterleavingMapPair build_ambient_interleaving(const SimplicialComplex& complex, const VectorField& f,
                                               const VectorField& g) {
    require_field_on(complex, f);
    require_field_on(complex, g);
    if (f.dim() != g.dim()) throw std::invalid_argument("fields have different dimensions");
    const int d = f.dim();
    InterleavingMapPair pair;
    pair.kind = InterleavingKind::ambient;
    pair.dim = d;
    pair.phi.source_field = f;
    pair.phi.target_field = g;
    pair.psi.source_field = g;
    pair.psi.target_field = f;
    for (std::size_t v = 0; v < complex.num_vertices(); ++v) {
        const auto x = static_cast<VertexId>(v);
        MapEntry forward{x, x, std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d)};
        MapEntry backward = forward;
        for (int k = 0; k < d; ++k) {
            forward.residual[k] = f[v][k] - g[v][k];
            backward.residual[k] = g[v][k] - f[v][k];
            pair.epsilon = std::max(pair.epsilon, std::abs(forward.residual[k]));
        }
        pair.phi.entries.push_back(std::move(forward));
        pair.psi.entries.push_back(std::move(backward));
    }
    return pair;
}

InterleavingMapPair build_ambient_interleaving(const SimplicialComplex& complex, const ScalarField& f,
                                               const ScalarField& g) {
    return build_ambient_interleaving(complex, VectorField::from_scalar(f), VectorField::from_scalar(g));
}

PreservationReport verify_function_preservation(const InterleavingMapPair& pair, double tol) {
    PreservationReport report;
    for (const InterleavingMap* map : {&pair.phi, &pair.psi}) {
        for (const auto& entry : map->entries) {
            ++report.checked;
            for (std::size_t k = 0; k < entry.residual.size(); ++k) {
                const double source = map->source_field[entry.base][k] + entry.source_offset[k];
                const double target = map->target_field[entry.base][k] + entry.target_offset[k] + entry.residual[k];
                const double violation = std::abs(target - source);
                report.max_violation = std::max(report.max_violation, violation);
                if (violation > tol) ++report.violations;
                const double residual = std::abs(entry.residual[k]);
                report.max_residual = std::max(report.max_residual, residual);
                if (residual > pair.epsilon + tol) ++report.residual_violations;
            }
        }
    }
    report.passed = report.violations == 0 && report.residual_violations == 0;
    return report;
}

namespace {

// Walks T_eps[back](forward(p)) to (p, 0) for every entry of `forward`.
void check_direction(const InterleavingMapPair& pair, const InterleavingMap& forward, const InterleavingMap& back,
                     const std::vector<double>& source_r, const std::vector<double>& target_r,
                     const CommutativityOptions& options, CommutativityReport& report) {
    const double tol = options.tol;
    const double eps = pair.epsilon;
    const bool local = pair.kind == InterleavingKind::local;
    for (const auto& entry : forward.entries) {
        ++report.checked;
        const VertexId x = entry.base;
        bool coincident = true;
        bool escaped = false;
        for (std::size_t k = 0; k < entry.residual.size(); ++k) {
            const double t = entry.source_offset[k];
            const double a = entry.target_offset[k];
            const double s = entry.residual[k];
            const double target_bound = local ? target_r[x] : 0.0;
            if (std::abs(a) > target_bound + tol || std::abs(s) > eps + tol) ++report.range_violations;

            // back((x, a)) then shift by s.
            double b = 0.0;
            double back_residual = 0.0;
            if (local) {
                b = clamp_projection(a, source_r[x]);
                back_residual = a - b;
            } else {
                b = 0.0;
                back_residual = back.entries[x].residual[k];
            }
            const double u = back_residual + s;
            if (b != t || u != 0.0) coincident = false;

            const double level = forward.source_field[x][k] + t;
            const double source_bound = local ? source_r[x] : 0.0;
            for (int step = 0; step <= options.path_samples; ++step) {
                const double lambda = static_cast<double>(step) / options.path_samples;
                const double position = b + lambda * (t - b);
                const double extra = (1.0 - lambda) * u;
                if (std::abs(position) > source_bound + tol || std::abs(extra) > 2.0 * eps + tol) escaped = true;
                const double drift = std::abs(forward.source_field[x][k] + position + extra - level);
                report.max_level_drift = std::max(report.max_level_drift, drift);
                if (drift > tol) escaped = true;
            }
        }
        if (coincident) ++report.coincident;
        else ++report.path_checked;
        if (escaped) ++report.escapes;
    }
}

}  // namespace

CommutativityReport verify_commutativity(const InterleavingMapPair& pair, const SimplicialComplex& complex,
                                         const CommutativityOptions& options) {
    if (options.path_samples < 1) throw std::invalid_argument("path_samples must be >= 1");
    if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (pair.phi.source_field.size() != complex.num_vertices()) {
        throw std::invalid_argument("interleaving pair was built on a different complex");
    }
    CommutativityReport report;
    check_direction(pair, pair.phi, pair.psi, pair.r1, pair.r2, options, report);
    check_direction(pair, pair.psi, pair.phi, pair.r2, pair.r1, options, report);
    report.passed = report.escapes == 0 && report.range_violations == 0;
    return report;
}

nlohmann::json to_json(const PreservationReport& report) {
    return {{"checked", report.checked},
            {"max_violation", report.max_violation},
            {"violations", report.violations},
            {"max_residual", report.max_residual},
            {"residual_violations", report.residual_violations},
            {"passed", report.passed}};
}

nlohmann::json to_json(const CommutativityReport& report) {
    return {{"checked", report.checked},
            {"coincident", report.coincident},
            {"path_checked", report.path_checked},
            {"range_violations", report.range_violations},
            {"escapes", report.escapes},
            {"max_level_drift", report.max_level_drift},
            {"passed", report.passed}};
}

nlohmann::json to_json(const InterleavingMapPair& pair) {
    auto entries = [](const InterleavingMap& map) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& e : map.entries) {
            out.push_back({{"source", e.source},
                           {"base", e.base},
                           {"source_offset", e.source_offset},
                           {"target_offset", e.target_offset},
                           {"residual", e.residual}});
        }
        return out;
    };
    return {{"kind", pair.kind == InterleavingKind::local ? "local" : "ambient"},
            {"dim", pair.dim},
            {"epsilon", pair.epsilon},
            {"phi", entries(pair.phi)},
            {"psi", entries(pair.psi)}};
}

}  // namespace reebmm

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reebmm/complex.hpp"
#include "reebmm/diagram.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/reeb_graph.hpp"

namespace reebmm {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    /// Fixture names (circle, torus, fig4) or mesh paths, used in rotation.
    std::vector<std::string> meshes{"circle", "torus", "fig4"};
    /// Mass parameter m of the distance to a measure.
    double mass = 0.2;
    /// Gaussian kernel bandwidth, as a fraction of the mesh diameter.
    double sigma = 0.25;
    /// r = smoothing_scale * (measure factor) in the stability trials.
    double smoothing_scale = 0.5;
    /// sup |f - g| as a fraction of the height range.
    double perturbation = 0.05;
    /// Largest per-coordinate displacement of nu's points, as a fraction of the diameter.
    double jitter = 0.05;
    std::size_t max_support = 32;
    double tolerance = 1e-9;
    double c_proxy = kDefaultProxyConstant;
    /// 0 means: REEB_THREADS if set, else 1.
    std::size_t threads = 0;

    /// Three-loop sweep: multipliers applied to the mean-normalized factors.
    std::vector<double> fig4_scales{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.8, 1.0, 1.5, 2.0};
    double fig4_mass = 0.005;
    /// Absolute Gaussian bandwidth, in mesh units.
    double fig4_sigma = 0.3;

    /// Throws std::invalid_argument when an invariant fails.
    void validate() const;
};

/// Applies "key = value" lines ('#' comments allowed) on top of `base`.
/// Throws ParseError on unknown keys or bad values.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);

std::size_t resolve_threads(const ExperimentConfig& config);

enum class StabilityMode { dtm, kernel, range };
std::string to_string(StabilityMode mode);
StabilityMode stability_mode_from_string(const std::string& name);

struct TrialResult {
    std::size_t index = 0;
    std::string mesh;
    double sup_diff = 0.0;
    /// W2/sqrt(m), D_K or d_KS.
    double measure_term = 0.0;
    double lip_mu = 0.0;
    double lip_nu = 0.0;
    double bottleneck = 0.0;
    double lower_bound = 0.0;
    double rhs = 0.0;
    std::size_t nodes_f = 0;
    std::size_t nodes_g = 0;
    bool passed = false;
};

struct StabilityReport {
    StabilityMode mode = StabilityMode::dtm;
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    std::size_t violations = 0;
    double max_lower_bound = 0.0;
};

/// One trial from explicit inputs. For dtm and kernel modes mu and nu live in the
/// mesh's coordinate space; for range mode they live on the real line.
TrialResult evaluate_stability(const SimplicialComplex& complex, const ScalarField& f, const ScalarField& g,
                               const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, StabilityMode mode,
                               const ExperimentConfig& config);

/// Seeded random trials; results are in trial order whatever the thread count.
StabilityReport run_stability(const ExperimentConfig& config, StabilityMode mode);
nlohmann::json to_json(const StabilityReport& report);

/// Names of the loops an extended diagram still carries. A loop point is credited
/// to the loop of the node where its cycle closes (its birth node), falling back to
/// its death node; `node_loop` gives a loop index per graph node or -1.
std::vector<std::string> surviving_loops(const PersistenceDiagram& diagram, std::span<const int> node_loop,
                                         std::span<const LoopRange> loops);

struct Fig4Outcome {
    std::size_t betti1 = 0;
    std::vector<std::string> loops;
    bool has(const std::string& name) const;
};

struct Fig4ScaleResult {
    double scale = 0.0;
    Fig4Outcome dtm;
    Fig4Outcome kernel;
    /// kernel keeps alpha but not beta while dtm keeps beta but not alpha.
    bool crossover = false;
};

struct Fig4Report {
    ExperimentConfig config;
    std::vector<Fig4ScaleResult> scales;
    bool crossover = false;
    /// First crossover scale, or the middle of the sweep when none exists.
    double shown_scale = 0.0;
    ReebGraph dtm_graph;
    ReebGraph kernel_graph;
};

/// Sweeps config.fig4_scales with dtm- and kernel-based local smoothing of the height.
/// `vertex_loop` names the loop (index into `loops`) each base vertex lies on, or -1.
Fig4Report run_fig4(const ExperimentConfig& config, const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                    std::span<const LoopRange> loops, std::span<const int> vertex_loop);
nlohmann::json to_json(const Fig4Report& report);

}  // namespace reebmm

#include "reebmm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "reebmm/error.hpp"
#include "reebmm/io.hpp"
#include "reebmm/range.hpp"
#include "reebmm/smoothing.hpp"

namespace reebmm {

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid experiment config: ") + what);
    };
    require(trials >= 1, "trials must be >= 1");
    require(!meshes.empty(), "at least one mesh is required");
    require(mass > 0.0 && mass <= 1.0, "mass must lie in (0, 1]");
    require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
    require(smoothing_scale > 0.0 && std::isfinite(smoothing_scale), "smoothing_scale must be positive");
    require(perturbation >= 0.0 && std::isfinite(perturbation), "perturbation must be >= 0");
    require(jitter >= 0.0 && std::isfinite(jitter), "jitter must be >= 0");
    require(max_support >= 4 && max_support <= kMaxTransportSupport, "max_support must lie in [4, 64]");
    require(tolerance > 0.0, "tolerance must be positive");
    require(c_proxy > 0.0 && std::isfinite(c_proxy), "c_proxy must be positive");
    require(!fig4_scales.empty(), "fig4_scales must not be empty");
    for (double s : fig4_scales) require(s > 0.0 && std::isfinite(s), "fig4_scales must be positive");
    require(fig4_mass > 0.0 && fig4_mass <= 1.0, "fig4_mass must lie in (0, 1]");
    require(fig4_sigma > 0.0 && std::isfinite(fig4_sigma), "fig4_sigma must be positive");
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, ExperimentConfig config) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(number, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto as_double = [&] {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != value.size()) throw ParseError(number, "'" + key + "' expects a number");
            return v;
        };
        auto as_count = [&] {
            if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
                throw ParseError(number, "'" + key + "' expects a nonnegative integer");
            }
            try {
                return static_cast<std::uint64_t>(std::stoull(value));
            } catch (const std::exception&) {
                throw ParseError(number, "'" + key + "' is out of range");
            }
        };
        if (key == "seed") config.seed = as_count();
        else if (key == "trials") config.trials = as_count();
        else if (key == "meshes") config.meshes = split_list(value);
        else if (key == "mass") config.mass = as_double();
        else if (key == "sigma") config.sigma = as_double();
        else if (key == "smoothing_scale") config.smoothing_scale = as_double();
        else if (key == "perturbation") config.perturbation = as_double();
        else if (key == "jitter") config.jitter = as_double();
        else if (key == "max_support") config.max_support = as_count();
        else if (key == "tolerance") config.tolerance = as_double();
        else if (key == "c_proxy") config.c_proxy = as_double();
        else if (key == "threads") config.threads = as_count();
        else if (key == "fig4_mass") config.fig4_mass = as_double();
        else if (key == "fig4_sigma") config.fig4_sigma = as_double();
        else if (key == "fig4_scales") {
            config.fig4_scales.clear();
            for (const auto& item : split_list(value)) {
                try {
                    config.fig4_scales.push_back(std::stod(item));
                } catch (const std::exception&) {
                    throw ParseError(number, "'fig4_scales' expects numbers");
                }
            }
        } else {
            throw ParseError(number, "unknown key '" + key + "'");
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file " + path);
    return parse_config(in, std::move(base));
}

nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"seed", c.seed},
            {"trials", c.trials},
            {"meshes", c.meshes},
            {"mass", c.mass},
            {"sigma", c.sigma},
            {"smoothing_scale", c.smoothing_scale},
            {"perturbation", c.perturbation},
            {"jitter", c.jitter},
            {"max_support", c.max_support},
            {"tolerance", c.tolerance},
            {"c_proxy", c.c_proxy},
            {"fig4_scales", c.fig4_scales},
            {"fig4_mass", c.fig4_mass},
            {"fig4_sigma", c.fig4_sigma}};
}

std::size_t resolve_threads(const ExperimentConfig& config) {
    if (config.threads > 0) return config.threads;
    if (const char* env = std::getenv("REEB_THREADS")) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return n;
    }
    return 1;
}

std::string to_string(StabilityMode mode) {
    switch (mode) {
        case StabilityMode::dtm: return "dtm";
        case StabilityMode::kernel: return "kernel";
        case StabilityMode::range: return "range";
    }
    return "dtm";
}

StabilityMode stability_mode_from_string(const std::string& name) {
    if (name == "dtm") return StabilityMode::dtm;
    if (name == "kernel") return StabilityMode::kernel;
    if (name == "range") return StabilityMode::range;
    throw std::invalid_argument("unknown stability mode '" + name + "'");
}

namespace {

double sup_distance(const ScalarField& f, const ScalarField& g) {
    double out = 0.0;
    for (std::size_t v = 0; v < f.size(); ++v) out = std::max(out, std::abs(f[v] - g[v]));
    return out;
}

}  // namespace

TrialResult evaluate_stability(const SimplicialComplex& complex, const ScalarField& f, const ScalarField& g,
                               const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, StabilityMode mode,
                               const ExperimentConfig& config) {
    require_field_on(complex, f);
    require_field_on(complex, g);
    TrialResult result;
    result.sup_diff = sup_distance(f, g);
    ReebGraph gf;
    ReebGraph gg;
    const double s = config.smoothing_scale;
    switch (mode) {
        case StabilityMode::dtm: {
            const auto r1 = SmoothingFactor::dtm(complex, mu, config.mass).scaled(s);
            const auto r2 = SmoothingFactor::dtm(complex, nu, config.mass).scaled(s);
            gf = smooth_local(complex, f, r1);
            gg = smooth_local(complex, g, r2);
            result.measure_term = wasserstein2(mu.padded_to(complex.coord_dim()), nu.padded_to(complex.coord_dim())) /
                                  std::sqrt(config.mass);
            result.rhs = result.sup_diff + s * result.measure_term;
            break;
        }
        case StabilityMode::kernel: {
            const auto kernel = KernelSpec::gaussian(config.sigma * complex.diameter());
            const auto r1 = SmoothingFactor::kernel(complex, mu, kernel).scaled(s);
            const auto r2 = SmoothingFactor::kernel(complex, nu, kernel).scaled(s);
            gf = smooth_local(complex, f, r1);
            gg = smooth_local(complex, g, r2);
            result.measure_term = kernel_distance(mu.padded_to(complex.coord_dim()),
                                                  nu.padded_to(complex.coord_dim()), kernel);
            result.rhs = result.sup_diff + s * result.measure_term;
            break;
        }
        case StabilityMode::range: {
            const auto F = empirical_cdf(mu);
            const auto G = empirical_cdf(nu);
            gf = reeb_graph(complex, compose_cdf(f, F));
            gg = reeb_graph(complex, compose_cdf(g, G));
            result.measure_term = ks_distance(F, G);
            result.lip_mu = F.lipschitz();
            result.lip_nu = G.lipschitz();
            result.rhs = std::min({result.measure_term + result.lip_mu * result.sup_diff,
                                   result.measure_term + result.lip_nu * result.sup_diff, 1.0});
            break;
        }
    }
    result.nodes_f = gf.num_nodes();
    result.nodes_g = gg.num_nodes();
    result.bottleneck = bottleneck(extended_persistence(gf), extended_persistence(gg));
    result.lower_bound = result.bottleneck / config.c_proxy;
    result.passed = result.lower_bound <= result.rhs + config.tolerance;
    return result;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Distribution code written out so draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    double exponential() { return -std::log1p(-uniform()); }

private:
    std::mt19937_64 engine_;
};

struct TrialInput {
    ScalarField f;
    ScalarField g;
    EmpiricalMeasure mu;
    EmpiricalMeasure nu;
};

TrialInput sample_trial(const SimplicialComplex& complex, StabilityMode mode, const ExperimentConfig& config,
                        Rng& rng) {
    const auto height = height_field(complex);
    const double spread = height.max() > height.min() ? height.max() - height.min() : 1.0;
    const double diameter = complex.diameter() > 0.0 ? complex.diameter() : 1.0;
    const int dim = complex.coord_dim();
    const std::size_t n = complex.num_vertices();

    // f: height plus two random plane waves, g: f plus one Gaussian bump.
    std::vector<double> f(height.values().begin(), height.values().end());
    for (int wave = 0; wave < 2; ++wave) {
        std::vector<double> direction(dim);
        for (double& d : direction) d = rng.uniform(-1.0, 1.0);
        const double amplitude = 0.05 * spread * rng.uniform();
        const double frequency = (1.0 + rng.index(3)) * 2.0 * 3.141592653589793 / diameter;
        const double phase = rng.uniform(0.0, 6.283185307179586);
        for (std::size_t v = 0; v < n; ++v) {
            double proj = 0.0;
            const auto x = complex.coords(static_cast<VertexId>(v));
            for (int k = 0; k < dim; ++k) proj += direction[k] * x[k];
            f[v] += amplitude * std::sin(frequency * proj + phase);
        }
    }
    std::vector<double> g = f;
    const double delta = config.perturbation * spread * rng.uniform(0.5, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const auto center = complex.coords(static_cast<VertexId>(rng.index(n)));
    const double width = 0.2 * diameter;
    for (std::size_t v = 0; v < n; ++v) {
        const double d = euclidean_distance(complex.coords(static_cast<VertexId>(v)), center);
        g[v] += delta * std::exp(-d * d / (2.0 * width * width));
    }

    const std::size_t support = 4 + rng.index(config.max_support - 3);
    std::vector<double> mu_coords;
    std::vector<double> mu_weights;
    std::vector<double> nu_coords;
    std::vector<double> nu_weights;
    if (mode == StabilityMode::range) {
        const double lo = *std::min_element(f.begin(), f.end()) - 0.1 * spread;
        const double hi = *std::max_element(f.begin(), f.end()) + 0.1 * spread;
        for (std::size_t i = 0; i < support; ++i) {
            const double x = rng.uniform(lo, hi);
            mu_coords.push_back(x);
            nu_coords.push_back(x + config.jitter * spread * rng.uniform(-1.0, 1.0));
        }
    } else {
        for (std::size_t i = 0; i < support; ++i) {
            const auto anchor = complex.coords(static_cast<VertexId>(rng.index(n)));
            for (int k = 0; k < dim; ++k) {
                const double x = anchor[k] + 0.05 * diameter * rng.uniform(-1.0, 1.0);
                mu_coords.push_back(x);
                nu_coords.push_back(x + config.jitter * diameter * rng.uniform(-1.0, 1.0));
            }
        }
    }
    for (std::size_t i = 0; i < support; ++i) {
        mu_weights.push_back(rng.uniform(0.5, 1.5));
        nu_weights.push_back(rng.exponential());  // Dirichlet(1, ..., 1) after normalization
    }
    const int measure_dim = mode == StabilityMode::range ? 1 : dim;
    return {ScalarField(std::move(f)), ScalarField(std::move(g)),
            EmpiricalMeasure(measure_dim, std::move(mu_coords), std::move(mu_weights)),
            EmpiricalMeasure(measure_dim, std::move(nu_coords), std::move(nu_weights))};
}

SimplicialComplex load_mesh(const std::string& name) {
    const auto names = fixture_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return fixture_mesh(name);
    return load_complex(name).complex;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

StabilityReport run_stability(const ExperimentConfig& config, StabilityMode mode) {
    config.validate();
    std::vector<SimplicialComplex> meshes;
    for (const auto& name : config.meshes) meshes.push_back(load_mesh(name));

    StabilityReport report;
    report.mode = mode;
    report.config = config;
    report.trials.resize(config.trials);
    parallel_for(config.trials, resolve_threads(config), [&](std::size_t i) {
        const std::size_t which = i % meshes.size();
        Rng rng(splitmix64(config.seed ^ splitmix64(i)));
        const auto input = sample_trial(meshes[which], mode, config, rng);
        auto result = evaluate_stability(meshes[which], input.f, input.g, input.mu, input.nu, mode, config);
        result.index = i;
        result.mesh = config.meshes[which];
        report.trials[i] = std::move(result);
    });
    for (const auto& t : report.trials) {
        if (!t.passed) ++report.violations;
        report.max_lower_bound = std::max(report.max_lower_bound, t.lower_bound);
    }
    return report;
}

nlohmann::json to_json(const StabilityReport& report) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : report.trials) {
        trials.push_back({{"index", t.index},
                          {"mesh", t.mesh},
                          {"sup_diff", t.sup_diff},
                          {"measure_term", t.measure_term},
                          {"lip_mu", t.lip_mu},
                          {"lip_nu", t.lip_nu},
                          {"bottleneck", t.bottleneck},
                          {"lower_bound", t.lower_bound},
                          {"rhs", t.rhs},
                          {"nodes_f", t.nodes_f},
                          {"nodes_g", t.nodes_g},
                          {"passed", t.passed}});
    }
    return {{"schema_version", kReportSchemaVersion},
            {"experiment", "stability"},
            {"mode", to_string(report.mode)},
            {"config", to_json(report.config)},
            {"summary", {{"trials", report.trials.size()},
                         {"violations", report.violations},
                         {"max_lower_bound", report.max_lower_bound}}},
            {"trials", std::move(trials)}};
}

std::vector<std::string> surviving_loops(const PersistenceDiagram& diagram, std::span<const int> node_loop,
                                         std::span<const LoopRange> loops) {
    std::vector<bool> alive(loops.size(), false);
    auto loop_of = [&](std::size_t node) {
        return node < node_loop.size() ? node_loop[node] : -1;
    };
    for (const auto& p : diagram.select(1, PointClass::extended)) {
        int k = loop_of(p.birth_node);
        if (k < 0) k = loop_of(p.death_node);
        if (k >= 0 && static_cast<std::size_t>(k) < loops.size()) alive[k] = true;
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < loops.size(); ++k) {
        if (alive[k]) out.push_back(loops[k].name);
    }
    return out;
}

bool Fig4Outcome::has(const std::string& name) const {
    return std::find(loops.begin(), loops.end(), name) != loops.end();
}

namespace {

ScalarField mean_normalized(const ScalarField& r) {
    double mean = 0.0;
    for (double v : r.values()) mean += v;
    mean /= static_cast<double>(r.size());
    std::vector<double> out(r.values().begin(), r.values().end());
    for (double& v : out) v /= mean;
    return ScalarField(std::move(out));
}

}  // namespace

Fig4Report run_fig4(const ExperimentConfig& config, const SimplicialComplex& complex, const EmpiricalMeasure& mu,
                    std::span<const LoopRange> loops, std::span<const int> vertex_loop) {
    if (vertex_loop.size() != complex.num_vertices()) throw std::invalid_argument("vertex_loop has the wrong length");
    config.validate();
    const auto height = height_field(complex);
    const double floor = default_floor(complex);
    const auto dtm_shape = mean_normalized(dtm_field(complex, mu, config.fig4_mass, floor));
    const auto kernel_shape =
        mean_normalized(kdist_field(complex, mu, KernelSpec::gaussian(config.fig4_sigma), floor));
    const auto dtm_base = SmoothingFactor::from_field(dtm_shape, floor);
    const auto kernel_base = SmoothingFactor::from_field(kernel_shape, floor);

    Fig4Report report;
    report.config = config;
    report.scales.resize(config.fig4_scales.size());
    std::vector<ReebGraph> dtm_graphs(report.scales.size());
    std::vector<ReebGraph> kernel_graphs(report.scales.size());
    parallel_for(report.scales.size(), resolve_threads(config), [&](std::size_t i) {
        const double s = config.fig4_scales[i];
        auto outcome = [&](const SmoothingFactor& base, ReebGraph& graph) {
            const auto thick = thicken_local(complex, height, base.scaled(s).r);
            graph = reeb_graph(thick.complex, thick.field);
            std::vector<int> node_loop(graph.num_nodes(), -1);
            for (std::size_t n = 0; n < graph.num_nodes(); ++n) {
                if (graph.nodes[n].vertex) node_loop[n] = vertex_loop[thick.columns[*graph.nodes[n].vertex].base];
            }
            return Fig4Outcome{betti1(graph), surviving_loops(extended_persistence(graph), node_loop, loops)};
        };
        auto& row = report.scales[i];
        row.scale = s;
        row.dtm = outcome(dtm_base, dtm_graphs[i]);
        row.kernel = outcome(kernel_base, kernel_graphs[i]);
        row.crossover = row.kernel.has("alpha") && !row.kernel.has("beta") && row.dtm.has("beta") &&
                        !row.dtm.has("alpha");
    });

    std::size_t shown = report.scales.size() / 2;
    for (std::size_t i = 0; i < report.scales.size(); ++i) {
        if (report.scales[i].crossover) {
            report.crossover = true;
            shown = i;
            break;
        }
    }
    report.shown_scale = report.scales[shown].scale;
    report.dtm_graph = dtm_graphs[shown];
    report.kernel_graph = kernel_graphs[shown];
    return report;
}

nlohmann::json to_json(const Fig4Report& report) {
    auto outcome = [](const Fig4Outcome& o) { return nlohmann::json{{"betti1", o.betti1}, {"loops", o.loops}}; };
    nlohmann::json scales = nlohmann::json::array();
    for (const auto& row : report.scales) {
        scales.push_back({{"scale", row.scale},
                          {"dtm", outcome(row.dtm)},
                          {"kernel", outcome(row.kernel)},
                          {"crossover", row.crossover}});
    }
    return {{"schema_version", kReportSchemaVersion},
            {"experiment", "fig4"},
            {"config", to_json(report.config)},
            {"crossover", report.crossover},
            {"shown_scale", report.shown_scale},
            {"scales", std::move(scales)},
            {"dtm_graph", to_json(report.dtm_graph)},
            {"kernel_graph", to_json(report.kernel_graph)}};
}

}  // namespace reebmm

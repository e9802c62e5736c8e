#include "reebmm/commands.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reebmm/diagram.hpp"
#include "reebmm/error.hpp"
#include "reebmm/experiment.hpp"
#include "reebmm/field_expr.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/io.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/range.hpp"
#include "reebmm/reeb_graph.hpp"
#include "reebmm/smoothing.hpp"

namespace reebmm::cli {
namespace {

struct InputArgs {
    std::string in;
    std::string field;
};

void add_input(CLI::App* cmd, InputArgs& a, bool required = true) {
    auto* opt = cmd->add_option("--in", a.in, "mesh (.off) or complex document (.json)");
    if (required) opt->required();
    cmd->add_option("--field", a.field,
                    "height | csv:<path> | expression in x, y, z (default: the document's field, else height)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError(0, "cannot write '" + path + "'");
    out << text;
    if (!out) throw ParseError(0, "failed writing '" + path + "'");
}

ScalarField resolve_field(const ComplexDocument& doc, const std::string& spec) {
    ScalarField f;
    if (spec.empty()) {
        f = doc.field ? *doc.field : height_field(doc.complex);
    } else if (spec == "height") {
        f = height_field(doc.complex);
    } else if (spec.rfind("csv:", 0) == 0) {
        std::istringstream in(read_file(spec.substr(4)));
        f = parse_field_values(in);
    } else {
        f = FieldExpression::parse(spec).evaluate(doc.complex);
    }
    require_field_on(doc.complex, f);
    return f;
}

struct Loaded {
    ComplexDocument doc;
    ScalarField f;
};

Loaded load(const InputArgs& a) {
    auto doc = load_complex(a.in);
    auto f = resolve_field(doc, a.field);
    return {std::move(doc), std::move(f)};
}

ReebGraph load_graph(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return reeb_graph_from_json(doc);
}

void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        out << text;
    } else {
        write_file(path, text);
    }
}

void emit_graph(const ReebGraph& g, const std::string& out_path, const std::string& dot_path, std::ostream& out) {
    emit(to_json(g), out_path, out);
    if (!dot_path.empty()) write_file(dot_path, to_dot(g));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reeb graphs of scalar fields on simplicial complexes, smoothed by measures"};
    app.name(args.empty() ? "reebmm" : args.front());
    app.require_subcommand(1);

    std::string out_path;
    std::string dot_path;

    // build
    InputArgs build_in;
    auto* build = app.add_subcommand("build", "Reeb graph of a PL field");
    add_input(build, build_in);
    build->add_option("--out", out_path, "graph JSON (default: stdout)");
    build->add_option("--dot", dot_path, "also write Graphviz DOT");

    // smooth
    InputArgs smooth_in;
    std::optional<double> eps;
    std::optional<double> dtm_mass;
    std::optional<double> sigma;
    std::optional<double> rmin;
    std::string measure_path;
    int layers = 3;
    auto* smooth = app.add_subcommand("smooth", "global or measure-driven local smoothing");
    add_input(smooth, smooth_in);
    auto* eps_opt = smooth->add_option("--eps", eps, "constant thickening half-width");
    auto* dtm_opt = smooth->add_option("--dtm", dtm_mass, "local factor r = d_{mu,m} with this mass m");
    auto* ker_opt = smooth->add_option("--kernel", sigma, "local factor r = D_{mu,K}, Gaussian bandwidth sigma");
    eps_opt->excludes(dtm_opt)->excludes(ker_opt);
    dtm_opt->excludes(ker_opt);
    smooth->add_option("--rmin", rmin, "lower bound on r (default: 1e-6 x diameter)");
    smooth->add_option("--measure", measure_path, "weighted points CSV for --dtm / --kernel");
    smooth->add_option("--layers", layers, "odd number of layers per column")->check(CLI::Range(3, 99));
    smooth->add_option("--out", out_path, "graph JSON (default: stdout)");
    smooth->add_option("--dot", dot_path, "also write Graphviz DOT");

    // range
    InputArgs range_in;
    std::string range_measure;
    bool subdivide = false;
    auto* range = app.add_subcommand("range", "range-integrated Reeb graph of F_mu o f");
    add_input(range, range_in);
    range->add_option("--measure", range_measure, "1-D weighted samples CSV")->required();
    range->add_flag("--subdivide", subdivide, "split edges at CDF knots first");
    range->add_option("--out", out_path, "graph JSON (default: stdout)");
    range->add_option("--dot", dot_path, "also write Graphviz DOT");

    // diagram
    InputArgs diagram_in;
    std::string graph_path;
    auto* diagram = app.add_subcommand("diagram", "extended persistence diagram of a Reeb graph");
    add_input(diagram, diagram_in, false);
    diagram->add_option("--graph", graph_path, "graph JSON instead of --in");
    diagram->add_option("--out", out_path, "diagram JSON (default: stdout)");

    // compare
    std::string graph_a;
    std::string graph_b;
    double c_proxy = kDefaultProxyConstant;
    double tolerance = 1e-9;
    auto* compare = app.add_subcommand("compare", "diagram bottleneck and interleaving lower bound of two graphs");
    compare->add_option("a", graph_a, "graph JSON")->required();
    compare->add_option("b", graph_b, "graph JSON")->required();
    compare->add_option("--c-proxy", c_proxy, "lower bound = bottleneck / c")->check(CLI::PositiveNumber);
    compare->add_option("--tol", tolerance, "value tolerance for the isomorphism test")->check(CLI::NonNegativeNumber);
    compare->add_option("--out", out_path, "JSON (default: stdout)");

    // experiment
    std::string mode_name = "dtm";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string config_path;
    auto* experiment = app.add_subcommand("experiment", "seeded stability trials");
    experiment->add_option("--mode", mode_name, "dtm | kernel | range")
        ->check(CLI::IsMember({"dtm", "kernel", "range"}));
    experiment->add_option("--seed", seed);
    experiment->add_option("--trials", trials);
    experiment->add_option("--threads", threads, "0: REEB_THREADS if set, else 1");
    experiment->add_option("--config", config_path, "key = value file; its entries override flags");
    experiment->add_option("--out", out_path, "report JSON (default: stdout)");

    // fig4
    std::string fig4_in;
    std::string fig4_measure_path;
    auto* fig4 = app.add_subcommand("fig4", "dtm vs kernel smoothing sweep on the three-loop example");
    fig4->add_option("--in", fig4_in, "three-loop complex (default: generated)");
    fig4->add_option("--measure", fig4_measure_path, "weighted points CSV (default: generated)");
    fig4->add_option("--threads", threads, "0: REEB_THREADS if set, else 1");
    fig4->add_option("--config", config_path, "key = value file; its entries override flags");
    fig4->add_option("--out", out_path, "report JSON (default: stdout)");
    fig4->add_option("--dot", dot_path, "stem for <stem>.dtm.dot and <stem>.kernel.dot at the shown scale");

    // fixtures
    std::string out_dir = ".";
    auto* fixtures = app.add_subcommand("fixtures", "write the shipped meshes and the example measure");
    fixtures->add_option("--out-dir", out_dir);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    if (args.empty()) argv.push_back("reebmm");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (build->parsed()) {
            const auto in = load(build_in);
            emit_graph(reeb_graph(in.doc.complex, in.f), out_path, dot_path, out);
            return kExitOk;
        }

        if (smooth->parsed()) {
            const auto in = load(smooth_in);
            ThickenOptions opts;
            if (layers % 2 == 0) throw std::invalid_argument("--layers must be odd");
            opts.layers = layers;
            const auto& X = in.doc.complex;
            ReebGraph g;
            if (eps) {
                g = smooth_global(X, in.f, *eps, opts);
            } else if (dtm_mass || sigma) {
                if (measure_path.empty()) throw std::invalid_argument("--dtm and --kernel need --measure");
                const auto mu = load_weighted_points(measure_path);
                const double floor = rmin ? *rmin : default_floor(X);
                const auto factor = dtm_mass ? SmoothingFactor::dtm(X, mu, *dtm_mass, floor)
                                             : SmoothingFactor::kernel(X, mu, KernelSpec::gaussian(*sigma), floor);
                g = smooth_local(X, in.f, factor, opts);
            } else {
                throw std::invalid_argument("smooth needs one of --eps, --dtm, --kernel");
            }
            emit_graph(g, out_path, dot_path, out);
            return kExitOk;
        }

        if (range->parsed()) {
            const auto in = load(range_in);
            const auto mu = load_weighted_points(range_measure);
            RangeOptions opts;
            opts.subdivide_at_knots = subdivide;
            emit_graph(range_integrated_reeb(in.doc.complex, in.f, mu, opts), out_path, dot_path, out);
            return kExitOk;
        }

        if (diagram->parsed()) {
            ReebGraph g;
            if (!graph_path.empty()) {
                if (!diagram_in.in.empty()) throw std::invalid_argument("give either --graph or --in, not both");
                g = load_graph(graph_path);
            } else if (!diagram_in.in.empty()) {
                const auto in = load(diagram_in);
                g = reeb_graph(in.doc.complex, in.f);
            } else {
                throw std::invalid_argument("diagram needs --in or --graph");
            }
            emit(to_json(extended_persistence(g)), out_path, out);
            return kExitOk;
        }

        if (compare->parsed()) {
            const auto g = load_graph(graph_a);
            const auto h = load_graph(graph_b);
            const double d = bottleneck(extended_persistence(g), extended_persistence(h));
            nlohmann::json j{{"bottleneck", d}, {"c_proxy", c_proxy}, {"lower_bound", d / c_proxy}};
            // The exact test is only attempted where its guard allows.
            if (std::max(g.num_nodes(), h.num_nodes()) <= kIsomorphismMaxNodes) {
                j["isomorphic"] = is_isomorphic(g, h, tolerance);
            } else {
                j["isomorphic"] = nullptr;
            }
            emit(j, out_path, out);
            return kExitOk;
        }

        if (experiment->parsed()) {
            ExperimentConfig cfg;
            if (seed) cfg.seed = *seed;
            if (trials) cfg.trials = *trials;
            if (threads) cfg.threads = *threads;
            if (!config_path.empty()) cfg = load_config(config_path, cfg);
            cfg.validate();
            const auto report = run_stability(cfg, stability_mode_from_string(mode_name));
            emit(to_json(report), out_path, out);
            if (report.violations != 0) {
                err << report.violations << " of " << report.trials.size() << " trials violated the bound\n";
                return kExitCheckFailed;
            }
            return kExitOk;
        }

        if (fig4->parsed()) {
            ExperimentConfig cfg;
            if (threads) cfg.threads = *threads;
            if (!config_path.empty()) cfg = load_config(config_path, cfg);
            const auto X = fig4_in.empty() ? fig4_mesh() : load_complex(fig4_in).complex;
            const auto mu = fig4_measure_path.empty() ? fig4_measure() : load_weighted_points(fig4_measure_path);
            const auto loops = fig4_loops();
            const auto report = run_fig4(cfg, X, mu, loops, fig4_vertex_loops(X));
            emit(to_json(report), out_path, out);
            if (!dot_path.empty()) {
                write_file(dot_path + ".dtm.dot", to_dot(report.dtm_graph));
                write_file(dot_path + ".kernel.dot", to_dot(report.kernel_graph));
            }
            if (!report.crossover) {
                err << "no scale separates the dtm and kernel survivors\n";
                return kExitCheckFailed;
            }
            return kExitOk;
        }

        if (fixtures->parsed()) {
            const std::string dir = out_dir.empty() ? std::string(".") : out_dir;
            auto off = [&](const std::string& name, const SimplicialComplex& X) {
                std::ostringstream ss;
                write_off(ss, X);
                write_file(dir + "/" + name, ss.str());
            };
            off("circle.off", circle_mesh());
            off("torus.off", torus_mesh());
            write_file(dir + "/fig4.json", complex_to_json(fig4_mesh()).dump(2) + "\n");
            std::ostringstream ss;
            write_weighted_points(ss, fig4_measure());
            write_file(dir + "/fig4_measure.csv", ss.str());
            return kExitOk;
        }
    } catch (const GuardError& e) {
        err << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitParse;
}

}  // namespace reebmm::cli

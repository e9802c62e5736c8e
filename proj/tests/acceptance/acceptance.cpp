// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "reebmm/diagram.hpp"
#include "reebmm/experiment.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/io.hpp"
#include "reebmm/measure.hpp"
#include "reebmm/range.hpp"
#include "reebmm/reeb_graph.hpp"
#include "reebmm/smoothing.hpp"

using namespace reebmm;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s [%d] %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
}

constexpr std::size_t kLargeGraphNodes = 4096;

std::vector<SimplicialComplex> fixtures() { return {circle_mesh(), torus_mesh(), fig4_mesh()}; }

ScalarField random_field(std::size_t n, std::mt19937_64& rng, bool quantized) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> q(0, 4);
    std::vector<double> v(n);
    for (auto& x : v) x = quantized ? static_cast<double>(q(rng)) : u(rng);
    return ScalarField(std::move(v));
}

EmpiricalMeasure random_measure(int dim, std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c(dim * n), w(n);
    for (auto& x : c) x = u(rng);
    for (auto& x : w) x = 0.05 + u(rng);
    return EmpiricalMeasure(dim, std::move(c), std::move(w));
}

EmpiricalMeasure jittered(const EmpiricalMeasure& mu, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::uniform_real_distribution<double> w(0.5, 1.5);
    std::vector<double> c(mu.all_coords().begin(), mu.all_coords().end());
    for (auto& x : c) x += u(rng);
    std::vector<double> m(mu.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mu.mass(i) * w(rng);
    return EmpiricalMeasure(mu.dim(), std::move(c), std::move(m));
}

Outcome criterion1() {
    std::mt19937_64 rng(101);
    std::size_t total = 0, agree = 0, largest = 0;
    const auto meshes = fixtures();
    for (const auto& X : meshes) {
        for (int k = 0; k < 20; ++k) {
            const auto f = random_field(X.num_vertices(), rng, k % 4 == 3);
            const auto g = reeb_graph(X, f);
            const auto h = slab_oracle(X, f);
            largest = std::max({largest, g.num_nodes(), h.num_nodes()});
            ++total;
            // Noise fields on the torus give graphs past the default search limit;
            // distinct values keep the matching search linear, so lift the limit.
            if (is_isomorphic(g, h, 1e-9, kLargeGraphNodes)) ++agree;
        }
    }
    std::ostringstream s;
    s << agree << "/" << total << " random fields on 3 meshes isomorphic to the slab oracle, up to " << largest
      << " nodes";
    return {agree == total && total >= 50, s.str()};
}

Outcome criterion2() {
    const auto T = torus_mesh();
    const auto g = reeb_graph(T, height_field(T));
    auto deg = g.degrees();
    std::sort(deg.begin(), deg.end());
    const bool torus_ok = g.num_nodes() == 4 && deg == std::vector<std::size_t>{1, 1, 3, 3} && betti1(g) == 1 &&
                          is_isomorphic(g, slab_oracle(T, height_field(T)), 1e-9);

    const auto C = circle_mesh();
    const auto h = reeb_graph(C, height_field(C));
    const bool circle_ok = h.num_nodes() == 2 && h.num_edges() == 2 && h.edges[0] == h.edges[1];
    std::ostringstream s;
    s << "torus " << g.num_nodes() << " nodes, degrees {" << deg[0] << "," << deg[1] << "," << deg[2] << ","
      << deg[3] << "}, b1=" << betti1(g) << "; circle " << h.num_nodes() << " nodes, " << h.num_edges()
      << " parallel edges";
    return {torus_ok && circle_ok, s.str()};
}

Outcome criterion3() {
    const auto C = circle_mesh();
    const auto f = height_field(C);
    const double L = f.max() - f.min();
    const double eps[] = {0.5, 0.9, 1.1};
    const std::size_t want[] = {1, 1, 0};
    bool ok = std::abs(L - 2.0) < 1e-12;
    std::ostringstream s;
    s << "L=" << L;
    for (int i = 0; i < 3; ++i) {
        const auto g = smooth_global(C, f, eps[i]);
        const auto b = betti1(g);
        ok = ok && b == want[i];
        s << "; eps=" << eps[i] << " b1=" << b;
        if (eps[i] < L / 2.0) {
            const auto loops = extended_persistence(g).select(1, PointClass::extended);
            if (loops.size() != 1) {
                ok = false;
                continue;
            }
            const double range = loops[0].birth - loops[0].death;
            ok = ok && std::abs(range - (L - 2.0 * eps[i])) <= 1e-9;
            s << " loop range " << range;
        }
    }
    return {ok, s.str()};
}

Outcome criterion4() {
    std::size_t total = 0, agree = 0;
    for (const auto& X : fixtures()) {
        const auto f = height_field(X);
        for (double eps : {0.2, 0.6, 1.3}) {
            ++total;
            const auto local = smooth_local(X, f, SmoothingFactor::constant(X, eps));
            if (is_isomorphic(local, smooth_global(X, f, eps), 1e-9)) ++agree;
        }
    }
    std::ostringstream s;
    s << agree << "/" << total << " (mesh, eps) cases isomorphic";
    return {agree == total, s.str()};
}

Outcome criterion5() {
    std::mt19937_64 rng(505);
    std::uniform_int_distribution<std::size_t> size(1, 32);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::uniform_real_distribution<double> bw(0.1, 1.0);
    std::vector<std::vector<double>> grid;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 10; ++j) grid.push_back({-0.5 + 2.0 * i / 19.0, -0.5 + 2.0 * j / 9.0});
    }
    std::size_t dtm_bad = 0, ker_bad = 0;
    double dtm_slack = INFINITY, ker_slack = INFINITY;
    for (int trial = 0; trial < 100; ++trial) {
        const auto mu = random_measure(2, size(rng), rng);
        const auto nu = trial % 2 == 0 ? jittered(mu, 0.1, rng) : random_measure(2, size(rng), rng);
        const double m = mass(rng);
        const auto K = KernelSpec::gaussian(bw(rng));
        const double w2 = wasserstein2(mu, nu);
        const double dk = kernel_distance(mu, nu, K);
        double sup_dtm = 0.0, sup_ker = 0.0;
        for (const auto& x : grid) {
            sup_dtm = std::max(sup_dtm, std::abs(dtm(mu, m, x) - dtm(nu, m, x)));
            sup_ker = std::max(sup_ker, std::abs(kdist_to_measure(mu, K, x) - kdist_to_measure(nu, K, x)));
        }
        const double rhs_dtm = w2 / std::sqrt(m);
        if (sup_dtm > rhs_dtm + 1e-9) ++dtm_bad;
        if (sup_ker > dk + 1e-9) ++ker_bad;
        dtm_slack = std::min(dtm_slack, rhs_dtm - sup_dtm);
        ker_slack = std::min(ker_slack, dk - sup_ker);
    }
    std::ostringstream s;
    s << "100 pairs, 200-point grid: dtm violations " << dtm_bad << " (min slack " << dtm_slack
      << "), kernel violations " << ker_bad << " (min slack " << ker_slack << ")";
    return {dtm_bad == 0 && ker_bad == 0, s.str()};
}

Outcome stability_run(StabilityMode mode, std::size_t trials) {
    ExperimentConfig cfg;
    cfg.trials = trials;
    const auto rep = run_stability(cfg, mode);
    double slack = INFINITY;
    for (const auto& t : rep.trials) slack = std::min(slack, t.rhs - t.lower_bound);
    std::ostringstream s;
    s << to_string(mode) << ": " << rep.trials.size() << " trials, " << rep.violations
      << " violations, max LB " << rep.max_lower_bound << ", min slack " << slack;
    return {rep.violations == 0 && rep.trials.size() == trials, s.str()};
}

Outcome criterion6() {
    const auto a = stability_run(StabilityMode::dtm, 100);
    const auto b = stability_run(StabilityMode::kernel, 100);
    return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Outcome criterion7() {
    const auto run = stability_run(StabilityMode::range, 100);

    // Samples on a dyadic lattice so every CDF knot is a grid point of the oracle.
    std::mt19937_64 rng(707);
    std::uniform_int_distribution<int> cell(0, 1024);
    std::uniform_int_distribution<std::size_t> size(2, 12);
    std::uniform_real_distribution<double> w(0.1, 1.0);
    auto sample = [&](std::vector<double>& s, std::vector<double>& m) {
        const std::size_t n = size(rng);
        do {
            s.clear();
            m.clear();
            for (std::size_t i = 0; i < n; ++i) {
                s.push_back(cell(rng) / 1024.0);
                m.push_back(w(rng));
            }
        } while (std::set<double>(s.begin(), s.end()).size() < 2);
    };
    constexpr double lo = -2.0, hi = 2.0;
    constexpr std::size_t steps = 1u << 20;
    double worst_ks = 0.0, worst_lip = 0.0;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> s1, m1, s2, m2;
        sample(s1, m1);
        sample(s2, m2);
        const auto F = empirical_cdf(s1, m1);
        const auto G = empirical_cdf(s2, m2);
        const oracle::PlCdf Fo(s1, m1), Go(s2, m2);
        worst_ks = std::max(worst_ks, std::abs(ks_distance(F, G) - oracle::ks_grid(Fo, Go, lo, hi, steps)));
        worst_lip = std::max(worst_lip, std::abs(F.lipschitz() - oracle::lipschitz_grid(Fo, lo, hi, steps)));
    }
    std::ostringstream s;
    s << run.detail << "; dense-grid oracle over 100 CDF pairs: max |KS err| " << worst_ks << ", max |Lip err| "
      << worst_lip;
    return {run.pass && worst_ks <= 1e-9 && worst_lip <= 1e-9, s.str()};
}

Outcome criterion8() {
    const auto T = torus_mesh();
    const auto f = height_field(T);
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::uniform_int_distribution<int> n(3, 30);
    int passed = 0;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> s{f.min() - 0.2, f.max() + 0.2};
        const int extra = n(rng);
        for (int i = 0; i < extra; ++i) s.push_back(u(rng));
        std::vector<double> m(s.size());
        for (auto& x : m) x = w(rng);
        const auto F = empirical_cdf(s, m);
        if (check_monotone_invariance(T, f, F).passed()) ++passed;
    }
    std::ostringstream s;
    s << passed << "/20 strictly increasing CDFs preserve the torus graph";
    return {passed == 20, s.str()};
}

Outcome criterion9() {
    const std::string dir = REEBMM_DATA_DIR;
    const auto X = load_complex(dir + "/fig4.json").complex;
    const auto mu = load_weighted_points(dir + "/fig4_measure.csv");
    const auto loops = fig4_loops();
    const auto rep = run_fig4(ExperimentConfig{}, X, mu, loops, fig4_vertex_loops(X));
    std::ostringstream s;
    s << "crossover scales:";
    for (const auto& row : rep.scales) {
        if (row.crossover) s << " " << row.scale;
    }
    const auto& first = rep.scales.front();
    const auto& last = rep.scales.back();
    s << "; smallest scale b1 " << first.dtm.betti1 << "/" << first.kernel.betti1 << ", largest " << last.dtm.betti1
      << "/" << last.kernel.betti1;
    return {rep.crossover, s.str()};
}

Outcome criterion10() {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> r(0.05, 0.4);
    std::uniform_real_distribution<double> d(-0.2, 0.2);
    std::size_t checked = 0, bad = 0;
    double worst = 0.0;
    for (const auto& X : fixtures()) {
        const std::size_t n = X.num_vertices();
        const auto f = height_field(X);
        std::vector<double> a(n), b(n), g(n);
        for (std::size_t v = 0; v < n; ++v) {
            a[v] = r(rng);
            b[v] = r(rng);
            g[v] = f[v] + d(rng);
        }
        const double floor = default_floor(X);
        std::vector<double> fv, gv;
        for (std::size_t v = 0; v < n; ++v) {
            const auto c = X.coords(static_cast<VertexId>(v));
            fv.insert(fv.end(), {c[0], c[1]});
            gv.insert(gv.end(), {c[0] + d(rng), c[1] + d(rng)});
        }
        const InterleavingMapPair pairs[] = {
            build_local_interleaving(X, f, SmoothingFactor::from_field(ScalarField(a), floor),
                                     SmoothingFactor::from_field(ScalarField(b), floor)),
            build_ambient_interleaving(X, f, ScalarField(g)),
            build_ambient_interleaving(X, VectorField(2, fv), VectorField(2, gv)),
        };
        for (const auto& p : pairs) {
            ++checked;
            const auto pres = verify_function_preservation(p, 1e-12);
            const auto comm = verify_commutativity(p, X);
            worst = std::max(worst, pres.max_violation);
            if (!pres.passed || !comm.passed) ++bad;
        }
    }
    std::ostringstream s;
    s << checked << " map pairs (local, ambient d=1, ambient d=2 on 3 meshes), " << bad
      << " failing; max preservation error " << worst;
    return {bad == 0, s.str()};
}

Outcome criterion11() {
    std::mt19937_64 rng(1111);
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_diagram = [&]() {
        PersistenceDiagram d;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            DiagramPoint p;
            p.birth = u(rng);
            p.death = u(rng);
            p.cls = static_cast<PointClass>(kind(rng));
            p.dim = p.cls == PointClass::ordinary ? 0 : (p.cls == PointClass::relative ? 1 : i % 2);
            if (p.cls == PointClass::ordinary && p.birth > p.death) std::swap(p.birth, p.death);
            d.points.push_back(p);
        }
        return d;
    };
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto a = random_diagram();
        const auto b = random_diagram();
        worst = std::max(worst, std::abs(bottleneck(a, b) - oracle::bottleneck_exhaustive(a, b)));
    }
    std::ostringstream s;
    s << "200 random pairs (<= 6 points), max deviation from exhaustive matching " << worst;
    return {worst <= 1e-12, s.str()};
}

}  // namespace

int main() {
    report(1, "reeb_graph matches slab_oracle", criterion1);
    report(2, "torus and circle height graphs", criterion2);
    report(3, "eps-smoothing contracts the circle loop", criterion3);
    report(4, "constant local factor equals global smoothing", criterion4);
    report(5, "dtm and kernel function stability", criterion5);
    report(6, "smoothed-graph stability harness", criterion6);
    report(7, "range-integrated stability", criterion7);
    report(8, "monotone reparametrization invariance", criterion8);
    report(9, "three-loop dtm vs kernel crossover", criterion9);
    report(10, "interleaving maps preserve values and commute", criterion10);
    report(11, "bottleneck matches exhaustive matching", criterion11);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

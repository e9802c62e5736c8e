#include "reebmm/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace reebmm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Circle {
    double cx;
    double cy;
    double radius;
};

constexpr Circle kOuter{0.0, 0.0, 0.5};
constexpr Circle kAlpha{-0.2, -0.1, 0.225};
constexpr Circle kBeta{0.22, 0.2, 0.15};

// Closed polygon through `samples` evenly spaced angles plus the extra angles given,
// returning the vertex id placed at each extra angle.
std::vector<VertexId> add_loop(ComplexBuilder& builder, const Circle& c, std::size_t samples,
                               const std::vector<double>& extra) {
    std::vector<double> angles;
    for (std::size_t k = 0; k < samples; ++k) angles.push_back(kTwoPi * (static_cast<double>(k) + 0.5) / samples);
    angles.insert(angles.end(), extra.begin(), extra.end());
    std::sort(angles.begin(), angles.end());

    std::vector<VertexId> ids;
    for (double a : angles) ids.push_back(builder.add_vertex({c.cx + c.radius * std::cos(a), c.cy + c.radius * std::sin(a)}));
    for (std::size_t k = 0; k < ids.size(); ++k) builder.add_simplex({ids[k], ids[(k + 1) % ids.size()]});

    std::vector<VertexId> marked;
    for (double a : extra) {
        const auto it = std::find(angles.begin(), angles.end(), a);
        marked.push_back(ids[static_cast<std::size_t>(it - angles.begin())]);
    }
    return marked;
}

void add_bridge(ComplexBuilder& builder, VertexId from, VertexId to, std::span<const double> a,
                std::span<const double> b, std::size_t segments) {
    VertexId prev = from;
    for (std::size_t k = 1; k < segments; ++k) {
        const double s = static_cast<double>(k) / segments;
        const VertexId v = builder.add_vertex({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])});
        builder.add_simplex({prev, v});
        prev = v;
    }
    builder.add_simplex({prev, to});
}

}  // namespace

SimplicialComplex circle_mesh(std::size_t n) {
    if (n < 3) throw std::invalid_argument("circle needs at least 3 vertices");
    ComplexBuilder builder(2);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / n;
        builder.add_vertex({std::sin(a), 1.0 - std::cos(a)});
    }
    for (std::size_t k = 0; k < n; ++k) {
        builder.add_simplex({static_cast<VertexId>(k), static_cast<VertexId>((k + 1) % n)});
    }
    return builder.build();
}

SimplicialComplex torus_mesh(std::size_t n, double major, double minor) {
    if (n < 3) throw std::invalid_argument("torus grid needs n >= 3");
    if (!(major > minor && minor > 0.0)) throw std::invalid_argument("torus radii must satisfy major > minor > 0");
    ComplexBuilder builder(3);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = kTwoPi * (static_cast<double>(i) + 0.1) / n;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = kTwoPi * (static_cast<double>(j) + 0.25) / n;
            const double ring = major + minor * std::cos(v);
            builder.add_vertex({ring * std::cos(u), ring * std::sin(u), minor * std::sin(v)});
        }
    }
    auto id = [n](std::size_t i, std::size_t j) { return static_cast<VertexId>((i % n) * n + (j % n)); };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            builder.add_simplex({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            builder.add_simplex({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return builder.build();
}

SimplicialComplex fig4_mesh() {
    constexpr double kDown = -std::numbers::pi / 2.0;
    constexpr double kUp = std::numbers::pi / 2.0;
    // Outer circle points directly below alpha and directly above beta.
    const double below_alpha = std::atan2(-std::sqrt(kOuter.radius * kOuter.radius - kAlpha.cx * kAlpha.cx), kAlpha.cx);
    const double above_beta = std::atan2(std::sqrt(kOuter.radius * kOuter.radius - kBeta.cx * kBeta.cx), kBeta.cx);

    ComplexBuilder builder(2);
    const auto outer = add_loop(builder, kOuter, 48, {below_alpha + kTwoPi, above_beta});
    const auto alpha = add_loop(builder, kAlpha, 24, {kDown + kTwoPi});
    const auto beta = add_loop(builder, kBeta, 20, {kUp});

    auto coords_of = [&](const Circle& c, double a) {
        return std::array<double, 2>{c.cx + c.radius * std::cos(a), c.cy + c.radius * std::sin(a)};
    };
    const auto alpha_bottom = coords_of(kAlpha, kDown);
    const auto outer_low = coords_of(kOuter, below_alpha);
    const auto beta_top = coords_of(kBeta, kUp);
    const auto outer_high = coords_of(kOuter, above_beta);
    add_bridge(builder, alpha[0], outer[0], alpha_bottom, outer_low, 4);
    add_bridge(builder, beta[0], outer[1], beta_top, outer_high, 3);
    return builder.build();
}

EmpiricalMeasure fig4_measure() {
    std::vector<double> coords;
    std::vector<double> weights;
    auto add = [&](double x, double y, double w) {
        coords.push_back(x);
        coords.push_back(y);
        weights.push_back(w);
    };
    // Heavy sunflower cluster well inside alpha: most of the mass, none of it on the loop.
    constexpr std::size_t kCloud = 20;
    constexpr double kCloudRadius = 0.1;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < kCloud; ++k) {
        const double rho = kCloudRadius * std::sqrt((static_cast<double>(k) + 0.5) / kCloud);
        const double a = golden * static_cast<double>(k);
        add(kAlpha.cx + rho * std::cos(a), kAlpha.cy + rho * std::sin(a), 0.8 / kCloud);
    }
    // Light but dense rings lying on beta and on the outer loop.
    constexpr std::size_t kBetaRing = 60;
    for (std::size_t k = 0; k < kBetaRing; ++k) {
        const double a = std::numbers::pi / 2.0 + kTwoPi * static_cast<double>(k) / kBetaRing;
        add(kBeta.cx + kBeta.radius * std::cos(a), kBeta.cy + kBeta.radius * std::sin(a), 0.1 / kBetaRing);
    }
    constexpr std::size_t kOuterRing = 96;
    for (std::size_t k = 0; k < kOuterRing; ++k) {
        const double a = kTwoPi * (static_cast<double>(k) + 0.25) / kOuterRing;
        add(kOuter.cx + kOuter.radius * std::cos(a), kOuter.cy + kOuter.radius * std::sin(a), 0.1 / kOuterRing);
    }
    return EmpiricalMeasure(2, std::move(coords), std::move(weights));
}

std::array<LoopRange, 3> fig4_loops() {
    return {LoopRange{"outer", kOuter.cy - kOuter.radius, kOuter.cy + kOuter.radius},
            LoopRange{"alpha", kAlpha.cy - kAlpha.radius, kAlpha.cy + kAlpha.radius},
            LoopRange{"beta", kBeta.cy - kBeta.radius, kBeta.cy + kBeta.radius}};
}

std::vector<int> fig4_vertex_loops(const SimplicialComplex& complex) {
    constexpr std::array<Circle, 3> circles{kOuter, kAlpha, kBeta};
    std::vector<int> out(complex.num_vertices(), -1);
    for (std::size_t v = 0; v < out.size(); ++v) {
        const auto x = complex.coords(static_cast<VertexId>(v));
        if (x.size() < 2) continue;
        for (std::size_t k = 0; k < circles.size(); ++k) {
            const double d = std::hypot(x[0] - circles[k].cx, x[1] - circles[k].cy);
            if (std::abs(d - circles[k].radius) <= 1e-9) out[v] = static_cast<int>(k);
        }
    }
    return out;
}

ScalarField height_field(const SimplicialComplex& complex) {
    const int axis = complex.coord_dim() >= 2 ? 1 : 0;
    std::vector<double> values(complex.num_vertices());
    for (std::size_t v = 0; v < values.size(); ++v) values[v] = complex.coords(static_cast<VertexId>(v))[axis];
    return ScalarField(std::move(values));
}

std::vector<std::string> fixture_names() { return {"circle", "torus", "fig4"}; }

SimplicialComplex fixture_mesh(const std::string& name) {
    if (name == "circle") return circle_mesh();
    if (name == "torus") return torus_mesh();
    if (name == "fig4") return fig4_mesh();
    throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace reebmm

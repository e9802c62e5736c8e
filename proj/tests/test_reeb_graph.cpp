#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "reebmm/error.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/reeb_graph.hpp"

using namespace reebmm;

namespace {

SimplicialComplex path(std::size_t n) {
    ComplexBuilder b(1);
    for (std::size_t i = 0; i < n; ++i) b.add_vertex({static_cast<double>(i)});
    for (std::size_t i = 0; i + 1 < n; ++i) b.add_simplex({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    return b.build();
}

ScalarField noise(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return ScalarField(std::move(v));
}

ReebGraph shifted(ReebGraph g, double by) {
    for (auto& n : g.nodes) n.value += by;
    return g;
}

}  // namespace

TEST(ReebGraph, CircleHasTwoParallelEdges) {
    const auto C = circle_mesh();
    const auto g = reeb_graph(C, height_field(C));
    ASSERT_EQ(g.num_nodes(), 2u);
    ASSERT_EQ(g.num_edges(), 2u);
    EXPECT_EQ(g.edges[0], g.edges[1]);
    EXPECT_EQ(betti1(g), 1u);
    EXPECT_DOUBLE_EQ(g.value(g.edges[0][0]), 0.0);
    EXPECT_DOUBLE_EQ(g.value(g.edges[0][1]), 2.0);
    EXPECT_TRUE(is_isomorphic(g, slab_oracle(C, height_field(C)), 1e-9));
}

TEST(ReebGraph, UprightTorus) {
    const auto T = torus_mesh();
    const auto f = height_field(T);
    const auto g = reeb_graph(T, f);
    auto deg = g.degrees();
    std::sort(deg.begin(), deg.end());
    EXPECT_EQ(deg, (std::vector<std::size_t>{1, 1, 3, 3}));
    EXPECT_EQ(betti1(g), 1u);
    EXPECT_TRUE(is_isomorphic(g, slab_oracle(T, f), 1e-9));
}

TEST(ReebGraph, ConstantFieldIsOneNode) {
    const auto T = torus_mesh(6);
    const ScalarField f(std::vector<double>(T.num_vertices(), 4.0));
    const auto g = reeb_graph(T, f);
    EXPECT_EQ(g.num_nodes(), 1u);
    EXPECT_EQ(g.num_edges(), 0u);
    EXPECT_DOUBLE_EQ(g.value(0), 4.0);
    EXPECT_EQ(slab_oracle(T, f).num_nodes(), 1u);
}

TEST(ReebGraph, Fig4SpaceHasThreeLoops) {
    const auto X = fig4_mesh();
    const auto f = height_field(X);
    const auto g = reeb_graph(X, f);
    EXPECT_EQ(betti1(g), 3u);
    EXPECT_EQ(betti1(slab_oracle(X, f)), 3u);
    EXPECT_TRUE(is_isomorphic(g, slab_oracle(X, f), 1e-9));
}

TEST(ReebGraph, MonotonePathCollapsesToOneEdge) {
    const auto g = reeb_graph(path(5), ScalarField({0, 1, 1, 1, 2}));
    EXPECT_EQ(g.num_nodes(), 2u);
    EXPECT_EQ(g.num_edges(), 1u);
    EXPECT_EQ(betti1(g), 0u);
}

TEST(ReebGraph, PlateauCollapsesToOneNode) {
    // 0 - 1 - 1 - 0 with the two middle vertices flat: a maximum plateau.
    const auto g = reeb_graph(path(4), ScalarField({0, 1, 1, 0}));
    ASSERT_EQ(g.num_nodes(), 3u);
    std::multiset<double> values;
    for (const auto& n : g.nodes) values.insert(n.value);
    EXPECT_EQ(values, (std::multiset<double>{0, 0, 1}));
}

TEST(ReebGraph, DisconnectedInputGivesDisconnectedGraph) {
    ComplexBuilder b(1);
    for (int i = 0; i < 4; ++i) b.add_vertex({static_cast<double>(i)});
    b.add_simplex({0, 1});
    b.add_simplex({2, 3});
    const auto g = reeb_graph(b.build(), ScalarField({0, 1, 0, 1}));
    EXPECT_EQ(connected_components(g), 2u);
    EXPECT_EQ(betti1(g), 0u);
}

TEST(ReebGraph, InvariantsOnRandomFields) {
    std::mt19937_64 rng(21);
    for (const auto& X : {circle_mesh(), torus_mesh(8), fig4_mesh()}) {
        for (int t = 0; t < 5; ++t) {
            const auto f = noise(X.num_vertices(), rng);
            const auto g = reeb_graph(X, f);
            std::string why;
            EXPECT_TRUE(is_valid_reeb_graph(g, &why)) << why;
            const std::set<double> input(f.values().begin(), f.values().end());
            for (const auto& n : g.nodes) {
                EXPECT_TRUE(input.count(n.value));
                ASSERT_TRUE(n.vertex.has_value());
                EXPECT_EQ(f[*n.vertex], n.value);
            }
            EXPECT_TRUE(is_isomorphic(g, slab_oracle(X, f), 1e-9, 4096));
        }
    }
}

TEST(ReebGraph, TetrahedralComplexAgreesWithOracle) {
    // A solid prism cut into 3 tetrahedra, so the sweep sees a genuine 3-complex.
    const auto base = thicken_global(circle_mesh(8), height_field(circle_mesh(8)), 0.3);
    std::mt19937_64 rng(22);
    for (int t = 0; t < 5; ++t) {
        const auto f = noise(base.complex.num_vertices(), rng);
        EXPECT_TRUE(is_isomorphic(reeb_graph(base.complex, f), slab_oracle(base.complex, f), 1e-9, 4096));
    }
    const auto tri = thicken_global(torus_mesh(4), height_field(torus_mesh(4)), 0.5);
    ASSERT_GT(tri.complex.count(3), 0u);
    for (int t = 0; t < 3; ++t) {
        const auto f = noise(tri.complex.num_vertices(), rng);
        EXPECT_TRUE(is_isomorphic(reeb_graph(tri.complex, f), slab_oracle(tri.complex, f), 1e-9, 4096));
    }
}

// A function-preserving simplicial map X -> Y (the double cover of a cycle) sends
// every node of R(X, f) to a point of Y at the same value.
TEST(ReebGraph, DoubleCoverPreservesNodeValues) {
    const std::size_t n = 12;
    const auto Y = circle_mesh(n);
    const auto g = height_field(Y);
    ComplexBuilder b(1);
    for (std::size_t i = 0; i < 2 * n; ++i) b.add_vertex({static_cast<double>(i)});
    for (std::size_t i = 0; i < 2 * n; ++i) {
        b.add_simplex({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % (2 * n))});
    }
    std::vector<double> fx(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) fx[i] = g[i % n];
    const auto gx = reeb_graph(b.build(), ScalarField(fx));
    for (const auto& node : gx.nodes) {
        ASSERT_TRUE(node.vertex.has_value());
        EXPECT_EQ(node.value, g[*node.vertex % n]);
    }
    EXPECT_EQ(betti1(gx), 1u);
}

TEST(Isomorphism, PositiveAndNegativeCases) {
    const auto T = torus_mesh();
    const auto g = reeb_graph(T, height_field(T));
    EXPECT_TRUE(is_isomorphic(g, g, 1e-9));
    EXPECT_FALSE(is_isomorphic(g, shifted(g, 2e-9), 1e-9));
    EXPECT_TRUE(is_isomorphic(g, shifted(g, 0.5e-9), 1e-9));
    EXPECT_TRUE(is_isomorphic_structure(g, shifted(g, 10.0)));

    ReebGraph circle{{{0.0, {}}, {1.0, {}}}, {{0, 1}, {0, 1}}};
    ReebGraph interval{{{0.0, {}}, {1.0, {}}}, {{0, 1}}};
    EXPECT_FALSE(is_isomorphic(circle, interval, 1e-9));
}

TEST(Isomorphism, RelabelledGraphsMatch) {
    std::mt19937_64 rng(23);
    const auto X = fig4_mesh();
    const auto g = reeb_graph(X, noise(X.num_vertices(), rng));
    std::vector<std::size_t> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ReebGraph h;
    h.nodes.resize(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) h.nodes[perm[i]] = g.nodes[i];
    for (const auto& e : g.edges) h.edges.push_back({perm[e[0]], perm[e[1]]});
    std::shuffle(h.edges.begin(), h.edges.end(), rng);
    EXPECT_TRUE(is_isomorphic(g, h, 1e-9, 4096));
    h.edges.pop_back();
    EXPECT_FALSE(is_isomorphic(g, h, 1e-9, 4096));
}

TEST(Guards, SizeLimits) {
    std::mt19937_64 rng(24);
    const auto big = torus_mesh(48);
    ASSERT_GT(big.total_simplices(), kSlabOracleMaxSimplices);
    EXPECT_THROW(slab_oracle(big, height_field(big)), GuardError);

    const auto T = torus_mesh();
    const auto g = reeb_graph(T, noise(T.num_vertices(), rng));
    ASSERT_GT(g.num_nodes(), kIsomorphismMaxNodes);
    EXPECT_THROW(is_isomorphic(g, g, 1e-9), GuardError);
}

TEST(Serialization, JsonRoundTripAndDot) {
    const auto T = torus_mesh();
    const auto g = reeb_graph(T, height_field(T));
    const auto h = reeb_graph_from_json(to_json(g));
    EXPECT_TRUE(is_isomorphic(g, h, 0.0));
    EXPECT_EQ(h.nodes[0].vertex, g.nodes[0].vertex);

    const auto dot = to_dot(g);
    EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
    EXPECT_NE(dot.find("rank=same"), std::string::npos);
}

TEST(Serialization, RejectsInvalidGraphs) {
    EXPECT_THROW(reeb_graph_from_json(nlohmann::json::parse(R"({"nodes":[{"id":0,"value":1}],"edges":[[0,0]]})")),
                 ParseError);
    EXPECT_THROW(reeb_graph_from_json(nlohmann::json::parse(
                     R"({"nodes":[{"id":0,"value":1},{"id":1,"value":2}],"edges":[[0,5]]})")),
                 ParseError);
    EXPECT_THROW(reeb_graph_from_json(nlohmann::json::parse(R"({"edges":[]})")), ParseError);
}

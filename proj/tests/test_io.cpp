#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "reebmm/diagram.hpp"
#include "reebmm/error.hpp"
#include "reebmm/fixtures.hpp"
#include "reebmm/io.hpp"
#include "reebmm/reeb_graph.hpp"

using namespace reebmm;

namespace {

std::size_t error_line(const std::string& text) {
    try {
        parse_off(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return SIZE_MAX;
}

}  // namespace

TEST(Off, SingleTriangle) {
    const auto X = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
    EXPECT_EQ(X.num_vertices(), 3u);
    EXPECT_EQ(X.count(1), 3u);
    EXPECT_EQ(X.count(2), 1u);
}

TEST(Off, NoFacesGivesIsolatedVertices) {
    const auto X = parse_off("OFF\n# comment\n2 0 0\n0 0 0\n1 1 1\n");
    EXPECT_EQ(X.num_vertices(), 2u);
    EXPECT_EQ(X.dimension(), 0);
}

TEST(Off, QuadIsFanTriangulated) {
    const auto X = parse_off("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    EXPECT_EQ(X.count(2), 2u);
    EXPECT_EQ(X.count(1), 5u);
}

TEST(Off, ErrorsCarryLineNumbers) {
    EXPECT_EQ(error_line("OFX\n1 0 0\n0 0 0\n"), 1u);
    EXPECT_EQ(error_line("OFF\n2 0 0\n0 0 0\n1 zz 0\n"), 4u);
    EXPECT_EQ(error_line("OFF\n2 1 0\n0 0 0\n1 0 0\n2 0 7\n"), 5u);
    EXPECT_THROW(parse_off(""), ParseError);
    EXPECT_THROW(parse_off("OFF\n3 1 0\n0 0 0\n"), ParseError);
}

TEST(Off, RoundTrip) {
    const auto T = torus_mesh(6);
    std::ostringstream out;
    write_off(out, T);
    const auto U = parse_off(out.str());
    ASSERT_EQ(U.num_vertices(), T.num_vertices());
    for (int d = 0; d <= 2; ++d) EXPECT_EQ(U.count(d), T.count(d));
    for (std::size_t i = 0; i < T.all_coords().size(); ++i) EXPECT_EQ(U.all_coords()[i], T.all_coords()[i]);
}

TEST(WeightedPoints, NormalizesWeights) {
    const auto mu = parse_weighted_points("0,1\n1,1\n");
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_DOUBLE_EQ(mu.mass(0), 0.5);
    EXPECT_DOUBLE_EQ(mu.mass(1), 0.5);
    EXPECT_EQ(mu.dim(), 1);
}

TEST(WeightedPoints, KeepsZeroMassPoints) {
    const auto mu = parse_weighted_points("0,2\n1,0\n");
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_DOUBLE_EQ(mu.mass(0), 1.0);
    EXPECT_DOUBLE_EQ(mu.mass(1), 0.0);
}

TEST(WeightedPoints, HundredRowsSumToOne) {
    std::mt19937_64 rng(70);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(100);
    for (auto& x : w) x = u(rng);
    const double raw = std::accumulate(w.begin(), w.end(), 0.0);
    std::ostringstream text;
    text.precision(17);
    for (int i = 0; i < 100; ++i) text << u(rng) << "," << u(rng) << "," << w[i] * 7.3 / raw << "\n";
    const auto mu = parse_weighted_points(text.str());
    double sum = 0.0;
    for (double m : mu.masses()) sum += m;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(mu.dim(), 2);
}

TEST(WeightedPoints, Errors) {
    EXPECT_THROW(parse_weighted_points("0,-1\n1,2\n"), ParseError);
    EXPECT_THROW(parse_weighted_points("0,0\n1,0\n"), ParseError);
    EXPECT_THROW(parse_weighted_points("0,1\n1,2,3\n"), ParseError);
    EXPECT_THROW(parse_weighted_points(""), ParseError);
    try {
        parse_weighted_points("0,1\n# note\n1,x\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Json, ComplexRoundTripWithField) {
    const auto T = torus_mesh(5);
    const auto f = height_field(T);
    const auto doc = complex_from_json(complex_to_json(T, &f));
    ASSERT_TRUE(doc.field.has_value());
    EXPECT_EQ(doc.complex.count(2), T.count(2));
    for (std::size_t v = 0; v < f.size(); ++v) EXPECT_EQ((*doc.field)[v], f[v]);
}

TEST(Json, ComplexErrors) {
    EXPECT_THROW(complex_from_json(nlohmann::json::parse(R"({"vertices":[]})")), ParseError);
    EXPECT_THROW(complex_from_json(nlohmann::json::parse(
                     R"({"vertices":[{"id":0,"coords":[0]},{"id":0,"coords":[1]}]})")),
                 ParseError);
    EXPECT_THROW(complex_from_json(nlohmann::json::parse(
                     R"({"vertices":[{"id":0,"coords":[0]},{"id":1,"coords":[1]}],"simplices":{"2":[[0,1]]}})")),
                 ParseError);
}

TEST(Json, FieldRoundTrip) {
    const ScalarField f({1.5, -2.0, 3.25});
    const auto g = field_from_json(field_to_json(f));
    EXPECT_EQ(std::vector<double>(g.values().begin(), g.values().end()),
              std::vector<double>(f.values().begin(), f.values().end()));
}

// The files under data/ are what `reebmm fixtures` writes; they must not drift
// from the generators.
TEST(ShippedData, MatchesGenerators) {
    const std::string dir = REEBMM_DATA_DIR;
    auto same = [](const SimplicialComplex& a, const SimplicialComplex& b) {
        ASSERT_EQ(a.num_vertices(), b.num_vertices());
        for (int d = 0; d <= 2; ++d) EXPECT_EQ(a.count(d), b.count(d));
        for (std::size_t v = 0; v < a.num_vertices(); ++v) {
            const auto x = a.coords(static_cast<VertexId>(v));
            const auto y = b.coords(static_cast<VertexId>(v));
            for (int k = 0; k < std::min(a.coord_dim(), b.coord_dim()); ++k) EXPECT_EQ(x[k], y[k]);
        }
    };
    same(load_complex(dir + "/circle.off").complex, circle_mesh());
    same(load_complex(dir + "/torus.off").complex, torus_mesh());
    same(load_complex(dir + "/fig4.json").complex, fig4_mesh());

    const auto mu = load_weighted_points(dir + "/fig4_measure.csv");
    const auto nu = fig4_measure();
    ASSERT_EQ(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        EXPECT_NEAR(mu.mass(i), nu.mass(i), 1e-15);
        for (int k = 0; k < 2; ++k) EXPECT_EQ(mu.point(i)[k], nu.point(i)[k]);
    }
}

TEST(ShippedData, MissingFileIsAParseError) {
    EXPECT_THROW(load_complex("/nonexistent/mesh.off"), ParseError);
    EXPECT_THROW(load_weighted_points("/nonexistent/mu.csv"), ParseError);
}

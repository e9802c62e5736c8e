#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "reebmm/error.hpp"
#include "reebmm/field_expr.hpp"
#include "reebmm/fixtures.hpp"

using namespace reebmm;

TEST(FieldExpression, Arithmetic) {
    EXPECT_EQ(FieldExpression::parse("1 + 2 * 3")(0, 0, 0), 7.0);
    EXPECT_EQ(FieldExpression::parse("(1 + 2) * 3")(0, 0, 0), 9.0);
    EXPECT_EQ(FieldExpression::parse("8 / 4 / 2")(0, 0, 0), 1.0);
    EXPECT_EQ(FieldExpression::parse("5 - 3 - 1")(0, 0, 0), 1.0);
    EXPECT_EQ(FieldExpression::parse("--2")(0, 0, 0), 2.0);
    EXPECT_EQ(FieldExpression::parse("-x*y")(2, 3, 0), -6.0);
    EXPECT_EQ(FieldExpression::parse("1.5e1")(0, 0, 0), 15.0);
}

TEST(FieldExpression, Functions) {
    EXPECT_DOUBLE_EQ(FieldExpression::parse("sin(x) + cos(y)")(0.3, 0.4, 0), std::sin(0.3) + std::cos(0.4));
    EXPECT_DOUBLE_EQ(FieldExpression::parse("sqrt(abs(z))")(0, 0, -4), 2.0);
    EXPECT_DOUBLE_EQ(FieldExpression::parse("exp(0)")(0, 0, 0), 1.0);
}

TEST(FieldExpression, EvaluatesOnVertices) {
    const auto C = circle_mesh();
    const auto f = FieldExpression::parse("y").evaluate(C);
    const auto h = height_field(C);
    for (std::size_t v = 0; v < f.size(); ++v) EXPECT_EQ(f[v], h[v]);
    // The circle lives in the plane, so z reads as 0.
    const auto g = FieldExpression::parse("z + 1").evaluate(C);
    for (std::size_t v = 0; v < g.size(); ++v) EXPECT_EQ(g[v], 1.0);
}

TEST(FieldExpression, Errors) {
    for (const std::string bad : {"", "1 +", "(x", "foo(x)", "x y", "w", "2 ** 3", "sin x"}) {
        EXPECT_THROW(FieldExpression::parse(bad), ParseError) << bad;
    }
    try {
        FieldExpression::parse("x + )");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
    }
    EXPECT_THROW(FieldExpression::parse("1 / x").evaluate(circle_mesh()), std::invalid_argument);
}

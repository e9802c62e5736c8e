#pragma once

#include <memory>
#include <string>

#include "reebmm/complex.hpp"

namespace reebmm {

/// Arithmetic expression in the vertex coordinates x, y, z: numbers, + - * /,
/// unary minus, parentheses and sin cos exp sqrt abs. Missing coordinates read as 0.
class FieldExpression {
public:
    /// Throws ParseError naming the offending column.
    static FieldExpression parse(const std::string& text);

    double operator()(double x, double y, double z) const;
    /// Evaluates at every vertex; throws std::invalid_argument on a non-finite result.
    ScalarField evaluate(const SimplicialComplex& complex) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
};

}  // namespace reebmm

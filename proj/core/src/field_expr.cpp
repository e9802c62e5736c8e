#include "reebmm/field_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "reebmm/error.hpp"

namespace reebmm {

struct FieldExpression::Node {
    enum class Op { number, var, neg, add, sub, mul, div, call };
    Op op = Op::number;
    double number = 0.0;
    int var = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(const double* xyz) const {
        switch (op) {
            case Op::number: return number;
            case Op::var: return xyz[var];
            case Op::neg: return -lhs->eval(xyz);
            case Op::add: return lhs->eval(xyz) + rhs->eval(xyz);
            case Op::sub: return lhs->eval(xyz) - rhs->eval(xyz);
            case Op::mul: return lhs->eval(xyz) * rhs->eval(xyz);
            case Op::div: return lhs->eval(xyz) / rhs->eval(xyz);
            case Op::call: return fn(lhs->eval(xyz));
        }
        return 0.0;
    }
};

namespace {

using Node = FieldExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr binary(Node::Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// expr := term (('+'|'-') term)*, term := unary (('*'|'/') unary)*,
// unary := '-' unary | primary, primary := number | var | fn '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        auto root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(0, "field expression, column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (accept('+')) lhs = binary(Node::Op::add, lhs, term());
            else if (accept('-')) lhs = binary(Node::Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        auto lhs = unary();
        while (true) {
            if (accept('*')) lhs = binary(Node::Op::mul, lhs, unary());
            else if (accept('/')) lhs = binary(Node::Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return binary(Node::Op::neg, unary(), nullptr);
        if (accept('+')) return unary();
        return primary();
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            auto inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.c_str() + pos_;
            char* end = nullptr;
            const double value = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Node>();
            n->number = value;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string name = text_.substr(start, pos_ - start);
            if (name == "x" || name == "y" || name == "z") {
                auto n = std::make_shared<Node>();
                n->op = Node::Op::var;
                n->var = name[0] - 'x';
                return n;
            }
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = [](double v) { return std::sin(v); };
            else if (name == "cos") fn = [](double v) { return std::cos(v); };
            else if (name == "exp") fn = [](double v) { return std::exp(v); };
            else if (name == "sqrt") fn = [](double v) { return std::sqrt(v); };
            else if (name == "abs") fn = [](double v) { return std::abs(v); };
            else {
                pos_ = start;
                fail("unknown name '" + name + "'");
            }
            if (!accept('(')) fail("expected '(' after " + name);
            auto n = std::make_shared<Node>();
            n->op = Node::Op::call;
            n->fn = fn;
            n->lhs = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

FieldExpression FieldExpression::parse(const std::string& text) {
    FieldExpression out;
    out.root_ = Parser(text).parse();
    return out;
}

double FieldExpression::operator()(double x, double y, double z) const {
    const double xyz[3] = {x, y, z};
    return root_->eval(xyz);
}

ScalarField FieldExpression::evaluate(const SimplicialComplex& complex) const {
    std::vector<double> values(complex.num_vertices());
    for (std::size_t v = 0; v < values.size(); ++v) {
        double xyz[3] = {0.0, 0.0, 0.0};
        const auto c = complex.coords(static_cast<VertexId>(v));
        for (std::size_t k = 0; k < c.size() && k < 3; ++k) xyz[k] = c[k];
        values[v] = root_->eval(xyz);
        if (!std::isfinite(values[v])) {
            throw std::invalid_argument("field expression is not finite at vertex " + std::to_string(v));
        }
    }
    return ScalarField(std::move(values));
}

}  // namespace reebmm

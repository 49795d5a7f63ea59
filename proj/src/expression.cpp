#include "stefan/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <variant>

#include "stefan/error.hpp"

namespace stefan {

struct Expression::Node {
    enum class Kind { Number, VarT, VarX, Neg, Add, Sub, Mul, Div, Exp, Sin, Cos };
    Kind kind = Kind::Number;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make_leaf(Kind kind, double value = 0.0) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = kind;
    node->value = value;
    return node;
}

NodePtr make_node(Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
    auto node = std::make_shared<Expression::Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse_all() {
        NodePtr root = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        }
        return root;
    }

    bool uses_t = false;
    bool uses_x = false;

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression \"" + std::string(text_) + "\": " + what + " at column " +
                          std::to_string(pos_ + 1));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make_node(Kind::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = make_node(Kind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_node(Kind::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_node(Kind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make_node(Kind::Neg, parse_unary());
        if (accept('+')) return parse_unary();
        return parse_primary();
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "t") {
                uses_t = true;
                return make_leaf(Kind::VarT);
            }
            if (word == "x") {
                uses_x = true;
                return make_leaf(Kind::VarX);
            }
            if (word == "pi") return make_leaf(Kind::Number, std::numbers::pi);
            Kind fn;
            if (word == "exp") {
                fn = Kind::Exp;
            } else if (word == "sin") {
                fn = Kind::Sin;
            } else if (word == "cos") {
                fn = Kind::Cos;
            } else {
                pos_ = start;
                fail("unknown identifier '" + std::string(word) + "'");
            }
            if (!accept('(')) fail("expected '(' after function name");
            NodePtr arg = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return make_node(fn, arg);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make_leaf(Kind::Number, value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& node, double t, double x) {
    switch (node.kind) {
        case Kind::Number: return node.value;
        case Kind::VarT: return t;
        case Kind::VarX: return x;
        case Kind::Neg: return -eval(*node.lhs, t, x);
        case Kind::Add: return eval(*node.lhs, t, x) + eval(*node.rhs, t, x);
        case Kind::Sub: return eval(*node.lhs, t, x) - eval(*node.rhs, t, x);
        case Kind::Mul: return eval(*node.lhs, t, x) * eval(*node.rhs, t, x);
        case Kind::Div: return eval(*node.lhs, t, x) / eval(*node.rhs, t, x);
        case Kind::Exp: return std::exp(eval(*node.lhs, t, x));
        case Kind::Sin: return std::sin(eval(*node.lhs, t, x));
        case Kind::Cos: return std::cos(eval(*node.lhs, t, x));
    }
    return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser parser(text);
    Expression expr;
    expr.root_ = parser.parse_all();
    expr.source_ = std::string(text);
    expr.uses_t_ = parser.uses_t;
    expr.uses_x_ = parser.uses_x;
    return expr;
}

double Expression::evaluate(double t, double x) const {
    return eval(*root_, t, x);
}

}  // namespace stefan

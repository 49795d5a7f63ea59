#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace stefan {

/// A compiled scalar expression in the variables `t` and `x`.
///
/// Grammar (whitespace ignored):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('+' | '-') unary | primary
///   primary:= number | 't' | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
///   func   := 'exp' | 'sin' | 'cos'
class Expression {
public:
    struct Node;

    /// Throws ConfigError with the offending column on malformed input.
    static Expression parse(std::string_view text);

    double evaluate(double t, double x) const;

    const std::string& source() const { return source_; }
    bool uses_t() const { return uses_t_; }
    bool uses_x() const { return uses_x_; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
    bool uses_t_ = false;
    bool uses_x_ = false;
};

}  // namespace stefan

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "minface/jet.hpp"

namespace minface {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Atan, Sinh, Cosh };

std::string_view to_string(Func fn);

/// Byte range of a node in the source text.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
};

/// Immutable parsed expression in (at most) one free variable.
///
/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" integer)*          (right-associative)
///   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
///
/// `pi` and `e` are constants; every other bare identifier is the variable.
class Expression {
public:
    struct Node {
        enum class Kind { Constant, Variable, Negate, Binary, Pow, Call };

        Kind kind = Kind::Constant;
        double value = 0.0;        // Constant
        std::string name;          // Variable, or the name of a named constant
        char op = 0;               // Binary: + - * /
        Func fn = Func::Sin;       // Call
        int exponent = 0;          // Pow
        std::shared_ptr<const Node> lhs;  // Negate/Pow/Call operand, Binary left
        std::shared_ptr<const Node> rhs;  // Binary right
        Span span;
    };

    /// Throws Error{Syntax | NonIntegerExponent | MultipleVariables}.
    static Expression parse(std::string_view text);

    /// A constant expression, printed in shortest round-trip form.
    static Expression constant(double c);

    /// The expression -(*this); negating a negation unwraps it, so
    /// negated().negated() is structurally equal to *this.
    Expression negated() const;

    Jet3 eval_jet(const Jet3& at) const;
    double eval(double at) const;

    const std::optional<std::string>& variable() const noexcept { return variable_; }
    const std::string& source() const noexcept { return source_; }
    const Node& root() const noexcept { return *root_; }
    bool is_constant() const noexcept { return !variable_.has_value(); }

    /// Canonical text; parse(to_string()) is structurally equal to *this.
    std::string to_string() const;

    /// Structural equality, ignoring source spans and original spelling.
    friend bool operator==(const Expression& a, const Expression& b);

private:
    Expression(std::shared_ptr<const Node> root, std::optional<std::string> var, std::string src)
        : root_(std::move(root)), variable_(std::move(var)), source_(std::move(src)) {}

    std::shared_ptr<const Node> root_;
    std::optional<std::string> variable_;
    std::string source_;
};

inline Expression parse(std::string_view text) {
    return Expression::parse(text);
}

inline Jet3 eval_jet(const Expression& e, const Jet3& at) {
    return e.eval_jet(at);
}

}  // namespace minface

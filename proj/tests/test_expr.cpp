#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "minface/error.hpp"
#include "minface/expr.hpp"
#include "support/random_expr.hpp"

using namespace minface;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
    try {
        (void)Expression::parse(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "'" << text << "' parsed";
    return ErrorKind::Spec;
}

}  // namespace

TEST(Parse, ConstantFraction) {
    const Expression e = parse("1/2");
    EXPECT_TRUE(e.is_constant());
    EXPECT_EQ(e.eval(0.0), 0.5);
    EXPECT_EQ(e.eval(123.0), 0.5);
}

TEST(Parse, SumOfOneAndSquare) {
    const Expression e = parse("1+v^2");
    ASSERT_EQ(e.variable(), std::optional<std::string>("v"));
    const auto& root = e.root();
    ASSERT_EQ(root.kind, Expression::Node::Kind::Binary);
    EXPECT_EQ(root.op, '+');
    EXPECT_EQ(root.lhs->kind, Expression::Node::Kind::Constant);
    EXPECT_EQ(root.lhs->value, 1.0);
    ASSERT_EQ(root.rhs->kind, Expression::Node::Kind::Pow);
    EXPECT_EQ(root.rhs->exponent, 2);
    EXPECT_EQ(root.rhs->lhs->kind, Expression::Node::Kind::Variable);
}

TEST(Parse, SyntaxErrorCarriesOffset) {
    try {
        (void)parse("1+*2");
        FAIL() << "expected a syntax error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Syntax);
        EXPECT_EQ(e.offset(), std::optional<std::size_t>(2));
    }
}

TEST(Parse, ErrorKinds) {
    EXPECT_EQ(parse_error_kind("u^2.5"), ErrorKind::NonIntegerExponent);
    EXPECT_EQ(parse_error_kind("u^v"), ErrorKind::NonIntegerExponent);
    EXPECT_EQ(parse_error_kind("u + v"), ErrorKind::MultipleVariables);
    EXPECT_EQ(parse_error_kind(""), ErrorKind::Syntax);
    EXPECT_EQ(parse_error_kind("(u"), ErrorKind::Syntax);
    EXPECT_EQ(parse_error_kind("u)"), ErrorKind::Syntax);
    EXPECT_EQ(parse_error_kind("foo(u)"), ErrorKind::Syntax);
    EXPECT_EQ(parse_error_kind("sin u"), ErrorKind::Syntax);
    EXPECT_EQ(parse_error_kind("2 u"), ErrorKind::Syntax);
}

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(parse("2+3*4").eval(0), 14.0);
    EXPECT_DOUBLE_EQ(parse("8-3-2").eval(0), 3.0);
    EXPECT_DOUBLE_EQ(parse("8/4/2").eval(0), 1.0);
    EXPECT_DOUBLE_EQ(parse("-2^2").eval(0), -4.0);
    EXPECT_DOUBLE_EQ(parse("2^3^2").eval(0), 512.0);
    EXPECT_DOUBLE_EQ(parse("  ( 1 +\t2 ) * 3 ").eval(0), 9.0);
    EXPECT_DOUBLE_EQ(parse("x^-2").eval(2.0), 0.25);
}

TEST(Parse, NamedConstantsAndFunctions) {
    EXPECT_DOUBLE_EQ(parse("pi").eval(0), std::numbers::pi);
    EXPECT_TRUE(parse("2*e").is_constant());
    EXPECT_DOUBLE_EQ(parse("sqrt(t)").eval(4.0), 2.0);
    EXPECT_DOUBLE_EQ(parse("cosh(s)^2 - sinh(s)^2").eval(0.3), 1.0);
}

TEST(EvalJet, Examples) {
    EXPECT_EQ(parse("1+v^2").eval_jet(lift_variable(1.0)), (Jet3{2.0, 2.0, 2.0, 0.0}));
    EXPECT_EQ(parse("u").eval_jet(lift_variable(3.0)), (Jet3{3.0, 1.0, 0.0, 0.0}));
    EXPECT_EQ(parse("-v").eval_jet(lift_variable(0.5)), (Jet3{-0.5, -1.0, 0.0, 0.0}));
}

TEST(EvalJet, ConstantSeedGivesZeroDerivatives) {
    for (const char* s : {"sin(x)^3 + x", "exp(x)/(1+x^2)", "atan(x) * log(2+x)"}) {
        const Jet3 j = parse(s).eval_jet(Jet3::constant(0.4));
        EXPECT_EQ(j.d1, 0.0) << s;
        EXPECT_EQ(j.d2, 0.0) << s;
        EXPECT_EQ(j.d3, 0.0) << s;
    }
}

TEST(EvalJet, DomainErrorsCarrySourceSpan) {
    const Expression e = parse("1 + log(u)");
    try {
        (void)e.eval(-1.0);
        FAIL() << "expected a domain error";
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::Domain);
        EXPECT_EQ(err.offset(), std::optional<std::size_t>(4));
    }
    try {
        (void)parse("2 / u").eval(0.0);
        FAIL() << "expected division by zero";
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::DivisionByZero);
    }
}

TEST(Printer, CanonicalForms) {
    EXPECT_EQ(parse("1 + v^2").to_string(), "1+v^2");
    EXPECT_EQ(parse("-(u - 1)").to_string(), "-(u-1)");
    EXPECT_EQ(parse("(-u)^2").to_string(), "(-u)^2");
    EXPECT_EQ(Expression::constant(-0.5).to_string(), "-0.5");
}

TEST(Printer, NegationIsAnInvolution) {
    const Expression e = parse("1/2");
    EXPECT_EQ(e.negated().negated(), e);
    EXPECT_DOUBLE_EQ(e.negated().eval(0), -0.5);
    EXPECT_EQ(parse(e.negated().to_string()), e.negated());
}

TEST(PrinterProperty, ParsePrintParseRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto re = testkit::random_expression(rng, 5, i % 2 ? "u" : "v");
        const Expression a = parse(re.text);
        const Expression b = parse(a.to_string());
        EXPECT_EQ(a, b) << re.text << " printed as " << a.to_string();
        EXPECT_EQ(b.to_string(), a.to_string());
    }
    for (const char* s : {"2^3^2", "-2^2", "u^-3", "1e-3*u", "1.5e+2", "-(-u)", "u - -u"}) {
        const Expression a = parse(s);
        EXPECT_EQ(parse(a.to_string()), a) << s;
    }
}

TEST(ParserFuzz, NeverCrashes) {
    std::mt19937_64 rng(99);
    int parsed = 0;
    for (int i = 0; i < 20000; ++i) {
        const std::string s = testkit::random_garbage(rng);
        try {
            const Expression e = parse(s);
            ++parsed;
            EXPECT_EQ(parse(e.to_string()), e) << s;
        } catch (const Error& e) {
            EXPECT_TRUE(e.kind() == ErrorKind::Syntax || e.kind() == ErrorKind::NonIntegerExponent ||
                        e.kind() == ErrorKind::MultipleVariables)
                << s;
        }
    }
    EXPECT_GT(parsed, 0);
    EXPECT_THROW((void)parse(std::string(100000, '(')), Error);
}

#pragma once

#include <functional>
#include <random>
#include <string>

// Random well-defined expressions in one variable, each paired with an
// independent long double evaluator used as the finite-difference oracle.
namespace minface::testkit {

struct RandomExpr {
    std::string text;
    std::function<long double(long double)> f;
};

/// Every generated expression is finite and smooth on [-2, 2].
RandomExpr random_expression(std::mt19937_64& rng, int depth = 4, const std::string& var = "x");

/// Oracle derivatives: central differences in long double, refined by
/// Ridders' (iterated Richardson) extrapolation.
struct FdDerivatives {
    long double d1, d2, d3;
};
FdDerivatives fd_derivatives(const std::function<long double(long double)>& f, long double x);

/// Random printable garbage built from the expression alphabet.
std::string random_garbage(std::mt19937_64& rng, std::size_t max_len = 40);

}  // namespace minface::testkit

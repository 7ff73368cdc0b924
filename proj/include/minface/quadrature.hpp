#pragma once

#include <functional>
#include <vector>

#include "minface/lorentz.hpp"

namespace minface {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

inline constexpr double kQuadratureAbsTol = 1e-12;

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b]. Throws
/// Error{Quadrature} with the interval and estimate when the absolute error
/// estimate exceeds abs_tol (or the rounding level of |f| over the interval,
/// if that is larger) after max_depth bisections.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = kQuadratureAbsTol, unsigned max_depth = 15);

/// Component-wise integral of a vector integrand.
Vec3 integrate_vec(const std::function<Vec3(double)>& f, double a, double b,
                   double abs_tol = kQuadratureAbsTol);

/// Antiderivative of a vector integrand anchored at `base`, with integrals
/// from `base` to a fixed set of knots computed once at construction.
/// Evaluating at t costs one short quadrature from the nearest knot.
class PrefixIntegral {
public:
    PrefixIntegral() = default;
    PrefixIntegral(std::function<Vec3(double)> integrand, double lo, double hi, double base,
                   int segments = 64);

    /// Integral of the integrand from base to t.
    Vec3 operator()(double t) const;

    const std::vector<double>& knots() const noexcept { return knots_; }

private:
    std::function<Vec3(double)> integrand_;
    std::vector<double> knots_;
    std::vector<Vec3> prefix_;
};

}  // namespace minface

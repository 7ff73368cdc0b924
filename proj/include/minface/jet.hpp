#pragma once

#include <string_view>

namespace minface {

/// Truncated Taylor jet of order 3: a value together with its first three
/// derivatives with respect to one active parameter.
///
/// Every operation checks its result and throws `Error` instead of letting a
/// NaN or infinity escape.
struct Jet3 {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet3 constant(double c);
    /// Seed for the active parameter: (x, 1, 0, 0).
    static Jet3 variable(double x);

    /// Jet of the derivative, shifted down one order. The top coefficient of
    /// the result is unknown and reported as 0.
    Jet3 shifted() const noexcept { return {d1, d2, d3, 0.0}; }

    friend bool operator==(const Jet3&, const Jet3&) = default;
};

Jet3 lift_variable(double x);

Jet3 operator-(const Jet3& a);
Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a, const Jet3& b);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator/(const Jet3& a, const Jet3& b);

Jet3 operator+(const Jet3& a, double b);
Jet3 operator+(double a, const Jet3& b);
Jet3 operator-(const Jet3& a, double b);
Jet3 operator-(double a, const Jet3& b);
Jet3 operator*(const Jet3& a, double b);
Jet3 operator*(double a, const Jet3& b);
Jet3 operator/(const Jet3& a, double b);
Jet3 operator/(double a, const Jet3& b);

Jet3 reciprocal(const Jet3& a);
Jet3 pow_int(const Jet3& a, int n);

Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 tan(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 atan(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);

/// Chain rule h(a(t)) given h and its first three derivatives at a.value.
Jet3 compose(const Jet3& a, double h0, double h1, double h2, double h3, std::string_view name);

}  // namespace minface

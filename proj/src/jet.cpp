#include "minface/jet.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {
namespace {

Jet3 checked(const Jet3& r, std::string_view op) {
    if (!std::isfinite(r.value) || !std::isfinite(r.d1) || !std::isfinite(r.d2) ||
        !std::isfinite(r.d3)) {
        throw Error(ErrorKind::Domain, fmt::format("{}: non-finite jet result", op));
    }
    return r;
}

// x^k for a possibly zero base, with k >= 0 or x != 0 guaranteed by callers.
double ipow(double x, int k) {
    double r = 1.0;
    double b = k < 0 ? 1.0 / x : x;
    for (unsigned e = static_cast<unsigned>(k < 0 ? -k : k); e != 0; e >>= 1) {
        if (e & 1u) r *= b;
        b *= b;
    }
    return r;
}

}  // namespace

Jet3 Jet3::constant(double c) {
    return checked({c, 0.0, 0.0, 0.0}, "constant");
}

Jet3 Jet3::variable(double x) {
    return checked({x, 1.0, 0.0, 0.0}, "variable");
}

Jet3 lift_variable(double x) {
    return Jet3::variable(x);
}

Jet3 operator-(const Jet3& a) {
    return {-a.value, -a.d1, -a.d2, -a.d3};
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
    return checked({a.value + b.value, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3}, "add");
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
    return checked({a.value - b.value, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3}, "sub");
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
    return checked({a.value * b.value,
                    a.d1 * b.value + a.value * b.d1,
                    a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2,
                    a.d3 * b.value + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.value * b.d3},
                   "mul");
}

Jet3 reciprocal(const Jet3& a) {
    if (a.value == 0.0) {
        throw Error(ErrorKind::DivisionByZero, "division by a jet with zero value");
    }
    const double r = 1.0 / a.value;
    return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r, "div");
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
    return a * reciprocal(b);
}

Jet3 operator+(const Jet3& a, double b) { return a + Jet3::constant(b); }
Jet3 operator+(double a, const Jet3& b) { return Jet3::constant(a) + b; }
Jet3 operator-(const Jet3& a, double b) { return a - Jet3::constant(b); }
Jet3 operator-(double a, const Jet3& b) { return Jet3::constant(a) - b; }
Jet3 operator*(const Jet3& a, double b) {
    return checked({a.value * b, a.d1 * b, a.d2 * b, a.d3 * b}, "mul");
}
Jet3 operator*(double a, const Jet3& b) { return b * a; }
Jet3 operator/(const Jet3& a, double b) {
    if (b == 0.0) throw Error(ErrorKind::DivisionByZero, "division by zero");
    return a * (1.0 / b);
}
Jet3 operator/(double a, const Jet3& b) { return a * reciprocal(b); }

Jet3 pow_int(const Jet3& a, int n) {
    const double x = a.value;
    if (n == 0) return Jet3::constant(1.0);
    if (n < 0 && x == 0.0) {
        throw Error(ErrorKind::DivisionByZero, fmt::format("0^{} is undefined", n));
    }
    const double c1 = n;
    const double c2 = c1 * (n - 1);
    const double c3 = c2 * (n - 2);
    const double h1 = c1 * ipow(x, n - 1);
    const double h2 = c2 == 0.0 ? 0.0 : c2 * ipow(x, n - 2);
    const double h3 = c3 == 0.0 ? 0.0 : c3 * ipow(x, n - 3);
    return compose(a, ipow(x, n), h1, h2, h3, "pow");
}

Jet3 compose(const Jet3& a, double h0, double h1, double h2, double h3, std::string_view name) {
    const double f1 = a.d1, f2 = a.d2, f3 = a.d3;
    return checked({h0,
                    h1 * f1,
                    h2 * f1 * f1 + h1 * f2,
                    h3 * f1 * f1 * f1 + 3.0 * h2 * f1 * f2 + h1 * f3},
                   name);
}

Jet3 sin(const Jet3& a) {
    const double s = std::sin(a.value), c = std::cos(a.value);
    return compose(a, s, c, -s, -c, "sin");
}

Jet3 cos(const Jet3& a) {
    const double s = std::sin(a.value), c = std::cos(a.value);
    return compose(a, c, -s, -c, s, "cos");
}

Jet3 tan(const Jet3& a) {
    const double c = std::cos(a.value);
    if (std::abs(c) < 1e-12) {
        throw Error(ErrorKind::Domain, fmt::format("tan: {} is at a pole", a.value));
    }
    const double t = std::tan(a.value);
    const double sec2 = 1.0 + t * t;
    return compose(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t), "tan");
}

Jet3 exp(const Jet3& a) {
    const double e = std::exp(a.value);
    return compose(a, e, e, e, e, "exp");
}

Jet3 log(const Jet3& a) {
    if (!(a.value > 0.0)) {
        throw Error(ErrorKind::Domain, fmt::format("log: argument {} is not positive", a.value));
    }
    const double r = 1.0 / a.value;
    return compose(a, std::log(a.value), r, -r * r, 2.0 * r * r * r, "log");
}

Jet3 sqrt(const Jet3& a) {
    if (!(a.value > 0.0)) {
        throw Error(ErrorKind::Domain, fmt::format("sqrt: argument {} is not positive", a.value));
    }
    const double s = std::sqrt(a.value);
    const double s3 = s * a.value;
    const double s5 = s3 * a.value;
    return compose(a, s, 0.5 / s, -0.25 / s3, 0.375 / s5, "sqrt");
}

Jet3 atan(const Jet3& a) {
    const double x = a.value;
    const double q = 1.0 / (1.0 + x * x);
    return compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q, "atan");
}

Jet3 sinh(const Jet3& a) {
    const double s = std::sinh(a.value), c = std::cosh(a.value);
    return compose(a, s, c, s, c, "sinh");
}

Jet3 cosh(const Jet3& a) {
    const double s = std::sinh(a.value), c = std::cosh(a.value);
    return compose(a, c, s, c, s, "cosh");
}

}  // namespace minface

#include "minface/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

template <class T>
struct Piece {
    T value;
    double error;     // |K15 - G7| truncation estimate
    double rounding;  // rounding level of the absolute integrand
};

double magnitude(double x) { return std::abs(x); }
double magnitude(const Vec3& x) { return x.cwiseAbs().maxCoeff(); }

// One 7/15-point Gauss-Kronrod panel.
template <class T, class F>
Piece<T> panel(const F& f, double a, double b) {
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T f0 = f(c);
    T k = f0 * wk[0];
    T g = f0 * wg[0];
    double l1 = magnitude(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const T fp = f(c + h * x[i]);
        const T fm = f(c - h * x[i]);
        k += (fp + fm) * wk[i];
        l1 += (magnitude(fp) + magnitude(fm)) * wk[i];
        if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
    }
    return {T(k * h), magnitude(T((k - g) * h)),
            50 * std::numeric_limits<double>::epsilon() * l1 * std::abs(h)};
}

template <class T, class F>
Piece<T> adaptive(const F& f, double a, double b, double tol, unsigned depth) {
    Piece<T> p = panel<T>(f, a, b);
    if (!std::isfinite(p.error) || p.error <= std::max(tol, p.rounding) || depth == 0) return p;
    const double m = 0.5 * (a + b);
    const Piece<T> l = adaptive<T>(f, a, m, 0.5 * tol, depth - 1);
    const Piece<T> r = adaptive<T>(f, m, b, 0.5 * tol, depth - 1);
    return {T(l.value + r.value), l.error + r.error, l.rounding + r.rounding};
}

template <class T, class F>
Piece<T> checked_integral(const F& f, double a, double b, double abs_tol, unsigned max_depth) {
    const Piece<T> p = adaptive<T>(f, a, b, abs_tol, max_depth);
    // Tolerances below the rounding level of the integrand are unattainable;
    // the rounding level then serves as the bound.
    if (!(p.error <= std::max(abs_tol, p.rounding)) || !std::isfinite(magnitude(p.value))) {
        throw Error(ErrorKind::Quadrature,
                    fmt::format("quadrature on [{}, {}] did not converge within {} bisections: "
                                "estimate {} with error {}",
                                a, b, max_depth, magnitude(p.value), p.error),
                    std::nullopt, a);
    }
    return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, unsigned max_depth) {
    if (a == b) return {0.0, 0.0};
    const auto p = checked_integral<double>(f, a, b, abs_tol, max_depth);
    return {p.value, std::max(p.error, p.rounding)};
}

Vec3 integrate_vec(const std::function<Vec3(double)>& f, double a, double b, double abs_tol) {
    if (a == b) return Vec3::Zero();
    return checked_integral<Vec3>(f, a, b, abs_tol, 15).value;
}

PrefixIntegral::PrefixIntegral(std::function<Vec3(double)> integrand, double lo, double hi,
                               double base, int segments)
    : integrand_(std::move(integrand)) {
    segments = std::max(segments, 1);
    knots_.reserve(static_cast<std::size_t>(segments) + 2);
    for (int i = 0; i <= segments; ++i) {
        knots_.push_back(lo + (hi - lo) * i / segments);
    }
    knots_.push_back(base);
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

    const auto b = static_cast<std::size_t>(
        std::lower_bound(knots_.begin(), knots_.end(), base) - knots_.begin());
    prefix_.assign(knots_.size(), Vec3::Zero());
    for (std::size_t i = b + 1; i < knots_.size(); ++i) {
        prefix_[i] = prefix_[i - 1] + integrate_vec(integrand_, knots_[i - 1], knots_[i]);
    }
    for (std::size_t i = b; i-- > 0;) {
        prefix_[i] = prefix_[i + 1] - integrate_vec(integrand_, knots_[i], knots_[i + 1]);
    }
}

Vec3 PrefixIntegral::operator()(double t) const {
    auto it = std::lower_bound(knots_.begin(), knots_.end(), t);
    std::size_t k;
    if (it == knots_.end()) {
        k = knots_.size() - 1;
    } else if (it == knots_.begin()) {
        k = 0;
    } else {
        const auto hi = static_cast<std::size_t>(it - knots_.begin());
        k = (t - knots_[hi - 1] <= knots_[hi] - t) ? hi - 1 : hi;
    }
    if (knots_[k] == t) return prefix_[k];
    return prefix_[k] + integrate_vec(integrand_, knots_[k], t);
}

}  // namespace minface

#include "minface/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {
namespace {

int sgn(double x) {
    return (x > 0) - (x < 0);
}

[[noreturn]] void singular_at(double u, double v) {
    throw Error(ErrorKind::SingularPoint, fmt::format("({}, {}) is a singular point", u, v));
}

// Degeneracy test for a null curve: <gamma'', gamma''> against a scale.
bool degenerate_square(const CurveJet& j, double sq, double tol) {
    return std::abs(sq) <= tol * (1.0 + j.d1.squaredNorm() + j.d2.squaredNorm());
}

}  // namespace

double gaussian_curvature(const Minface& m, double u, double v) {
    if (!m.is_weierstrass()) return gaussian_curvature_extrinsic(m.jets_at(u, v));
    const auto& d = m.weierstrass();
    const Jet3 g1 = d.g1.eval_jet(Jet3::variable(u));
    const Jet3 g2 = d.g2.eval_jet(Jet3::variable(v));
    const double s = 1.0 - g1.value * g2.value;
    if (std::abs(s) <= 1e-15 * (1.0 + std::abs(g1.value * g2.value))) singular_at(u, v);
    const double s2 = s * s;
    return 4.0 * g1.d1 * g2.d1 / (d.w1.eval(u) * d.w2.eval(v) * s2 * s2);
}

double gaussian_curvature_extrinsic(const SurfaceJet& j) {
    const double q = j.Q(), r = j.R();
    return -q * r / (j.Lambda * j.Lambda);
}

double gaussian_curvature_intrinsic_fd(const Minface& m, double u, double v, double h) {
    const NullCurvePair& c = m.curves();
    auto lambda = [&](double a, double b) {
        return 0.25 * minkowski_dot(c.phi.derivative(a), c.psi.derivative(b));
    };
    const double l0 = lambda(u, v);
    const double p0 = m.singular_proxy(u, v);
    if (l0 == 0.0 || p0 == 0.0) singular_at(u, v);
    double sum = 0.0;
    for (int i : {-1, 1}) {
        for (int k : {-1, 1}) {
            const double l = lambda(u + i * h, v + k * h);
            const double p = m.singular_proxy(u + i * h, v + k * h);
            if (l == 0.0 || sgn(l) != sgn(l0) || sgn(p) != sgn(p0)) {
                throw Error(ErrorKind::SingularNeighborhood,
                            fmt::format("stencil of radius {} at ({}, {}) meets the singular set",
                                        h, u, v));
            }
            sum += i * k * std::log(std::abs(l));
        }
    }
    return -sum / (4.0 * h * h) / l0;
}

FlatClassification flat_classify(const NullCurvePair& p, double u, double v, double tol) {
    const CurveJet a = p.phi.jet(u);
    const CurveJet b = p.psi.jet(v);
    if (std::abs(minkowski_dot(a.d1, b.d1)) <= 1e-14 * a.d1.norm() * b.d1.norm()) {
        singular_at(u, v);
    }
    FlatClassification out;
    out.q_norm2 = lorentz_square(a.d2);
    out.r_norm2 = lorentz_square(b.d2);
    const int flat = degenerate_square(a, out.q_norm2, tol) + degenerate_square(b, out.r_norm2, tol);
    out.tag = flat == 2 ? FlatTag::Umbilic : flat == 1 ? FlatTag::QuasiUmbilic : FlatTag::NonFlat;
    return out;
}

OrientationSign orientation(const NullCurve& curve, double t, double tol) {
    const CurveJet j = curve.jet(t);
    const double det = det3(j.d1, j.d2, j.d3);
    if (std::abs(det) <= tol * (1.0 + j.d1.norm() * j.d2.norm() * j.d3.norm())) {
        throw Error(ErrorKind::DegenerateAtPoint,
                    fmt::format("null curve is degenerate at t = {} (det = {})", t, det),
                    std::nullopt, t);
    }
    return {sgn(det), det};
}

struct PseudoArclength::State {
    NullCurve curve;
    std::vector<double> t, s;

    double speed(double x) const {
        const double sq = lorentz_square(curve.jet(x).d2);
        if (!(sq > 0.0)) {
            throw Error(ErrorKind::DegenerateOnInterval,
                        fmt::format("null curve is degenerate at t = {}", x), std::nullopt, x);
        }
        return std::sqrt(std::sqrt(sq));
    }

    double s_of_t(double x) const {
        auto it = std::lower_bound(t.begin(), t.end(), x);
        std::size_t k = it == t.end() ? t.size() - 1 : static_cast<std::size_t>(it - t.begin());
        if (k > 0 && x - t[k - 1] < t[k] - x) --k;
        if (t[k] == x) return s[k];
        return s[k] + integrate([this](double y) { return speed(y); }, t[k], x).value;
    }

    double t_of_s(double y) const {
        auto it = std::upper_bound(s.begin(), s.end(), y);
        std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
        k = std::min(k, s.size() - 2);
        double x = t[k] + (y - s[k]) / (s[k + 1] - s[k]) * (t[k + 1] - t[k]);
        for (int iter = 0; iter < 50; ++iter) {
            const double step = (s_of_t(x) - y) / speed(x);
            x -= step;
            if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
        }
        return x;
    }

    // d sigma / dt with sigma = q^(1/4), q = <g'', g''>.
    double speed_rate(double x) const {
        const CurveJet c = curve.jet(x);
        return 0.5 * minkowski_dot(c.d2, c.d3) * std::pow(lorentz_square(c.d2), -0.75);
    }

    CurveJet jet(double y) const {
        const double x = t_of_s(y);
        const CurveJet j = curve.jet(x);
        const double sigma = speed(x);
        const double ds = speed_rate(x);
        const double h = 1e-5 * (1.0 + std::abs(x));
        const double dds = (speed_rate(x + h) - speed_rate(x - h)) / (2.0 * h);
        // Derivatives of t(s).
        const double t1 = 1.0 / sigma;
        const double t2 = -ds / (sigma * sigma * sigma);
        const double t3 = (-dds / sigma + 3.0 * ds * ds / (sigma * sigma)) / (sigma * sigma * sigma);
        CurveJet out;
        out.d1 = j.d1 * t1;
        out.d2 = j.d2 * t1 * t1 + j.d1 * t2;
        out.d3 = j.d3 * t1 * t1 * t1 + 3.0 * j.d2 * t1 * t2 + j.d1 * t3;
        return out;
    }
};

PseudoArclength::PseudoArclength(const NullCurve& curve, double t0, double t1, int n_samples) {
    auto st = std::make_shared<State>();
    st->curve = curve;
    n_samples = std::max(n_samples, 1);
    for (int i = 0; i <= n_samples; ++i) st->t.push_back(t0 + (t1 - t0) * i / n_samples);
    for (double t : st->t) {
        const CurveJet j = curve.jet(t);
        if (degenerate_square(j, lorentz_square(j.d2), kFlatTol)) {
            throw Error(ErrorKind::DegenerateOnInterval,
                        fmt::format("null curve is degenerate at t = {}", t), std::nullopt, t);
        }
    }
    st->s.assign(st->t.size(), 0.0);
    for (std::size_t i = 1; i < st->t.size(); ++i) {
        st->s[i] = st->s[i - 1] +
                   integrate([&st](double x) { return st->speed(x); }, st->t[i - 1], st->t[i]).value;
    }
    state_ = st;
    resampled_ = NullCurve([st = state_](double y) { return st->jet(y); }, 0.0, length(), 0.0,
                           [st = state_](double y) { return st->curve.displacement(st->t_of_s(y)); });
}

const std::vector<double>& PseudoArclength::t_table() const noexcept { return state_->t; }
const std::vector<double>& PseudoArclength::s_table() const noexcept { return state_->s; }
double PseudoArclength::s_of_t(double t) const { return state_->s_of_t(t); }
double PseudoArclength::t_of_s(double s) const { return state_->t_of_s(s); }
double PseudoArclength::speed(double t) const { return state_->speed(t); }

PseudoArclength pseudo_arclength(const NullCurve& curve, double t0, double t1, int n_samples) {
    return PseudoArclength(curve, t0, t1, n_samples);
}

int sign_prediction(const Minface& m, double u, double v) {
    const FlatClassification f = flat_classify(m.curves(), u, v);
    if (f.tag != FlatTag::NonFlat) {
        throw Error(ErrorKind::FlatPoint, fmt::format("({}, {}) is a flat point", u, v));
    }
    return orientation(m.curves().phi, u).sign * orientation(m.curves().psi, v).sign;
}

double milnor_angle_rate(const NullCurve& curve, double t) {
    const Vec3 d = curve.derivative(t);
    auto angle = [&curve](double x) {
        const Vec3 a = curve.derivative(x);
        return std::atan2(a[2], a[1]);
    };
    const double h = 1e-6 * (1.0 + std::abs(t));
    double da = angle(t + h) - angle(t - h);
    if (da > std::numbers::pi) da -= 2 * std::numbers::pi;
    if (da < -std::numbers::pi) da += 2 * std::numbers::pi;
    const double dsdt = sgn(d[0]) * 0.5 * d.norm();
    return da / (2.0 * h) / dsdt;
}

bool milnor_sign_check(const Minface& m, double u, double v) {
    // Same preconditions as the orientation determinant.
    (void)sign_prediction(m, u, v);
    const double a = milnor_angle_rate(m.curves().phi, u);
    const double b = milnor_angle_rate(m.curves().psi, v);
    return sgn(a * b) == sgn(gaussian_curvature(m, u, v));
}

}  // namespace minface

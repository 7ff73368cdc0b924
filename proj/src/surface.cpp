#include "minface/surface.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {
namespace {

double probe(double lo, double hi, int i) {
    return lo + (hi - lo) * i / (kProbeGrid - 1);
}

[[noreturn]] void rethrow_at(const Error& e, const char* param, double t) {
    throw Error(e.kind(), fmt::format("{} (at {} = {})", e.what(), param, t), e.offset(), t);
}

void validate_frame(const Domain& dom, const Vec2& base, const Vec3& f0) {
    const bool finite = std::isfinite(dom.u_min) && std::isfinite(dom.u_max) &&
                        std::isfinite(dom.v_min) && std::isfinite(dom.v_max);
    if (!finite || !(dom.u_min < dom.u_max) || !(dom.v_min < dom.v_max)) {
        throw Error(ErrorKind::InvalidData,
                    fmt::format("invalid domain [{}, {}] x [{}, {}]", dom.u_min, dom.u_max,
                                dom.v_min, dom.v_max));
    }
    if (!dom.contains(base[0], base[1])) {
        throw Error(ErrorKind::InvalidData,
                    fmt::format("base ({}, {}) lies outside the domain", base[0], base[1]));
    }
    if (!f0.allFinite()) throw Error(ErrorKind::InvalidData, "f0 is not finite");
}

// Values of a density on the probe grid; rejects zeros and sign changes.
std::vector<double> probe_density(const Expression& w, const char* name, const char* param,
                                  double lo, double hi) {
    std::vector<double> out;
    out.reserve(kProbeGrid);
    for (int i = 0; i < kProbeGrid; ++i) {
        const double t = probe(lo, hi, i);
        double x;
        try {
            x = w.eval(t);
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidData,
                        fmt::format("{} cannot be evaluated at {} = {}: {}", name, param, t, e.what()),
                        e.offset(), t);
        }
        if (std::abs(x) <= 1e-12 || (!out.empty() && (x > 0) != (out.back() > 0))) {
            throw Error(ErrorKind::InvalidData,
                        fmt::format("{} vanishes near {} = {}", name, param, t), std::nullopt, t);
        }
        out.push_back(x);
    }
    return out;
}

std::vector<double> probe_values(const Expression& g, const char* name, const char* param,
                                 double lo, double hi) {
    std::vector<double> out;
    out.reserve(kProbeGrid);
    for (int i = 0; i < kProbeGrid; ++i) {
        const double t = probe(lo, hi, i);
        try {
            out.push_back(g.eval(t));
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidData,
                        fmt::format("{} cannot be evaluated at {} = {}: {}", name, param, t, e.what()),
                        e.offset(), t);
        }
    }
    return out;
}

// |f_u x f_v| / (|f_u| |f_v|) below this marks a singular point in raw mode.
constexpr double kRawSingularRatio = 1e-14;
// |1 - g1 g2| below this times (1 + |g1 g2|) marks a singular point.
constexpr double kWeierstrassSingular = 1e-15;

}  // namespace

void RealWeierstrassData::validate() const {
    validate_frame(domain, base, f0);
    probe_density(w1, "w1", "u", domain.u_min, domain.u_max);
    probe_density(w2, "w2", "v", domain.v_min, domain.v_max);
    const auto a = probe_values(g1, "g1", "u", domain.u_min, domain.u_max);
    const auto b = probe_values(g2, "g2", "v", domain.v_min, domain.v_max);
    for (double x : a) {
        for (double y : b) {
            if (std::abs(x * y - 1.0) > 1e-12) return;
        }
    }
    throw Error(ErrorKind::InvalidData, "g1 g2 = 1 on the whole probe grid");
}

void RawCurveData::validate() const {
    validate_frame(domain, base, f0);
    const NullCurve cu = component_curve(phi, domain.u_min, domain.u_max, base[0]);
    const NullCurve cv = component_curve(psi, domain.v_min, domain.v_max, base[1]);
    auto probe_curve = [](const NullCurve& c, const char* name, const char* param, double lo,
                          double hi) {
        std::vector<Vec3> out;
        for (int i = 0; i < kProbeGrid; ++i) {
            const double t = probe(lo, hi, i);
            Vec3 d;
            try {
                d = c.derivative(t);
            } catch (const Error& e) {
                throw Error(ErrorKind::InvalidData,
                            fmt::format("{} cannot be evaluated at {} = {}: {}", name, param, t,
                                        e.what()),
                            e.offset(), t);
            }
            const double scale = d.squaredNorm();
            if (scale <= 1e-24) {
                throw Error(ErrorKind::InvalidData,
                            fmt::format("{}' vanishes at {} = {}", name, param, t), std::nullopt, t);
            }
            if (std::abs(lorentz_square(d)) > 1e-10 * (1.0 + scale)) {
                throw Error(ErrorKind::InvalidData,
                            fmt::format("{} is not null at {} = {}: <{}', {}'> = {}", name, param,
                                        t, name, name, lorentz_square(d)),
                            std::nullopt, t);
            }
            out.push_back(d);
        }
        return out;
    };
    const auto a = probe_curve(cu, "phi", "u", domain.u_min, domain.u_max);
    const auto b = probe_curve(cv, "psi", "v", domain.v_min, domain.v_max);
    for (const Vec3& x : a) {
        for (const Vec3& y : b) {
            if (x.cross(y).norm() > 1e-9 * x.norm() * y.norm()) return;
        }
    }
    throw Error(ErrorKind::InvalidData, "phi' and psi' are parallel on the whole probe grid");
}

const Domain& domain_of(const SurfaceData& d) {
    return std::visit([](const auto& x) -> const Domain& { return x.domain; }, d);
}

const Vec2& base_of(const SurfaceData& d) {
    return std::visit([](const auto& x) -> const Vec2& { return x.base; }, d);
}

const Vec3& f0_of(const SurfaceData& d) {
    return std::visit([](const auto& x) -> const Vec3& { return x.f0; }, d);
}

void validate(const SurfaceData& d) {
    std::visit([](const auto& x) { x.validate(); }, d);
}

NullCurve::NullCurve(JetFn jet, double lo, double hi, double base, PositionFn position)
    : jet_(std::move(jet)), position_(std::move(position)), lo_(lo), hi_(hi), base_(base) {
    if (!position_) {
        prefix_ = std::make_shared<const PrefixIntegral>(
            [j = jet_](double t) { return j(t).d1; }, lo_, hi_, base_);
    }
}

Vec3 NullCurve::displacement(double t) const {
    if (position_) return position_(t) - position_(base_);
    return (*prefix_)(t);
}

NullCurve weierstrass_curve(const Expression& g, const Expression& w, CurveRole role, double lo,
                            double hi, double base) {
    const char* param = role == CurveRole::Phi ? "u" : "v";
    auto jet = [g, w, role, param](double t) {
        try {
            const Jet3 x = Jet3::variable(t);
            const Jet3 gj = g.eval_jet(x);
            const Jet3 wj = w.eval_jet(x);
            const Jet3 g2 = gj * gj;
            std::array<Jet3, 3> c;
            if (role == CurveRole::Phi) {
                c = {wj * (-1.0 - g2), wj * (1.0 - g2), wj * (2.0 * gj)};
            } else {
                c = {wj * (1.0 + g2), wj * (1.0 - g2), wj * (-2.0 * gj)};
            }
            CurveJet out;
            for (int k = 0; k < 3; ++k) {
                out.d1[k] = c[k].value;
                out.d2[k] = c[k].d1;
                out.d3[k] = c[k].d2;
            }
            return out;
        } catch (const Error& e) {
            rethrow_at(e, param, t);
        }
    };
    return NullCurve(jet, lo, hi, base);
}

NullCurve component_curve(const std::array<Expression, 3>& c, double lo, double hi, double base) {
    auto jet = [c](double t) {
        try {
            const Jet3 x = Jet3::variable(t);
            CurveJet out;
            for (int k = 0; k < 3; ++k) {
                const Jet3 j = c[k].eval_jet(x);
                out.d1[k] = j.d1;
                out.d2[k] = j.d2;
                out.d3[k] = j.d3;
            }
            return out;
        } catch (const Error& e) {
            rethrow_at(e, "t", t);
        }
    };
    auto position = [c](double t) {
        try {
            return Vec3{c[0].eval(t), c[1].eval(t), c[2].eval(t)};
        } catch (const Error& e) {
            rethrow_at(e, "t", t);
        }
    };
    return NullCurve(jet, lo, hi, base, position);
}

NullCurvePair curves_from_data(const SurfaceData& d) {
    if (const auto* w = std::get_if<RealWeierstrassData>(&d)) {
        return {weierstrass_curve(w->g1, w->w1, CurveRole::Phi, w->domain.u_min, w->domain.u_max,
                                  w->base[0]),
                weierstrass_curve(w->g2, w->w2, CurveRole::Psi, w->domain.v_min, w->domain.v_max,
                                  w->base[1])};
    }
    const auto& r = std::get<RawCurveData>(d);
    return {component_curve(r.phi, r.domain.u_min, r.domain.u_max, r.base[0]),
            component_curve(r.psi, r.domain.v_min, r.domain.v_max, r.base[1])};
}

Vec3 evaluate(const NullCurvePair& p, double u, double v, const Vec3& f0) {
    return 0.5 * (p.phi.displacement(u) + p.psi.displacement(v)) + f0;
}

NumericWeierstrassData::NumericWeierstrassData(NullCurvePair p, double theta)
    : pair_(std::move(p)), theta_(theta) {}

namespace {

double checked_denominator(double den, const Vec3& d, const char* curve, const char* param,
                           double t) {
    if (std::abs(den) <= 1e-12 * (1.0 + d.norm())) {
        throw Error(ErrorKind::DataConversionDegenerate,
                    fmt::format("{}' has a vanishing Weierstrass denominator at {} = {}; "
                                "supply a rotation angle theta about the time axis",
                                curve, param, t),
                    std::nullopt, t);
    }
    return den;
}

}  // namespace

double NumericWeierstrassData::w1(double u) const {
    const Vec3 d = rotate_about_time_axis(pair_.phi.derivative(u), theta_);
    return checked_denominator(d[1] - d[0], d, "phi", "u", u) / 2.0;
}

double NumericWeierstrassData::g1(double u) const {
    const Vec3 d = rotate_about_time_axis(pair_.phi.derivative(u), theta_);
    return d[2] / checked_denominator(d[1] - d[0], d, "phi", "u", u);
}

double NumericWeierstrassData::w2(double v) const {
    const Vec3 d = rotate_about_time_axis(pair_.psi.derivative(v), theta_);
    return checked_denominator(d[0] + d[1], d, "psi", "v", v) / 2.0;
}

double NumericWeierstrassData::g2(double v) const {
    const Vec3 d = rotate_about_time_axis(pair_.psi.derivative(v), theta_);
    return -d[2] / checked_denominator(d[0] + d[1], d, "psi", "v", v);
}

NumericWeierstrassData data_from_curves(const NullCurvePair& p, double theta) {
    return NumericWeierstrassData(p, theta);
}

const Vec3& SurfaceJet::nu() const {
    if (!nu_) throw Error(ErrorKind::SingularPoint, "nu is undefined at a singular point");
    return *nu_;
}

double SurfaceJet::Q() const {
    if (!nu_) throw Error(ErrorKind::SingularPoint, "Q is undefined at a singular point");
    return Q_;
}

double SurfaceJet::R() const {
    if (!nu_) throw Error(ErrorKind::SingularPoint, "R is undefined at a singular point");
    return R_;
}

const Vec3& SurfaceJet::n() const {
    if (!n_) throw Error(ErrorKind::SingularPoint, "n is undefined at this singular point");
    return *n_;
}

void SurfaceJet::finish_from_cross_product(bool singular) {
    nu_.reset();
    n_.reset();
    if (singular) return;
    const Vec3 c = f_u.cross(f_v);
    n_ = c / c.norm();
    // nu is the Lorentz normal Euclidean-parallel to G n, G = diag(-1, 1, 1).
    const Vec3 gn = flip_time(*n_);
    nu_ = gn / std::sqrt(lorentz_square(gn));
    Q_ = minkowski_dot(f_uu, *nu_);
    R_ = minkowski_dot(f_vv, *nu_);
}

void SurfaceJet::finish_from_data(double g1, double g2, bool singular) {
    const Vec3 dir{-g1 - g2, g1 - g2, -1.0 - g1 * g2};
    n_ = dir / dir.norm();
    nu_.reset();
    if (singular) return;
    // G dir has Lorentzian square (1 - g1 g2)^2.
    nu_ = flip_time(dir) / std::abs(1.0 - g1 * g2);
    Q_ = minkowski_dot(f_uu, *nu_);
    R_ = minkowski_dot(f_vv, *nu_);
}

Minface::Minface(SurfaceData data) : data_(std::move(data)) {
    validate(data_);
    curves_ = curves_from_data(data_);
}

const RealWeierstrassData& Minface::weierstrass() const {
    if (const auto* w = std::get_if<RealWeierstrassData>(&data_)) return *w;
    throw Error(ErrorKind::ModeUnsupported, "operation requires Weierstrass-mode data");
}

Vec3 Minface::evaluate(double u, double v) const {
    return minface::evaluate(curves_, u, v, f0_of(data_));
}

SurfaceJet Minface::jets_at(double u, double v) const {
    const CurveJet a = curves_.phi.jet(u);
    const CurveJet b = curves_.psi.jet(v);
    SurfaceJet j;
    j.f = evaluate(u, v);
    j.f_u = 0.5 * a.d1;
    j.f_v = 0.5 * b.d1;
    j.f_uu = 0.5 * a.d2;
    j.f_vv = 0.5 * b.d2;
    j.f_uv = Vec3::Zero();
    j.Lambda = minkowski_dot(j.f_u, j.f_v);
    if (const auto* w = std::get_if<RealWeierstrassData>(&data_)) {
        const double g1 = w->g1.eval(u), g2 = w->g2.eval(v);
        const bool singular =
            std::abs(1.0 - g1 * g2) <= kWeierstrassSingular * (1.0 + std::abs(g1 * g2));
        j.finish_from_data(g1, g2, singular);
    } else {
        const double ratio = j.f_u.cross(j.f_v).norm() / (j.f_u.norm() * j.f_v.norm());
        j.finish_from_cross_product(!(ratio > kRawSingularRatio));
    }
    return j;
}

double Minface::singular_proxy(double u, double v) const {
    if (const auto* w = std::get_if<RealWeierstrassData>(&data_)) {
        return 1.0 - w->g1.eval(u) * w->g2.eval(v);
    }
    const Vec3 a = curves_.phi.derivative(u), b = curves_.psi.derivative(v);
    return minkowski_dot(a, b) / (a.norm() * b.norm());
}

double Minface::singular_distance(double u, double v) const {
    double s = 0.0, su = 0.0, sv = 0.0;
    if (const auto* w = std::get_if<RealWeierstrassData>(&data_)) {
        const Jet3 g1 = w->g1.eval_jet(Jet3::variable(u));
        const Jet3 g2 = w->g2.eval_jet(Jet3::variable(v));
        s = 1.0 - g1.value * g2.value;
        su = -g1.d1 * g2.value;
        sv = -g1.value * g2.d1;
    } else {
        const CurveJet a = curves_.phi.jet(u), b = curves_.psi.jet(v);
        const double na = a.d1.norm(), nb = b.d1.norm();
        s = minkowski_dot(a.d1, b.d1) / (na * nb);
        su = minkowski_dot(a.d2, b.d1) / (na * nb) - s * a.d1.dot(a.d2) / (na * na);
        sv = minkowski_dot(a.d1, b.d2) / (na * nb) - s * b.d1.dot(b.d2) / (nb * nb);
    }
    const double g = std::hypot(su, sv);
    return g == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(s) / g;
}

double mean_curvature_residual(const Minface& m, double u, double v) {
    const SurfaceJet j = m.jets_at(u, v);
    return 2.0 * minkowski_dot(j.f_uv, j.nu()) / j.Lambda;
}

SurfaceData conjugate_data(const SurfaceData& d) {
    if (const auto* w = std::get_if<RealWeierstrassData>(&d)) {
        RealWeierstrassData c = *w;
        c.w2 = w->w2.negated();
        return c;
    }
    RawCurveData c = std::get<RawCurveData>(d);
    for (auto& e : c.psi) e = e.negated();
    return c;
}

}  // namespace minface

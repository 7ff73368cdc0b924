#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "minface/expr.hpp"
#include "minface/lorentz.hpp"
#include "minface/quadrature.hpp"

namespace minface {

struct Domain {
    double u_min = 0.0, u_max = 1.0;
    double v_min = 0.0, v_max = 1.0;

    bool contains(double u, double v) const noexcept {
        return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
    }
    double width() const noexcept { return u_max - u_min; }
    double height() const noexcept { return v_max - v_min; }

    friend bool operator==(const Domain&, const Domain&) = default;
};

inline constexpr int kProbeGrid = 64;

/// Real Weierstrass data (g1, g2, w1, w2) with w_i the densities of omega_i.
struct RealWeierstrassData {
    Expression g1, g2, w1, w2;
    Domain domain;
    Vec2 base = Vec2::Zero();
    Vec3 f0 = Vec3::Zero();

    /// Throws Error{InvalidData}: bad domain or base, w1 or w2 vanishing on
    /// the probe grid, or g1 g2 = 1 at every probe point.
    void validate() const;
};

/// Surface given directly by the two generating null curves,
/// f = (phi(u) + psi(v)) / 2 up to translation.
struct RawCurveData {
    std::array<Expression, 3> phi, psi;
    Domain domain;
    Vec2 base = Vec2::Zero();
    Vec3 f0 = Vec3::Zero();

    /// Throws Error{InvalidData} when a curve fails the null check, its
    /// velocity vanishes, or the induced metric vanishes on the whole grid.
    void validate() const;
};

using SurfaceData = std::variant<RealWeierstrassData, RawCurveData>;

const Domain& domain_of(const SurfaceData& d);
const Vec2& base_of(const SurfaceData& d);
const Vec3& f0_of(const SurfaceData& d);
void validate(const SurfaceData& d);

/// gamma', gamma'', gamma''' at one parameter value.
struct CurveJet {
    Vec3 d1 = Vec3::Zero();
    Vec3 d2 = Vec3::Zero();
    Vec3 d3 = Vec3::Zero();
};

/// A parametrized curve known through its derivative jets. Positions are
/// relative to the base parameter: displacement(t) = gamma(t) - gamma(base).
class NullCurve {
public:
    using JetFn = std::function<CurveJet(double)>;
    using PositionFn = std::function<Vec3(double)>;

    NullCurve() = default;
    /// Without `position` the displacement is integrated from the jets with
    /// cached prefix integrals over [lo, hi].
    NullCurve(JetFn jet, double lo, double hi, double base, PositionFn position = {});

    CurveJet jet(double t) const { return jet_(t); }
    Vec3 derivative(double t) const { return jet_(t).d1; }
    Vec3 displacement(double t) const;

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double base() const noexcept { return base_; }

private:
    JetFn jet_;
    PositionFn position_;
    std::shared_ptr<const PrefixIntegral> prefix_;
    double lo_ = 0.0, hi_ = 1.0, base_ = 0.0;
};

enum class CurveRole { Phi, Psi };

/// phi' = w (-1 - g^2, 1 - g^2, 2g) or psi' = w (1 + g^2, 1 - g^2, -2g).
NullCurve weierstrass_curve(const Expression& g, const Expression& w, CurveRole role,
                            double lo, double hi, double base);
/// Curve with the given coordinate functions.
NullCurve component_curve(const std::array<Expression, 3>& c, double lo, double hi, double base);

struct NullCurvePair {
    NullCurve phi, psi;
};

NullCurvePair curves_from_data(const SurfaceData& d);

/// f(u, v) = (disp_phi(u) + disp_psi(v)) / 2 + f0.
Vec3 evaluate(const NullCurvePair& p, double u, double v, const Vec3& f0 = Vec3::Zero());

/// Weierstrass data recovered numerically from a pair of null curves.
class NumericWeierstrassData {
public:
    NumericWeierstrassData(NullCurvePair p, double theta = 0.0);

    // Each throws Error{DataConversionDegenerate} where the relevant
    // denominator vanishes.
    double g1(double u) const;
    double w1(double u) const;
    double g2(double v) const;
    double w2(double v) const;

private:
    NullCurvePair pair_;
    double theta_;
};

NumericWeierstrassData data_from_curves(const NullCurvePair& p, double theta = 0.0);

/// First and second order data of the surface at one point.
class SurfaceJet {
public:
    Vec3 f, f_u, f_v, f_uu, f_uv, f_vv;
    double Lambda = 0.0;  // <f_u, f_v>; the metric is 2 Lambda du dv

    bool regular() const noexcept { return nu_.has_value(); }

    // Each throws Error{SingularPoint} at a singular point.
    const Vec3& nu() const;
    double Q() const;
    double R() const;
    /// Euclidean unit normal. Always present in Weierstrass mode; in raw-curve
    /// mode only at regular points.
    const Vec3& n() const;

    /// Fills nu, Q, R, n from f_u x f_v (raw-curve mode).
    void finish_from_cross_product(bool singular);
    /// Fills nu, Q, R, n from the Weierstrass data at the point.
    void finish_from_data(double g1, double g2, bool singular);

private:
    std::optional<Vec3> nu_, n_;
    double Q_ = 0.0, R_ = 0.0;
};

/// A validated surface with its generating curves built once.
class Minface {
public:
    explicit Minface(SurfaceData data);

    const SurfaceData& data() const noexcept { return data_; }
    bool is_weierstrass() const noexcept {
        return std::holds_alternative<RealWeierstrassData>(data_);
    }
    /// Throws Error{ModeUnsupported} for raw-curve data.
    const RealWeierstrassData& weierstrass() const;
    const NullCurvePair& curves() const noexcept { return curves_; }
    const Domain& domain() const noexcept { return domain_of(data_); }

    Vec3 evaluate(double u, double v) const;
    SurfaceJet jets_at(double u, double v) const;
    /// 1 - g1 g2 in Weierstrass mode; Lambda / (|f_u| |f_v|) otherwise.
    /// Zero exactly on the singular set.
    double singular_proxy(double u, double v) const;
    /// First-order parameter distance to the singular set, |s| / |grad s| for
    /// the proxy s above; infinity where the gradient vanishes.
    double singular_distance(double u, double v) const;

private:
    SurfaceData data_;
    NullCurvePair curves_;
};

/// 2 <f_uv, nu> / Lambda. Throws Error{SingularPoint}.
double mean_curvature_residual(const Minface& m, double u, double v);

/// (g1, g2, w1, -w2); in raw-curve mode psi is negated.
SurfaceData conjugate_data(const SurfaceData& d);

// Surface spec files (JSON).
SurfaceData parse_spec(const std::string& json_text);
SurfaceData load_spec(const std::string& path);
std::string dump_spec(const SurfaceData& d);
void save_spec(const SurfaceData& d, const std::string& path);

}  // namespace minface

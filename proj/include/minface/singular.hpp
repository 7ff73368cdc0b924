#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "minface/surface.hpp"

namespace minface {

enum class SingularClassification {
    CuspidalEdge,
    Swallowtail,
    CuspidalCrossCap,
    DegenerateSingular,
    Unresolved,
};

/// cuspidal_edge, swallowtail, cuspidal_cross_cap, degenerate, unresolved.
std::string_view to_string(SingularClassification tag);

inline constexpr double kSingularTol = 1e-9;

struct SingularPointReport {
    Vec2 point = Vec2::Zero();
    double a = 0.0;  // g1' / (g1^2 w1)
    double b = 0.0;  // g2' / (g2^2 w2)
    double a_minus_b = 0.0;
    double a_plus_b = 0.0;
    double third_sw = 0.0;   // a' g2'/g2 - b' g1'/g1
    double third_ccr = 0.0;  // a' g2'/g2 + b' g1'/g1
    SingularClassification tag = SingularClassification::Unresolved;
    bool is_front = false;
    bool is_nondegenerate = false;
    std::optional<double> kappa_s;  // cuspidal edges only
    double lambda_gradient_norm = 0.0;
};

struct SingularCurve {
    std::vector<SingularPointReport> points;
    double residual_max = 0.0;  // max |g1 g2 - 1| over the points
    bool closed = false;
};

// All operations below require Weierstrass-mode data and throw
// Error{ModeUnsupported} otherwise.

/// -(w1 w2 / 2)(1 - g1 g2) sqrt((1 - g1 g2)^2 + 2 (g1 + g2)^2), which is
/// det(f_u, f_v, -n) for the normal n of SurfaceJet (opposite orientation).
double signed_area_density(const Minface& m, double u, double v);
Vec2 signed_area_gradient(const Minface& m, double u, double v);

/// Marching squares on g1 g2 - 1 over a grid_n x grid_n grid, each crossing
/// refined along its grid edge, with points where a + b or a - b vanish
/// inserted between neighbours. Every point is classified.
std::vector<SingularCurve> trace_singular_set(const Minface& m, int grid_n,
                                              double tol = kSingularTol);

// Each throws Error{NotSingular} unless |1 - g1 g2| <= tol (1 + |g1 g2|).
bool is_front(const Minface& m, const Vec2& p, double tol = kSingularTol);
bool is_nondegenerate(const Minface& m, const Vec2& p, double tol = kSingularTol);
SingularPointReport classify_singular(const Minface& m, const Vec2& p, double tol = kSingularTol);

/// [2 g1' g2' / (w1 w2 (g1 + g2)^2)] / |a + b|. Throws Error{NotCuspidalEdge}.
double singular_curvature(const Minface& m, const Vec2& p, double tol = kSingularTol);

struct SingularDirections {
    Vec2 gamma_prime;  // (g2'/g2, -g1'/g1), tangent to the singular curve
    Vec2 eta;          // (1/(g1 w1), 1/(g2 w2)), the null direction
    Vec2 mu;           // (g2'/g2, g1'/g1)
};

/// Throws Error{NotSingular}, Error{DegenerateSingular}.
SingularDirections directions_at(const Minface& m, const Vec2& p, double tol = kSingularTol);

struct IdentityResiduals {
    double gamma_eta = 0.0;  // det(gamma', eta) - (a + b)
    double cross_cap = 0.0;  // det(df(gamma'), n, dn(eta)) - alpha (a - b)
    double cross_cap_reference = 0.0;  // alpha (a - b)
};

/// dn(eta) by a five-point difference of the closed-form normal.
IdentityResiduals identity_residuals(const Minface& m, const Vec2& p, double tol = kSingularTol);

struct MainTheoremSample {
    double t = 0.0;  // signed distance along the transversal
    double K = 0.0;
};

struct MainTheoremReport {
    SingularPointReport at;
    Vec2 direction = Vec2::Zero();
    std::vector<MainTheoremSample> samples;
    int expected_sign = 0;  // 0 when exempt or inconclusive
    bool sign_constant = false;
    bool divergent = false;
    bool passed = false;
    std::string note;
};

/// Samples K at p +- r direction for each radius. The default direction is
/// the coordinate axis along which g1 g2 varies faster. Throws
/// Error{NotSingular}, Error{DegenerateSingular}.
MainTheoremReport verify_main_theorem(const Minface& m, const Vec2& p,
                                      const std::vector<double>& radii,
                                      std::optional<Vec2> direction = std::nullopt,
                                      double tol = kSingularTol);

/// Header u,v,tag,a,b,a_minus_b,a_plus_b,kappa_s,is_front,lambda_gradient_norm.
void write_singular_csv(const std::vector<SingularCurve>& curves, std::ostream& out);
void save_singular_csv(const std::vector<SingularCurve>& curves, const std::string& path);

}  // namespace minface

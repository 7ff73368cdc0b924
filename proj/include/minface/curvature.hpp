#pragma once

#include <memory>
#include <vector>

#include "minface/surface.hpp"

namespace minface {

/// K = 4 g1' g2' / (w1 w2 (1 - g1 g2)^4) in Weierstrass mode; the extrinsic
/// route in raw-curve mode. Throws Error{SingularPoint}.
double gaussian_curvature(const Minface& m, double u, double v);

/// det of the shape operator, -Q R / Lambda^2. Throws Error{SingularPoint}.
double gaussian_curvature_extrinsic(const SurfaceJet& j);

/// -(1/Lambda) d_u d_v log|Lambda| by a mixed central difference with step h.
/// Throws Error{SingularNeighborhood} when the stencil meets the singular set.
double gaussian_curvature_intrinsic_fd(const Minface& m, double u, double v, double h);

enum class FlatTag { NonFlat, QuasiUmbilic, Umbilic };

struct FlatClassification {
    FlatTag tag = FlatTag::NonFlat;
    double q_norm2 = 0.0;  // <phi'', phi''>
    double r_norm2 = 0.0;  // <psi'', psi''>
};

inline constexpr double kFlatTol = 1e-10;

/// Umbilic when both generating curves are degenerate at the point,
/// quasi-umbilic when exactly one is. A square counts as zero when it is at
/// most tol (1 + |gamma'|^2 + |gamma''|^2). Throws Error{SingularPoint}.
FlatClassification flat_classify(const NullCurvePair& p, double u, double v,
                                 double tol = kFlatTol);

struct OrientationSign {
    int sign = 0;
    double determinant = 0.0;  // det(gamma', gamma'', gamma''')
};

/// Throws Error{DegenerateAtPoint} when |det| <= tol (1 + |gamma'| |gamma''| |gamma'''|).
OrientationSign orientation(const NullCurve& curve, double t, double tol = 1e-12);

/// A null curve reparametrized by pseudo-arclength, <gamma'', gamma''> = 1.
class PseudoArclength {
public:
    /// Throws Error{DegenerateOnInterval} at the first sample t where the
    /// curve is degenerate.
    PseudoArclength(const NullCurve& curve, double t0, double t1, int n_samples);

    const std::vector<double>& t_table() const noexcept;
    const std::vector<double>& s_table() const noexcept;
    double length() const noexcept { return s_table().back(); }

    double s_of_t(double t) const;
    double t_of_s(double s) const;
    /// ds/dt = <gamma'', gamma''>^(1/4).
    double speed(double t) const;
    /// The curve in the parameter s in [0, length()], based at s = 0.
    const NullCurve& resampled() const noexcept { return resampled_; }

    struct State;

private:
    std::shared_ptr<const State> state_;
    NullCurve resampled_;
};

PseudoArclength pseudo_arclength(const NullCurve& curve, double t0, double t1, int n_samples);

/// eps_phi eps_psi. Throws Error{FlatPoint}, Error{SingularPoint}.
int sign_prediction(const Minface& m, double u, double v);

/// Rate of the angle A = atan2(x2, x1) of gamma' per unit Euclidean arclength
/// of gamma / 2, oriented so that x0 increases. Finite differences in t.
double milnor_angle_rate(const NullCurve& curve, double t);

/// sgn(A' B') == sgn(K).
bool milnor_sign_check(const Minface& m, double u, double v);

}  // namespace minface

#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

// Lorentz-Minkowski 3-space L^3 = R^3 with <x, y> = -x0 y0 + x1 y1 + x2 y2.
// Points of L^3 are identified with affine R^3 for all output.
namespace minface {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline double minkowski_dot(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double lorentz_square(const Vec3& a) {
    return minkowski_dot(a, a);
}

/// Flips the time component: the metric matrix diag(-1, 1, 1).
inline Vec3 flip_time(const Vec3& a) {
    return {-a[0], a[1], a[2]};
}

/// Lorentzian cross product, <a x_L b, c> = det(a, b, c).
inline Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    return flip_time(a.cross(b));
}

/// det of the matrix whose columns are a, b, c.
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a.dot(b.cross(c));
}

/// Rotation by theta about the time axis x0.
inline Vec3 rotate_about_time_axis(const Vec3& a, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {a[0], c * a[1] - s * a[2], s * a[1] + c * a[2]};
}

}  // namespace minface

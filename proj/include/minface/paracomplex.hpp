#pragma once

#include <array>

#include "minface/lorentz.hpp"

namespace minface {

/// Paracomplex (split-complex) number re + j im with j^2 = 1.
///
/// There is deliberately no division: z = a(1 +- j) are zero divisors.
struct SplitComplex {
    double re = 0.0;
    double im = 0.0;

    static constexpr SplitComplex j() { return {0.0, 1.0}; }

    friend constexpr SplitComplex operator+(SplitComplex a, SplitComplex b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend constexpr SplitComplex operator-(SplitComplex a, SplitComplex b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend constexpr SplitComplex operator-(SplitComplex a) { return {-a.re, -a.im}; }
    friend constexpr SplitComplex operator*(SplitComplex a, SplitComplex b) {
        return {a.re * b.re + a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend constexpr SplitComplex operator*(double s, SplitComplex a) {
        return {s * a.re, s * a.im};
    }
    friend constexpr bool operator==(SplitComplex, SplitComplex) = default;
};

constexpr SplitComplex conj(SplitComplex z) {
    return {z.re, -z.im};
}

/// <z>^2 = z conj(z) = re^2 - im^2; indefinite, zero on re = +-im.
constexpr double square_modulus(SplitComplex z) {
    return z.re * z.re - z.im * z.im;
}

/// Scalar product of L^2 = (R^2, -dx^2 + dy^2): -Re(conj(z1) z2).
constexpr double minkowski_product(SplitComplex z1, SplitComplex z2) {
    return -(conj(z1) * z2).re;
}

/// phi = (f + g)/2 + j (f - g)/2 from f(u) and g(v).
constexpr SplitComplex assemble_paraholomorphic(double f_of_u, double g_of_v) {
    return {(f_of_u + g_of_v) / 2.0, (f_of_u - g_of_v) / 2.0};
}

struct ParaholomorphicSplit {
    double f_of_u;
    double g_of_v;
};

/// Inverse of assemble_paraholomorphic: f = re + im, g = re - im.
constexpr ParaholomorphicSplit split_paraholomorphic(SplitComplex z) {
    return {z.re + z.im, z.re - z.im};
}

using SplitVec3 = std::array<SplitComplex, 3>;

/// f_z = 1/2 (-1 - g^2, j (1 - g^2), 2 g) w, component-wise.
constexpr SplitVec3 weierstrass_integrand(SplitComplex g, SplitComplex w) {
    constexpr SplitComplex one{1.0, 0.0};
    const SplitComplex g2 = g * g;
    return {0.5 * ((-one - g2) * w), 0.5 * (SplitComplex::j() * (one - g2) * w),
            0.5 * ((2.0 * g) * w)};
}

inline Vec3 real_part(const SplitVec3& v) {
    return {v[0].re, v[1].re, v[2].re};
}

inline Vec3 imag_part(const SplitVec3& v) {
    return {v[0].im, v[1].im, v[2].im};
}

/// True when both generating derivatives are Lorentz-null within tol.
inline bool lorentzian_null_check(const Vec3& phi_prime, const Vec3& psi_prime, double tol) {
    return std::abs(lorentz_square(phi_prime)) <= tol &&
           std::abs(lorentz_square(psi_prime)) <= tol;
}

}  // namespace minface

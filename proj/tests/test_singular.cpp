#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "minface/curvature.hpp"
#include "minface/error.hpp"
#include "minface/gallery.hpp"
#include "minface/singular.hpp"
#include "support/random_data.hpp"

using namespace minface;
using Tag = SingularClassification;

namespace {

Minface surface(const char* name) {
    return Minface(gallery_entry(name).data);
}

ErrorKind error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Spec;
}

int sgn(double x) {
    return (x > 0) - (x < 0);
}

RealWeierstrassData data(const char* g1, const char* g2, const char* w1, const char* w2,
                         Domain dom) {
    return {parse(g1), parse(g2), parse(w1), parse(w2), dom,
            {0.5 * (dom.u_min + dom.u_max), 0.5 * (dom.v_min + dom.v_max)}, {0, 0, 0}};
}

// Unit normal of the singular curve in the parameter plane.
Vec2 across(const RealWeierstrassData& d, const Vec2& p) {
    const Jet3 g1 = d.g1.eval_jet(Jet3::variable(p[0]));
    const Jet3 g2 = d.g2.eval_jet(Jet3::variable(p[1]));
    return Vec2{g1.d1 * g2.value, g1.value * g2.d1}.normalized();
}

std::vector<Minface> random_surfaces(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<Minface> out;
    for (int k = 0; k < count; ++k) out.emplace_back(testkit::random_polynomial_data(rng));
    return out;
}

std::vector<double> roots_of_derivative(const Expression& g, double lo, double hi) {
    std::vector<double> out;
    auto d = [&](double x) { return g.eval_jet(Jet3::variable(x)).d1; };
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        double a = lo + (hi - lo) * i / n, b = lo + (hi - lo) * (i + 1) / n;
        if (d(a) == 0.0) out.push_back(a);
        if (sgn(d(a)) * sgn(d(b)) >= 0) continue;
        for (int it = 0; it < 100; ++it) {
            const double c = 0.5 * (a + b);
            (sgn(d(c)) == sgn(d(a)) ? a : b) = c;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

}  // namespace

TEST(SignedAreaDensity, Examples) {
    const Minface m = surface("enneper");
    EXPECT_NEAR(signed_area_density(m, 0, 0), -0.125, 1e-15);
    EXPECT_EQ(signed_area_density(m, 1, -1), 0.0);
    for (double t : {1e-1, 1e-3}) {
        EXPECT_EQ(sgn(signed_area_density(m, 1 + t, -1)), -sgn(signed_area_density(m, 1 - t, -1)));
    }
}

TEST(SignedAreaDensity, MatchesDeterminantAtRegularPoints) {
    // The density is taken with the normal opposite to SurfaceJet::n.
    std::mt19937_64 rng(41);
    for (const char* name : {"enneper", "enneper-conj", "ce-quasiumbilic"}) {
        const Minface m = surface(name);
        for (int i = 0; i < 50; ++i) {
            const Vec2 p = testkit::random_point(rng, m.domain());
            const SurfaceJet j = m.jets_at(p[0], p[1]);
            const double det = -det3(j.f_u, j.f_v, j.n());
            EXPECT_NEAR(signed_area_density(m, p[0], p[1]), det, 1e-12 * (1 + std::abs(det)));
        }
    }
}

TEST(SignedAreaDensity, GradientMatchesDifferences) {
    std::mt19937_64 rng(42);
    const Minface m = surface("ce-quasiumbilic");
    for (int i = 0; i < 50; ++i) {
        const Vec2 p = testkit::random_point(rng, m.domain());
        const double h = 1e-5;
        const Vec2 g = signed_area_gradient(m, p[0], p[1]);
        const double du = (signed_area_density(m, p[0] + h, p[1]) -
                           signed_area_density(m, p[0] - h, p[1])) / (2 * h);
        const double dv = (signed_area_density(m, p[0], p[1] + h) -
                           signed_area_density(m, p[0], p[1] - h)) / (2 * h);
        EXPECT_NEAR(g[0], du, 1e-6 * (1 + std::abs(du)));
        EXPECT_NEAR(g[1], dv, 1e-6 * (1 + std::abs(dv)));
    }
}

TEST(SignedAreaDensity, RawModeUnsupported) {
    const Minface k = surface("kchange");
    EXPECT_EQ(error_kind([&] { (void)signed_area_density(k, 0.5, 0.5); }),
              ErrorKind::ModeUnsupported);
    EXPECT_EQ(error_kind([&] { (void)trace_singular_set(k, 64); }), ErrorKind::ModeUnsupported);
    EXPECT_EQ(error_kind([&] { (void)classify_singular(k, {1, 1}); }),
              ErrorKind::ModeUnsupported);
}

TEST(Trace, EnneperHyperbola) {
    const Minface m = surface("enneper");
    const auto curves = trace_singular_set(m, 256);
    ASSERT_EQ(curves.size(), 2u);
    const double step = 6.0 / 256 * std::sqrt(2.0);
    for (const auto& c : curves) {
        EXPECT_FALSE(c.closed);
        EXPECT_LT(c.residual_max, 1e-12);
        const int branch = sgn(c.points.front().point[0]);
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            const Vec2& p = c.points[i].point;
            EXPECT_EQ(sgn(p[0]), branch);
            EXPECT_LT(std::abs(p[0] * p[1] + 1) / p.norm(), 1e-6);
            if (i > 0) EXPECT_LE((p - c.points[i - 1].point).norm(), step);
        }
        // Spans the domain boundary to boundary: |u| from 1/3 to 3.
        double lo = 10, hi = 0;
        for (const auto& r : c.points) {
            lo = std::min(lo, std::abs(r.point[0]));
            hi = std::max(hi, std::abs(r.point[0]));
        }
        EXPECT_NEAR(lo, 1.0 / 3.0, 1e-9);
        EXPECT_NEAR(hi, 3.0, 1e-9);
    }
}

TEST(Trace, CeQuasiumbilicCurve) {
    const auto curves = trace_singular_set(surface("ce-quasiumbilic"), 128);
    ASSERT_EQ(curves.size(), 1u);
    for (const auto& r : curves.front().points) {
        EXPECT_NEAR(r.point[0], 1 / (1 + r.point[1] * r.point[1]), 1e-12);
        EXPECT_EQ(r.tag, Tag::CuspidalEdge);
    }
}

TEST(Trace, EmptyWhenNoSingularPoints) {
    const Minface m(data("u", "v", "1", "1", {2, 3, 2, 3}));
    EXPECT_TRUE(trace_singular_set(m, 32).empty());
    EXPECT_EQ(error_kind([&] { (void)trace_singular_set(m, 8); }), ErrorKind::InvalidData);
}

TEST(Trace, ClosedCurve) {
    // g1 g2 = exp(u^2 + v^2) / 2 equals 1 on the circle u^2 + v^2 = log 2.
    const Minface m(data("exp(u^2)/2", "exp(v^2)", "1", "1", {-1, 1, -1, 1}));
    const auto curves = trace_singular_set(m, 64);
    ASSERT_EQ(curves.size(), 1u);
    EXPECT_TRUE(curves.front().closed);
    for (const auto& r : curves.front().points) {
        EXPECT_NEAR(r.point.squaredNorm(), std::log(2.0), 1e-12);
    }
}

TEST(Front, Examples) {
    EXPECT_TRUE(is_front(surface("enneper"), {1, -1}));
    EXPECT_FALSE(is_front(surface("enneper-conj"), {1, -1}));
    EXPECT_TRUE(is_nondegenerate(surface("enneper"), {1, -1}));
    EXPECT_TRUE(is_nondegenerate(surface("enneper-conj"), {1, -1}));
    EXPECT_EQ(error_kind([&] { (void)is_front(surface("enneper"), {0, 0}); }),
              ErrorKind::NotSingular);
    EXPECT_EQ(classify_singular(surface("enneper"), {1, -1}).a_minus_b, 4.0);
}

TEST(Classify, Examples) {
    const auto st = classify_singular(surface("enneper"), {1, -1});
    EXPECT_EQ(st.tag, Tag::Swallowtail);
    EXPECT_EQ(st.a_plus_b, 0.0);
    EXPECT_NE(st.third_sw, 0.0);
    EXPECT_FALSE(st.kappa_s);

    const auto ce = classify_singular(surface("enneper"), {2, -0.5});
    EXPECT_EQ(ce.tag, Tag::CuspidalEdge);
    EXPECT_DOUBLE_EQ(ce.a_minus_b, 8.5);
    EXPECT_DOUBLE_EQ(ce.a_plus_b, -7.5);

    const auto cc = classify_singular(surface("enneper-conj"), {1, -1});
    EXPECT_EQ(cc.tag, Tag::CuspidalCrossCap);
    EXPECT_FALSE(cc.is_front);

    const auto q = classify_singular(surface("ce-quasiumbilic"), {0.5, 1});
    EXPECT_EQ(q.tag, Tag::CuspidalEdge);
    EXPECT_DOUBLE_EQ(q.a, 4.0);
    EXPECT_DOUBLE_EQ(q.b, 0.5);
}

TEST(Classify, DegenerateAndUnresolved) {
    // g1' = g2' = 0 at (0, 0) and g1 g2 = 1 there.
    const Minface deg(data("1+u^2", "1-v^2", "1", "1", {-1, 1, -1, 1}));
    EXPECT_EQ(classify_singular(deg, {0, 0}).tag, Tag::DegenerateSingular);
    EXPECT_FALSE(is_nondegenerate(deg, {0, 0}));
    EXPECT_EQ(error_kind([&] { (void)directions_at(deg, {0, 0}); }),
              ErrorKind::DegenerateSingular);
    // a = b = 1 everywhere on the singular set: a - b = 0 and the
    // cross-cap quantity a' g2'/g2 + b' g1'/g1 vanishes too.
    const Minface un(data("exp(u)", "exp(v)", "exp(-u)", "exp(-v)", {-1, 1, -1, 1}));
    EXPECT_EQ(classify_singular(un, {0.3, -0.3}).tag, Tag::Unresolved);
}

TEST(SingularCurvature, SpotValues) {
    EXPECT_NEAR(singular_curvature(surface("enneper"), {2, -0.5}), -8 / 6.25 / 7.5, 1e-15);
    EXPECT_NEAR(singular_curvature(surface("enneper"), {2, -0.5}), -0.170667, 1e-6);
    EXPECT_NEAR(singular_curvature(surface("ce-quasiumbilic"), {0.5, 1}), 0.64 / 4.5, 1e-15);
    EXPECT_NEAR(singular_curvature(surface("ce-quasiumbilic"), {0.5, 1}), 0.142222, 1e-6);
    EXPECT_EQ(error_kind([&] { (void)singular_curvature(surface("enneper"), {1, -1}); }),
              ErrorKind::NotCuspidalEdge);
}

TEST(SingularCurvature, ZeroWhereADerivativeVanishes) {
    // g2' = 2 v vanishes at (1, 0) on the singular curve.
    const Minface m = surface("ce-quasiumbilic");
    EXPECT_EQ(singular_curvature(m, {1, 0}), 0.0);
    const auto curves = trace_singular_set(m, 128);
    for (const auto& r : curves.front().points) {
        // sign(kappa_s) = sign(g1' g2' / (w1 w2)) = sign(v).
        EXPECT_EQ(sgn(*r.kappa_s), sgn(r.point[1]));
    }
}

TEST(Directions, Examples) {
    const auto e = directions_at(surface("enneper"), {1, -1});
    EXPECT_EQ(e.gamma_prime, Vec2(-1, -1));
    EXPECT_EQ(e.eta, Vec2(2, 2));
    Eigen::Matrix2d m;
    m << e.gamma_prime, e.eta;
    EXPECT_EQ(m.determinant(), 0.0);

    const auto c = directions_at(surface("enneper"), {2, -0.5});
    m << c.gamma_prime, c.eta;
    EXPECT_NEAR(m.determinant(), -7.5, 1e-14);

    const auto q = directions_at(surface("ce-quasiumbilic"), {0.5, 1});
    m << q.gamma_prime, q.eta;
    EXPECT_NEAR(m.determinant(), 4.5, 1e-14);
}

TEST(Directions, TangentToSingularCurve) {
    const Minface m = surface("ce-quasiumbilic");
    const auto& d = m.weierstrass();
    for (double v : {-1.5, -0.3, 0.7}) {
        const Vec2 p{1 / (1 + v * v), v};
        EXPECT_NEAR(directions_at(m, p).gamma_prime.dot(across(d, p)), 0.0, 1e-14);
    }
}

TEST(MainTheorem, EnneperDivergence) {
    const std::vector<double> radii{1e-1, 1e-2, 1e-3};
    const auto rep = verify_main_theorem(surface("enneper"), {1, -1}, radii);
    EXPECT_EQ(rep.direction, Vec2(1, 0));
    EXPECT_TRUE(rep.passed) << rep.note;
    EXPECT_EQ(rep.expected_sign, -1);
    for (const auto& s : rep.samples) {
        EXPECT_LT(std::abs(s.K / (-16 / std::pow(s.t, 4)) - 1), 1e-6);
    }
    const auto conj = verify_main_theorem(surface("enneper-conj"), {1, -1}, radii);
    EXPECT_TRUE(conj.passed) << conj.note;
    EXPECT_EQ(conj.expected_sign, 1);
    for (const auto& s : conj.samples) {
        EXPECT_LT(std::abs(s.K / (16 / std::pow(s.t, 4)) - 1), 1e-6);
    }
}

TEST(MainTheorem, CuspidalEdgeExemption) {
    const Minface m = surface("ce-quasiumbilic");
    const auto rep = verify_main_theorem(m, {1, 0}, {1e-1, 1e-2}, Vec2{0, 1});
    EXPECT_EQ(rep.at.tag, Tag::CuspidalEdge);
    EXPECT_EQ(rep.expected_sign, 0);
    EXPECT_FALSE(rep.sign_constant);
    EXPECT_TRUE(rep.passed);
    EXPECT_NE(rep.note.find("not determined"), std::string::npos);

    const auto edge = verify_main_theorem(m, {0.5, 1}, {1e-1, 1e-2, 1e-3});
    EXPECT_EQ(edge.expected_sign, 1);
    EXPECT_TRUE(edge.passed);
}

TEST(MainTheorem, Preconditions) {
    EXPECT_EQ(error_kind([&] { (void)verify_main_theorem(surface("enneper"), {0, 0}, {0.1}); }),
              ErrorKind::NotSingular);
}

TEST(SingularCsv, Layout) {
    const auto curves = trace_singular_set(surface("enneper"), 32);
    std::ostringstream out;
    write_singular_csv(curves, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "u,v,tag,a,b,a_minus_b,a_plus_b,kappa_s,is_front,lambda_gradient_norm");
    std::size_t rows = 0, swallowtails = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find(",swallowtail,") != std::string::npos) {
            ++swallowtails;
            EXPECT_NE(line.find(",,true,"), std::string::npos) << line;
        }
    }
    std::size_t points = 0;
    for (const auto& c : curves) points += c.points.size();
    EXPECT_EQ(rows, points);
    EXPECT_EQ(swallowtails, 2u);
}

TEST(SingularProperty, IdentitiesAlongTrace) {
    std::vector<Minface> surfaces;
    for (const char* n : {"enneper", "enneper-conj", "ce-quasiumbilic"}) surfaces.push_back(surface(n));
    for (auto& m : random_surfaces(43, 10)) surfaces.push_back(std::move(m));
    for (const Minface& m : surfaces) {
        for (const auto& c : trace_singular_set(m, 128)) {
            EXPECT_LT(c.residual_max, 1e-9);
            for (const auto& r : c.points) {
                if (!r.is_nondegenerate) continue;
                const auto id = identity_residuals(m, r.point);
                EXPECT_LT(std::abs(id.gamma_eta), 1e-10);
                EXPECT_LT(std::abs(id.cross_cap), 1e-8 * (1 + std::abs(id.cross_cap_reference)));
            }
        }
    }
}

TEST(SingularProperty, LambdaChangesSignAcrossTheCurve) {
    for (const char* n : {"enneper", "ce-quasiumbilic"}) {
        const Minface m = surface(n);
        for (const auto& c : trace_singular_set(m, 64)) {
            for (const auto& r : c.points) {
                const Vec2 x = across(m.weierstrass(), r.point) * 1e-4;
                const Vec2 p = r.point + x, q = r.point - x;
                EXPECT_EQ(sgn(signed_area_density(m, p[0], p[1])),
                          -sgn(signed_area_density(m, q[0], q[1])));
                EXPECT_GT(r.lambda_gradient_norm, 0.0);
            }
        }
    }
}

TEST(SingularProperty, DualitySwapsSwallowtailAndCrossCap) {
    std::vector<Minface> surfaces;
    for (const char* n : {"enneper", "ce-quasiumbilic"}) surfaces.push_back(surface(n));
    for (auto& m : random_surfaces(44, 10)) surfaces.push_back(std::move(m));
    for (const Minface& m : surfaces) {
        const Minface c(conjugate_data(m.data()));
        const auto a = trace_singular_set(m, 128);
        const auto b = trace_singular_set(c, 128);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            ASSERT_EQ(a[k].points.size(), b[k].points.size());
            for (std::size_t i = 0; i < a[k].points.size(); ++i) {
                const Tag x = a[k].points[i].tag, y = b[k].points[i].tag;
                EXPECT_LT((a[k].points[i].point - b[k].points[i].point).norm(), 1e-12);
                if (x == Tag::Swallowtail) EXPECT_EQ(y, Tag::CuspidalCrossCap);
                if (x == Tag::CuspidalCrossCap) EXPECT_EQ(y, Tag::Swallowtail);
                if (x == Tag::CuspidalEdge) EXPECT_EQ(y, Tag::CuspidalEdge);
            }
        }
    }
}

TEST(SingularProperty, KappaSignMatchesNearbyK) {
    for (const char* n : {"enneper", "enneper-conj", "ce-quasiumbilic"}) {
        const Minface m = surface(n);
        std::vector<SingularPointReport> edges;
        for (const auto& c : trace_singular_set(m, 256)) {
            for (const auto& r : c.points) {
                if (r.tag == Tag::CuspidalEdge && std::abs(r.point[1]) > 1e-2) edges.push_back(r);
            }
        }
        ASSERT_GE(edges.size(), 50u) << n;
        for (int i = 0; i < 50; ++i) {
            const auto& r = edges[i * edges.size() / 50];
            const Vec2 x = across(m.weierstrass(), r.point) * 1e-3;
            for (const Vec2& p : {Vec2(r.point + x), Vec2(r.point - x)}) {
                EXPECT_EQ(sgn(*r.kappa_s), sgn(gaussian_curvature(m, p[0], p[1])))
                    << n << " at " << r.point.transpose();
            }
        }
    }
}

TEST(SingularProperty, CeQuasiumbilicSignFreedom) {
    // K changes sign across v = 0 next to the singular curve.
    const Minface m = surface("ce-quasiumbilic");
    for (double v : {0.05, 0.5}) {
        for (double du : {-1e-2, 1e-2}) {
            const double u = 1 / (1 + v * v) + du;
            EXPECT_GT(gaussian_curvature(m, u, v), 0);
            EXPECT_LT(gaussian_curvature(m, u, -v), 0);
        }
    }
}

TEST(SingularProperty, FlatPointsNearTracedPoints) {
    // Quasi-umbilic points lie on the lines g1' = 0 and g2' = 0, umbilic
    // points at their intersections. Where a quasi-umbilic line meets the
    // singular set, quasi-umbilic points accumulate and the point must be a
    // cuspidal edge.
    int crossings = 0;
    for (const Minface& m : random_surfaces(45, 20)) {
        const auto& d = m.weierstrass();
        const Domain& dom = m.domain();
        const auto ru = roots_of_derivative(d.g1, dom.u_min, dom.u_max);
        const auto rv = roots_of_derivative(d.g2, dom.v_min, dom.v_max);
        for (const auto& c : trace_singular_set(m, 128)) {
            for (const auto& r : c.points) {
                if (!r.is_nondegenerate) continue;
                for (double u : ru) {
                    for (double v : rv) {
                        EXPECT_GE((r.point - Vec2(u, v)).norm(), 1e-2) << "umbilic near singular";
                    }
                }
            }
        }
        // The line u = at (u_line) or v = at, with c the other g there.
        auto check_line = [&](const Expression& g, double at, double c, bool u_line, double lo,
                              double hi) {
            auto f = [&](double x) { return g.eval(x) * c - 1.0; };
            const int n = 400;
            for (int i = 0; i < n; ++i) {
                double a = lo + (hi - lo) * i / n, b = lo + (hi - lo) * (i + 1) / n;
                if (sgn(f(a)) * sgn(f(b)) >= 0) continue;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (a + b);
                    (sgn(f(mid)) == sgn(f(a)) ? a : b) = mid;
                }
                const double x = 0.5 * (a + b);
                const Vec2 p = u_line ? Vec2(at, x) : Vec2(x, at);
                const auto rep = classify_singular(m, p, 1e-9);
                if (!rep.is_nondegenerate) continue;
                ++crossings;
                EXPECT_EQ(rep.tag, Tag::CuspidalEdge) << p.transpose();
                // Nearby points on the line are quasi-umbilic.
                const Vec2 e = u_line ? Vec2(0, 1e-3) : Vec2(1e-3, 0);
                EXPECT_EQ(flat_classify(m.curves(), (p + e)[0], (p + e)[1]).tag,
                          FlatTag::QuasiUmbilic);
            }
        };
        for (double u : ru) check_line(d.g2, u, d.g1.eval(u), true, dom.v_min, dom.v_max);
        for (double v : rv) check_line(d.g1, v, d.g2.eval(v), false, dom.u_min, dom.u_max);
    }
    EXPECT_GT(crossings, 0);
}

#include "minface/verify.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "minface/curvature.hpp"
#include "minface/error.hpp"
#include "minface/singular.hpp"

namespace minface {
namespace {

int sgn(double x) {
    return (x > 0) - (x < 0);
}

double rel(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

CheckResult check(std::string name, double value, double tolerance, int samples) {
    return {std::move(name), value, tolerance, samples, value <= tolerance};
}

bool degenerate_margin(const CurveJet& j) {
    return std::abs(lorentz_square(j.d2)) < 0.05 * (1.0 + j.d2.squaredNorm());
}

// True when g1' or g2' changes sign within distance r of p; K may change
// sign there without contradicting the cuspidal-edge sign relation.
bool near_flat_line(const RealWeierstrassData& d, const Vec2& p, double r) {
    auto g1p = [&](double u) { return d.g1.eval_jet(Jet3::variable(u)).d1; };
    auto g2p = [&](double v) { return d.g2.eval_jet(Jet3::variable(v)).d1; };
    const int a = sgn(g1p(p[0])), b = sgn(g2p(p[1]));
    return a == 0 || b == 0 || sgn(g1p(p[0] - r)) != a || sgn(g1p(p[0] + r)) != a ||
           sgn(g2p(p[1] - r)) != b || sgn(g2p(p[1] + r)) != b;
}

void curvature_checks(const Minface& m, std::mt19937_64& rng, const BatteryOptions& o,
                      std::vector<CheckResult>& out) {
    const auto pts = sample_points(m, rng, o.samples, is_interior_sample);
    const int n = static_cast<int>(pts.size());
    double ext = 0.0, intr = 0.0;
    for (const Vec2& p : pts) {
        const double k = gaussian_curvature(m, p[0], p[1]);
        if (m.is_weierstrass()) {
            ext = std::max(ext, rel(gaussian_curvature_extrinsic(m.jets_at(p[0], p[1])), k));
        }
        intr = std::max(intr, rel(gaussian_curvature_intrinsic_fd(m, p[0], p[1], kIntrinsicStep), k));
    }
    if (m.is_weierstrass()) out.push_back(check("curvature closed vs extrinsic", ext, 1e-9, n));
    out.push_back(check("curvature vs intrinsic stencil", intr, 1e-3, n));

    const auto regular = sample_points(m, rng, o.samples, [](const Minface& s, double u, double v) {
        return s.jets_at(u, v).regular();
    });
    double h = 0.0;
    for (const Vec2& p : regular) h = std::max(h, std::abs(mean_curvature_residual(m, p[0], p[1])));
    out.push_back(check("mean curvature residual", h, 1e-10, static_cast<int>(regular.size())));

    const auto nonflat = sample_points(m, rng, o.samples, is_regular_nonflat);
    int sign_miss = 0, milnor_miss = 0;
    for (const Vec2& p : nonflat) {
        sign_miss += sign_prediction(m, p[0], p[1]) != sgn(gaussian_curvature(m, p[0], p[1]));
        milnor_miss += !milnor_sign_check(m, p[0], p[1]);
    }
    const int nf = static_cast<int>(nonflat.size());
    out.push_back(check("sign(K) = orientation product (mismatches)", sign_miss, 0, nf));
    out.push_back(check("Milnor angle-rate sign (mismatches)", milnor_miss, 0, nf));
}

void position_checks(const Minface& m, std::mt19937_64& rng, std::vector<CheckResult>& out) {
    const double h = 1e-4;
    const Domain& dom = m.domain();
    const Domain inner{dom.u_min + 2 * h, dom.u_max - 2 * h, dom.v_min + 2 * h, dom.v_max - 2 * h};
    std::uniform_real_distribution<double> U(inner.u_min, inner.u_max), V(inner.v_min, inner.v_max);
    double err = 0.0;
    const int n = 50;
    for (int i = 0; i < n; ++i) {
        const double u = U(rng), v = V(rng);
        const SurfaceJet j = m.jets_at(u, v);
        const Vec3 du = (m.evaluate(u + h, v) - m.evaluate(u - h, v)) / (2 * h);
        const Vec3 dv = (m.evaluate(u, v + h) - m.evaluate(u, v - h)) / (2 * h);
        err = std::max(err, (du - j.f_u).norm() / (1.0 + j.f_u.norm()));
        err = std::max(err, (dv - j.f_v).norm() / (1.0 + j.f_v.norm()));
    }
    out.push_back(check("position differences vs jets", err, 1e-6, n));
}

void data_checks(const Minface& m, std::mt19937_64& rng, const BatteryOptions& o,
                 std::vector<CheckResult>& out) {
    const auto& d = m.weierstrass();
    const NumericWeierstrassData back = data_from_curves(m.curves());
    std::uniform_real_distribution<double> U(m.domain().u_min, m.domain().u_max);
    std::uniform_real_distribution<double> V(m.domain().v_min, m.domain().v_max);
    double err = 0.0;
    int n = 0;
    for (int i = 0; i < o.samples; ++i) {
        const double u = U(rng), v = V(rng);
        try {
            const double vals[4][2] = {{back.g1(u), d.g1.eval(u)},
                                       {back.w1(u), d.w1.eval(u)},
                                       {back.g2(v), d.g2.eval(v)},
                                       {back.w2(v), d.w2.eval(v)}};
            for (const auto& [got, want] : vals) {
                err = std::max(err, std::abs(got - want) / (1.0 + std::abs(want)));
            }
            ++n;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DataConversionDegenerate) throw;
        }
    }
    out.push_back(check("data <-> curves round trip", err, 1e-10, n));
}

void singular_checks(const Minface& m, const BatteryOptions& o, std::vector<CheckResult>& out) {
    const auto& d = m.weierstrass();
    const auto curves = trace_singular_set(m, o.trace_grid);
    double residual = 0.0, ge = 0.0, cc = 0.0;
    int points = 0, nondeg = 0;
    for (const auto& c : curves) {
        residual = std::max(residual, c.residual_max);
        for (const auto& r : c.points) {
            ++points;
            if (!r.is_nondegenerate) continue;
            ++nondeg;
            const IdentityResiduals id = identity_residuals(m, r.point);
            ge = std::max(ge, std::abs(id.gamma_eta));
            cc = std::max(cc, std::abs(id.cross_cap) / (1.0 + std::abs(id.cross_cap_reference)));
        }
    }
    out.push_back(check("singular trace residual", residual, 1e-9, points));
    out.push_back(check("det(gamma', eta) - (a + b)", ge, 1e-8, nondeg));
    out.push_back(check("cross-cap identity (relative)", cc, 1e-8, nondeg));

    const Minface conj(conjugate_data(m.data()));
    const auto dual = trace_singular_set(conj, o.trace_grid);
    int dual_miss = 0;
    if (dual.size() != curves.size()) ++dual_miss;
    for (std::size_t k = 0; k < std::min(curves.size(), dual.size()); ++k) {
        if (curves[k].points.size() != dual[k].points.size()) {
            ++dual_miss;
            continue;
        }
        for (std::size_t i = 0; i < curves[k].points.size(); ++i) {
            using enum SingularClassification;
            const auto x = curves[k].points[i].tag, y = dual[k].points[i].tag;
            const bool ok = (x == CuspidalEdge && y == CuspidalEdge) ||
                            (x == Swallowtail && y == CuspidalCrossCap) ||
                            (x == CuspidalCrossCap && y == Swallowtail) ||
                            (x != CuspidalEdge && x != Swallowtail && x != CuspidalCrossCap &&
                             y != CuspidalEdge && y != Swallowtail && y != CuspidalCrossCap);
            dual_miss += !ok;
        }
    }
    out.push_back(check("duality of singular tags (mismatches)", dual_miss, 0, points));

    const double r = 1e-3;
    int kappa_miss = 0, kappa_n = 0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            if (!p.kappa_s || near_flat_line(d, p.point, 2 * r)) continue;
            const Jet3 g1 = d.g1.eval_jet(Jet3::variable(p.point[0]));
            const Jet3 g2 = d.g2.eval_jet(Jet3::variable(p.point[1]));
            const Vec2 n = Vec2{g1.d1 * g2.value, g1.value * g2.d1}.normalized() * r;
            for (const Vec2& q : {Vec2(p.point + n), Vec2(p.point - n)}) {
                ++kappa_n;
                kappa_miss += sgn(*p.kappa_s) != sgn(gaussian_curvature(m, q[0], q[1]));
            }
        }
    }
    out.push_back(check("sign(kappa_s) = sign(K) nearby (mismatches)", kappa_miss, 0, kappa_n));
}

}  // namespace

bool is_interior_sample(const Minface& m, double u, double v) {
    if (!(m.singular_distance(u, v) >= 100 * kIntrinsicStep)) return false;
    const Domain& dom = m.domain();
    const double r = 2 * kIntrinsicStep;
    if (u - r < dom.u_min || u + r > dom.u_max || v - r < dom.v_min || v + r > dom.v_max) {
        return false;
    }
    return !degenerate_margin(m.curves().phi.jet(u)) && !degenerate_margin(m.curves().psi.jet(v));
}

bool is_regular_nonflat(const Minface& m, double u, double v) {
    if (!m.jets_at(u, v).regular()) return false;
    return flat_classify(m.curves(), u, v).tag == FlatTag::NonFlat;
}

std::vector<Vec2> sample_points(const Minface& m, std::mt19937_64& rng, int count,
                                const std::function<bool(const Minface&, double, double)>& keep) {
    const Domain& dom = m.domain();
    std::uniform_real_distribution<double> U(dom.u_min, dom.u_max), V(dom.v_min, dom.v_max);
    std::vector<Vec2> out;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1000L * count) {
            throw Error(ErrorKind::InvalidData,
                        fmt::format("found only {} of {} admissible sample points", out.size(), count));
        }
        const double u = U(rng), v = V(rng);
        if (keep(m, u, v)) out.emplace_back(u, v);
    }
    return out;
}

std::vector<CheckResult> run_battery(const Minface& m, const BatteryOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::vector<CheckResult> out;
    curvature_checks(m, rng, options, out);
    position_checks(m, rng, out);
    if (m.is_weierstrass()) {
        data_checks(m, rng, options, out);
        singular_checks(m, options, out);
    }
    return out;
}

}  // namespace minface

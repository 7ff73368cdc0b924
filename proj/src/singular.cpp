#include "minface/singular.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <fstream>
#include <map>
#include <system_error>
#include <utility>

#include <fmt/format.h>

#include "minface/curvature.hpp"
#include "minface/error.hpp"

namespace minface {
namespace {

int sgn(double x) {
    return (x > 0) - (x < 0);
}

// Jets of the data in their own variables at (u, v).
struct Local {
    Jet3 g1, g2, w1, w2;
};

Local local_at(const RealWeierstrassData& d, double u, double v) {
    const Jet3 x = Jet3::variable(u), y = Jet3::variable(v);
    return {d.g1.eval_jet(x), d.g2.eval_jet(y), d.w1.eval_jet(x), d.w2.eval_jet(y)};
}

// a(u) = g1' / (g1^2 w1) as a jet; value and first derivative are exact.
Jet3 criterion_jet(const Jet3& g, const Jet3& w) {
    return g.shifted() / (g * g * w);
}

void require_singular(const Local& l, const Vec2& p, double tol) {
    const double gg = l.g1.value * l.g2.value;
    if (!(std::abs(1.0 - gg) <= tol * (1.0 + std::abs(gg)))) {
        throw Error(ErrorKind::NotSingular,
                    fmt::format("({}, {}) is not singular: 1 - g1 g2 = {}", p[0], p[1], 1.0 - gg));
    }
}

bool degenerate(const Local& l, double tol) {
    return std::abs(l.g1.d1) <= tol * (1.0 + std::abs(l.g1.value)) &&
           std::abs(l.g2.d1) <= tol * (1.0 + std::abs(l.g2.value));
}

Jet3 lambda_jet(const Jet3& g1, const Jet3& g2, const Jet3& w1, const Jet3& w2) {
    const Jet3 s = 1.0 - g1 * g2;
    const Jet3 t = g1 + g2;
    return -0.5 * w1 * w2 * s * sqrt(s * s + 2.0 * t * t);
}

Vec3 closed_form_normal(double g1, double g2) {
    const Vec3 dir{-g1 - g2, g1 - g2, -1.0 - g1 * g2};
    return dir / dir.norm();
}

SingularPointReport classify_local(const Local& l, const Vec2& p, double tol) {
    SingularPointReport r;
    r.point = p;
    const Jet3 a = criterion_jet(l.g1, l.w1);
    const Jet3 b = criterion_jet(l.g2, l.w2);
    r.a = a.value;
    r.b = b.value;
    r.a_minus_b = a.value - b.value;
    r.a_plus_b = a.value + b.value;
    const double sw1 = a.d1 * l.g2.d1 / l.g2.value;
    const double sw2 = b.d1 * l.g1.d1 / l.g1.value;
    r.third_sw = sw1 - sw2;
    r.third_ccr = sw1 + sw2;

    const double scale = 1.0 + std::abs(r.a) + std::abs(r.b);
    const double third_scale = 1.0 + std::abs(sw1) + std::abs(sw2);
    const bool minus_zero = std::abs(r.a_minus_b) <= tol * scale;
    const bool plus_zero = std::abs(r.a_plus_b) <= tol * scale;
    r.is_front = !minus_zero;
    r.is_nondegenerate = !degenerate(l, tol);

    using enum SingularClassification;
    if (!r.is_nondegenerate) {
        r.tag = DegenerateSingular;
    } else if (!minus_zero && !plus_zero) {
        r.tag = CuspidalEdge;
    } else if (!minus_zero && std::abs(r.third_sw) > tol * third_scale) {
        r.tag = Swallowtail;
    } else if (!plus_zero && std::abs(r.third_ccr) > tol * third_scale) {
        r.tag = CuspidalCrossCap;
    } else {
        r.tag = Unresolved;
    }
    if (r.tag == CuspidalEdge) {
        const double t = l.g1.value + l.g2.value;
        r.kappa_s = 2.0 * l.g1.d1 * l.g2.d1 / (l.w1.value * l.w2.value * t * t) /
                    std::abs(r.a_plus_b);
    }
    const Jet3 cu = Jet3::constant(l.g2.value), cw = Jet3::constant(l.w2.value);
    const Jet3 du = lambda_jet(l.g1, cu, l.w1, cw);
    const Jet3 dv =
        lambda_jet(Jet3::constant(l.g1.value), l.g2, Jet3::constant(l.w1.value), l.w2);
    r.lambda_gradient_norm = std::hypot(du.d1, dv.d1);
    return r;
}

// Root of g(x) c - 1 on [lo, hi] with a sign change, Newton safeguarded by bisection.
double refine_on_edge(const Expression& g, double c, double lo, double hi) {
    auto h = [&](double x) {
        const Jet3 j = g.eval_jet(Jet3::variable(x));
        return std::pair{j.value * c - 1.0, j.d1 * c};
    };
    double f_lo = h(lo).first;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const auto [f, df] = h(x);
        if (std::abs(f) < 1e-13 || hi - lo <= 1e-15 * (1.0 + std::abs(x))) break;
        if (sgn(f) == sgn(f_lo)) {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        const double nx = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
        x = (nx > lo && nx < hi) ? nx : 0.5 * (lo + hi);
    }
    return x;
}

// Point between p and q on the singular set where a + sigma b vanishes.
std::optional<Vec2> special_point(const RealWeierstrassData& d, const Vec2& p, const Vec2& q,
                                  double sigma) {
    Vec2 x = 0.5 * (p + q);
    const double reach = (q - p).norm();
    for (int it = 0; it < 50; ++it) {
        const Local l = local_at(d, x[0], x[1]);
        const Jet3 a = criterion_jet(l.g1, l.w1), b = criterion_jet(l.g2, l.w2);
        const Vec2 f{l.g1.value * l.g2.value - 1.0, a.value + sigma * b.value};
        Eigen::Matrix2d jac;
        jac << l.g1.d1 * l.g2.value, l.g1.value * l.g2.d1, a.d1, sigma * b.d1;
        const Vec2 step = jac.partialPivLu().solve(f);
        if (!step.allFinite()) return std::nullopt;
        x -= step;
        if ((x - 0.5 * (p + q)).norm() > reach) return std::nullopt;
        if (step.norm() <= 1e-15 * (1.0 + x.norm())) break;
    }
    const Local l = local_at(d, x[0], x[1]);
    if (std::abs(l.g1.value * l.g2.value - 1.0) > 1e-12) return std::nullopt;
    return x;
}

struct Crossing {
    Vec2 point;
    std::vector<long> links;
};

}  // namespace

std::string_view to_string(SingularClassification tag) {
    switch (tag) {
        case SingularClassification::CuspidalEdge: return "cuspidal_edge";
        case SingularClassification::Swallowtail: return "swallowtail";
        case SingularClassification::CuspidalCrossCap: return "cuspidal_cross_cap";
        case SingularClassification::DegenerateSingular: return "degenerate";
        case SingularClassification::Unresolved: return "unresolved";
    }
    return "unresolved";
}

double signed_area_density(const Minface& m, double u, double v) {
    const auto& d = m.weierstrass();
    const double g1 = d.g1.eval(u), g2 = d.g2.eval(v);
    const double s = 1.0 - g1 * g2, t = g1 + g2;
    return -0.5 * d.w1.eval(u) * d.w2.eval(v) * s * std::sqrt(s * s + 2.0 * t * t);
}

Vec2 signed_area_gradient(const Minface& m, double u, double v) {
    const Local l = local_at(m.weierstrass(), u, v);
    const Jet3 du = lambda_jet(l.g1, Jet3::constant(l.g2.value), l.w1, Jet3::constant(l.w2.value));
    const Jet3 dv =
        lambda_jet(Jet3::constant(l.g1.value), l.g2, Jet3::constant(l.w1.value), l.w2);
    return {du.d1, dv.d1};
}

SingularPointReport classify_singular(const Minface& m, const Vec2& p, double tol) {
    const Local l = local_at(m.weierstrass(), p[0], p[1]);
    require_singular(l, p, tol);
    return classify_local(l, p, tol);
}

bool is_front(const Minface& m, const Vec2& p, double tol) {
    return classify_singular(m, p, tol).is_front;
}

bool is_nondegenerate(const Minface& m, const Vec2& p, double tol) {
    return classify_singular(m, p, tol).is_nondegenerate;
}

double singular_curvature(const Minface& m, const Vec2& p, double tol) {
    const SingularPointReport r = classify_singular(m, p, tol);
    if (!r.kappa_s) {
        throw Error(ErrorKind::NotCuspidalEdge,
                    fmt::format("({}, {}) is {}, not a cuspidal edge", p[0], p[1], to_string(r.tag)));
    }
    return *r.kappa_s;
}

SingularDirections directions_at(const Minface& m, const Vec2& p, double tol) {
    const Local l = local_at(m.weierstrass(), p[0], p[1]);
    require_singular(l, p, tol);
    if (degenerate(l, tol)) {
        throw Error(ErrorKind::DegenerateSingular,
                    fmt::format("({}, {}) is a degenerate singular point", p[0], p[1]));
    }
    const double r1 = l.g1.d1 / l.g1.value, r2 = l.g2.d1 / l.g2.value;
    return {{r2, -r1},
            {1.0 / (l.g1.value * l.w1.value), 1.0 / (l.g2.value * l.w2.value)},
            {r2, r1}};
}

IdentityResiduals identity_residuals(const Minface& m, const Vec2& p, double tol) {
    const auto& d = m.weierstrass();
    const SingularPointReport r = classify_singular(m, p, tol);
    const SingularDirections dir = directions_at(m, p, tol);
    IdentityResiduals out;
    Eigen::Matrix2d ge;
    ge << dir.gamma_prime, dir.eta;
    out.gamma_eta = ge.determinant() - r.a_plus_b;

    const NullCurvePair& c = m.curves();
    const Vec3 dfg = 0.5 * c.phi.derivative(p[0]) * dir.gamma_prime[0] +
                     0.5 * c.psi.derivative(p[1]) * dir.gamma_prime[1];
    auto normal = [&](double t) {
        const Vec2 x = p + t * dir.eta;
        return closed_form_normal(d.g1.eval(x[0]), d.g2.eval(x[1]));
    };
    const double h = 1e-3 / dir.eta.norm();
    const Vec3 dn = (normal(-2 * h) - 8.0 * normal(-h) + 8.0 * normal(h) - normal(2 * h)) / (12.0 * h);
    const Vec3 n = normal(0.0);
    const double alpha = -0.5 * d.w1.eval(p[0]) * d.w2.eval(p[1]) * r.a_plus_b;
    out.cross_cap_reference = alpha * r.a_minus_b;
    out.cross_cap = det3(dfg, n, dn) - out.cross_cap_reference;
    return out;
}

std::vector<SingularCurve> trace_singular_set(const Minface& m, int grid_n, double tol) {
    const auto& d = m.weierstrass();
    if (grid_n < 16) {
        throw Error(ErrorKind::InvalidData, fmt::format("grid_n = {} is below 16", grid_n));
    }
    const Domain& dom = m.domain();
    const int n = grid_n;
    std::vector<double> us(n + 1), vs(n + 1), g1(n + 1), g2(n + 1);
    for (int i = 0; i <= n; ++i) {
        us[i] = dom.u_min + dom.width() * i / n;
        vs[i] = dom.v_min + dom.height() * i / n;
        g1[i] = d.g1.eval(us[i]);
        g2[i] = d.g2.eval(vs[i]);
    }
    // Vertices exactly on the set count as positive.
    auto positive = [&](int i, int j) { return g1[i] * g2[j] - 1.0 >= 0.0; };

    // Edge ids: horizontal (i, j)-(i+1, j), then vertical (i, j)-(i, j+1).
    const long stride = n + 1;
    auto h_id = [&](int i, int j) { return static_cast<long>(j) * stride + i; };
    auto v_id = [&](int i, int j) { return stride * stride + static_cast<long>(i) * stride + j; };

    std::map<long, Crossing> nodes;
    auto crossing = [&](long id, bool horizontal, int i, int j) -> bool {
        const bool cross = horizontal ? positive(i, j) != positive(i + 1, j)
                                      : positive(i, j) != positive(i, j + 1);
        if (cross && !nodes.count(id)) {
            Vec2 p;
            if (horizontal) {
                p = {refine_on_edge(d.g1, g2[j], us[i], us[i + 1]), vs[j]};
            } else {
                p = {us[i], refine_on_edge(d.g2, g1[i], vs[j], vs[j + 1])};
            }
            nodes[id] = {p, {}};
        }
        return cross;
    };
    auto link = [&](long a, long b) {
        nodes[a].links.push_back(b);
        nodes[b].links.push_back(a);
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const long bottom = h_id(i, j), top = h_id(i, j + 1);
            const long left = v_id(i, j), right = v_id(i + 1, j);
            const bool cb = crossing(bottom, true, i, j);
            const bool ct = crossing(top, true, i, j + 1);
            const bool cl = crossing(left, false, i, j);
            const bool cr = crossing(right, false, i + 1, j);
            std::vector<long> hit;
            for (auto [c, id] : {std::pair{cb, bottom}, {cr, right}, {ct, top}, {cl, left}}) {
                if (c) hit.push_back(id);
            }
            if (hit.size() == 2) {
                link(hit[0], hit[1]);
            } else if (hit.size() == 4) {
                const double uc = 0.5 * (us[i] + us[i + 1]), vc = 0.5 * (vs[j] + vs[j + 1]);
                const bool centre = d.g1.eval(uc) * d.g2.eval(vc) - 1.0 >= 0.0;
                if (centre == positive(i, j)) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(top, right);
                }
            }
        }
    }

    std::vector<std::vector<Vec2>> chains;
    std::vector<bool> closed_flags;
    std::map<long, bool> seen;
    auto walk = [&](long start) {
        std::vector<Vec2> pts;
        long prev = -1, cur = start;
        bool closed = false;
        while (true) {
            seen[cur] = true;
            pts.push_back(nodes[cur].point);
            long next = -1;
            for (long nb : nodes[cur].links) {
                if (nb != prev && !seen.count(nb)) {
                    next = nb;
                    break;
                }
            }
            if (next < 0) {
                for (long nb : nodes[cur].links) closed |= nb == start && nb != prev;
                break;
            }
            prev = cur;
            cur = next;
        }
        chains.push_back(std::move(pts));
        closed_flags.push_back(closed && chains.back().size() > 2);
    };
    for (const auto& [id, node] : nodes) {
        if (node.links.size() == 1 && !seen.count(id)) walk(id);
    }
    for (const auto& [id, node] : nodes) {
        if (!seen.count(id)) walk(id);
    }

    std::vector<SingularCurve> out;
    for (std::size_t k = 0; k < chains.size(); ++k) {
        SingularCurve curve;
        curve.closed = closed_flags[k];
        std::vector<SingularPointReport> base;
        for (const Vec2& p : chains[k]) {
            base.push_back(classify_local(local_at(d, p[0], p[1]), p, tol));
        }
        const std::size_t pairs = curve.closed ? base.size() : base.size() - 1;
        for (std::size_t i = 0; i < base.size(); ++i) {
            curve.points.push_back(base[i]);
            if (i >= pairs) continue;
            const SingularPointReport& p = base[i];
            const SingularPointReport& q = base[(i + 1) % base.size()];
            const double scale = 1.0 + std::abs(p.a) + std::abs(p.b) + std::abs(q.a) + std::abs(q.b);
            std::vector<SingularPointReport> extra;
            for (double sigma : {1.0, -1.0}) {
                const double fp = sigma > 0 ? p.a_plus_b : p.a_minus_b;
                const double fq = sigma > 0 ? q.a_plus_b : q.a_minus_b;
                if (std::abs(fp) <= tol * scale || std::abs(fq) <= tol * scale) continue;
                if (sgn(fp) == sgn(fq)) continue;
                if (auto x = special_point(d, p.point, q.point, sigma)) {
                    extra.push_back(classify_local(local_at(d, (*x)[0], (*x)[1]), *x, tol));
                }
            }
            std::sort(extra.begin(), extra.end(), [&](const auto& x, const auto& y) {
                return (x.point - p.point).norm() < (y.point - p.point).norm();
            });
            for (auto& e : extra) curve.points.push_back(std::move(e));
        }
        for (const auto& r : curve.points) {
            const double res = std::abs(d.g1.eval(r.point[0]) * d.g2.eval(r.point[1]) - 1.0);
            curve.residual_max = std::max(curve.residual_max, res);
        }
        out.push_back(std::move(curve));
    }
    return out;
}

MainTheoremReport verify_main_theorem(const Minface& m, const Vec2& p,
                                      const std::vector<double>& radii,
                                      std::optional<Vec2> direction, double tol) {
    const Local l = local_at(m.weierstrass(), p[0], p[1]);
    MainTheoremReport rep;
    rep.at = classify_singular(m, p, tol);
    if (!rep.at.is_nondegenerate) {
        throw Error(ErrorKind::DegenerateSingular,
                    fmt::format("({}, {}) is a degenerate singular point", p[0], p[1]));
    }
    if (direction) {
        rep.direction = direction->normalized();
    } else {
        const double su = std::abs(l.g1.d1 * l.g2.value), sv = std::abs(l.g1.value * l.g2.d1);
        rep.direction = su >= sv ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end(), std::greater<>());
    for (double side : {1.0, -1.0}) {
        for (double r : rs) {
            const Vec2 x = p + side * r * rep.direction;
            try {
                rep.samples.push_back({side * r, gaussian_curvature(m, x[0], x[1])});
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::SingularPoint) throw;
            }
        }
    }

    using enum SingularClassification;
    switch (rep.at.tag) {
        case Swallowtail:
            rep.expected_sign = -1;
            rep.note = "front at a non-cuspidal-edge point: K < 0 and unbounded";
            break;
        case CuspidalCrossCap:
            rep.expected_sign = 1;
            rep.note = "non-front: K > 0 and unbounded";
            break;
        case CuspidalEdge:
            if (std::abs(*rep.at.kappa_s) <= tol * (1.0 + std::abs(rep.at.a_plus_b))) {
                rep.note = "cuspidal edge with kappa_s = 0: the sign of K is not determined";
            } else {
                rep.expected_sign = sgn(*rep.at.kappa_s);
                rep.note = "cuspidal edge: sign(K) is compared with sign(kappa_s)";
            }
            break;
        default:
            rep.note = "criteria inconclusive at this point";
            break;
    }

    rep.sign_constant = !rep.samples.empty();
    for (const auto& s : rep.samples) {
        rep.sign_constant &= sgn(s.K) == sgn(rep.samples.front().K);
    }
    rep.divergent = !rep.samples.empty();
    for (std::size_t i = 1; i < rep.samples.size(); ++i) {
        const auto& a = rep.samples[i - 1];
        const auto& b = rep.samples[i];
        if (sgn(a.t) == sgn(b.t)) rep.divergent &= std::abs(b.K) > std::abs(a.K);
    }
    const bool signs_match =
        rep.sign_constant && sgn(rep.samples.front().K) == rep.expected_sign;
    if (rep.at.tag == CuspidalEdge && rep.expected_sign == 0) {
        rep.passed = true;
    } else {
        rep.passed = rep.expected_sign != 0 && signs_match && rep.divergent;
    }
    return rep;
}

void write_singular_csv(const std::vector<SingularCurve>& curves, std::ostream& out) {
    out << "u,v,tag,a,b,a_minus_b,a_plus_b,kappa_s,is_front,lambda_gradient_norm\n";
    for (const auto& c : curves) {
        for (const auto& r : c.points) {
            out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.point[0], r.point[1],
                               to_string(r.tag), r.a, r.b, r.a_minus_b, r.a_plus_b,
                               r.kappa_s ? fmt::format("{}", *r.kappa_s) : std::string(),
                               r.is_front ? "true" : "false", r.lambda_gradient_norm);
        }
    }
}

void save_singular_csv(const std::vector<SingularCurve>& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::system_error(errno, std::generic_category(), path);
    write_singular_csv(curves, out);
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), path);
}

}  // namespace minface

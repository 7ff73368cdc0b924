#include "minface/mesh.hpp"

#include <cerrno>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "minface/curvature.hpp"
#include "minface/error.hpp"

namespace minface {
namespace {

Vec3 displacement_at(const NullCurve& c, double t, const char* axis, int index) {
    try {
        return c.displacement(t);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Quadrature) throw;
        throw Error(ErrorKind::Quadrature,
                    fmt::format("grid {} index {} ({} = {}): {}", axis, index, axis, t, e.what()),
                    std::nullopt, t);
    }
}

std::ofstream open_for_writing(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::system_error(errno, std::generic_category(), path);
    return out;
}

void finish_writing(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), path);
}

}  // namespace

SurfaceMesh sample_grid(const Minface& m, int nu, int nv) {
    if (nu < 2 || nv < 2) {
        throw Error(ErrorKind::InvalidData, fmt::format("grid {}x{} is below 2x2", nu, nv));
    }
    const Domain& dom = m.domain();
    SurfaceMesh mesh;
    mesh.nu = nu;
    mesh.nv = nv;

    // f = (Phi(u) + Psi(v)) / 2 + f0 separates, so each axis is integrated once.
    std::vector<double> us(nu + 1), vs(nv + 1);
    std::vector<Vec3> phi(nu + 1), psi(nv + 1);
    for (int i = 0; i <= nu; ++i) {
        us[i] = dom.u_min + dom.width() * i / nu;
        phi[i] = displacement_at(m.curves().phi, us[i], "u", i);
    }
    for (int j = 0; j <= nv; ++j) {
        vs[j] = dom.v_min + dom.height() * j / nv;
        psi[j] = displacement_at(m.curves().psi, vs[j], "v", j);
    }

    const Vec3& f0 = f0_of(m.data());
    mesh.vertices.reserve(static_cast<std::size_t>(nu + 1) * (nv + 1));
    for (int j = 0; j <= nv; ++j) {
        for (int i = 0; i <= nu; ++i) {
            MeshVertex vx;
            const double u = us[i], v = vs[j];
            vx.uv = {u, v};
            vx.position = 0.5 * (phi[i] + psi[j]) + f0;
            double scale = 1.0;
            if (m.is_weierstrass()) {
                const auto& d = m.weierstrass();
                const double gg = d.g1.eval(u) * d.g2.eval(v);
                vx.singular_proxy = std::abs(gg - 1.0);
                scale += std::abs(gg);
                vx.lambda = signed_area_density(m, u, v);
            } else {
                vx.singular_proxy = std::abs(m.singular_proxy(u, v));
                const SurfaceJet jet = m.jets_at(u, v);
                vx.lambda = jet.f_u.cross(jet.f_v).norm();
            }
            if (vx.singular_proxy <= kMeshSingularTol * scale) {
                vx.flat_tag = FlatCode::Singular;
            } else {
                vx.K = gaussian_curvature(m, u, v);
                vx.flat_tag = static_cast<FlatCode>(flat_classify(m.curves(), u, v).tag);
            }
            mesh.vertices.push_back(std::move(vx));
        }
    }

    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const int a = mesh.index(i, j), b = mesh.index(i + 1, j);
            const int c = mesh.index(i + 1, j + 1), d = mesh.index(i, j + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    }
    if (m.is_weierstrass()) {
        mesh.singular_polylines = trace_singular_set(m, std::max({16, nu, nv}));
    }
    return mesh;
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out) {
    for (const auto& v : mesh.vertices) {
        out << fmt::format("v {:.17g} {:.17g} {:.17g}\n", v.position[0], v.position[1],
                           v.position[2]);
    }
    for (const auto& f : mesh.faces) {
        out << fmt::format("f {} {} {}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    }
}

void export_obj(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    write_obj(mesh, out);
    finish_writing(out, path);
}

ObjGeometry read_obj(std::istream& in) {
    ObjGeometry g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        if (key == "v") {
            Vec3 p;
            if (!(ls >> p[0] >> p[1] >> p[2])) {
                throw Error(ErrorKind::Spec, fmt::format("OBJ line {}: malformed vertex", line_no));
            }
            g.vertices.push_back(p);
        } else if (key == "f") {
            std::array<int, 3> f{};
            for (int& k : f) {
                std::string tok;
                if (!(ls >> tok)) {
                    throw Error(ErrorKind::Spec, fmt::format("OBJ line {}: malformed face", line_no));
                }
                // Accept "i", "i/t" and "i/t/n".
                k = std::stoi(tok.substr(0, tok.find('/'))) - 1;
                if (k < 0 || k >= static_cast<int>(g.vertices.size())) {
                    throw Error(ErrorKind::Spec,
                                fmt::format("OBJ line {}: face index out of range", line_no));
                }
            }
            g.faces.push_back(f);
        }
    }
    return g;
}

ObjGeometry read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::system_error(errno, std::generic_category(), path);
    return read_obj(in);
}

void write_fields_csv(const SurfaceMesh& mesh, std::ostream& out) {
    out << "u,v,x0,x1,x2,K,lambda,flat_tag,sing_proxy\n";
    for (const auto& v : mesh.vertices) {
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{},{:.17g}\n",
                           v.uv[0], v.uv[1], v.position[0], v.position[1], v.position[2],
                           v.K ? fmt::format("{:.17g}", *v.K) : std::string(), v.lambda,
                           static_cast<int>(v.flat_tag), v.singular_proxy);
    }
}

void export_fields_csv(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out = open_for_writing(path);
    write_fields_csv(mesh, out);
    finish_writing(out, path);
}

}  // namespace minface

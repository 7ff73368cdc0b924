#pragma once

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minface/singular.hpp"
#include "minface/surface.hpp"

namespace minface {

/// Vertices with |proxy| at or below this have no curvature value.
inline constexpr double kMeshSingularTol = 1e-9;

/// -1 singular, 0 non-flat, 1 quasi-umbilic, 2 umbilic.
enum class FlatCode : int { Singular = -1, NonFlat = 0, QuasiUmbilic = 1, Umbilic = 2 };

struct MeshVertex {
    Vec2 uv = Vec2::Zero();
    Vec3 position = Vec3::Zero();
    std::optional<double> K;
    /// Signed area density in Weierstrass mode; |f_u x f_v| in raw-curve mode.
    double lambda = 0.0;
    FlatCode flat_tag = FlatCode::NonFlat;
    /// |g1 g2 - 1|, or |<phi', psi'>| / (|phi'| |psi'|) in raw-curve mode.
    double singular_proxy = 0.0;
};

struct SurfaceMesh {
    int nu = 0, nv = 0;
    /// Row-major: index j (nu + 1) + i for grid point (u_i, v_j).
    std::vector<MeshVertex> vertices;
    std::vector<std::array<int, 3>> faces;  // 0-based
    std::vector<SingularCurve> singular_polylines;

    int index(int i, int j) const { return j * (nu + 1) + i; }
};

/// Throws Error{InvalidData} for nu or nv below 2; quadrature failures are
/// rethrown with the grid location.
SurfaceMesh sample_grid(const Minface& m, int nu, int nv);

/// "v x y z" lines with 17 significant digits, then 1-based "f i j k" lines.
void write_obj(const SurfaceMesh& mesh, std::ostream& out);
void export_obj(const SurfaceMesh& mesh, const std::string& path);

struct ObjGeometry {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;  // 0-based
};

/// Reads the v and f records written by export_obj. Throws Error{Spec} on
/// malformed records.
ObjGeometry read_obj(std::istream& in);
ObjGeometry read_obj(const std::string& path);

/// Header u,v,x0,x1,x2,K,lambda,flat_tag,sing_proxy; K is empty where masked.
void write_fields_csv(const SurfaceMesh& mesh, std::ostream& out);
void export_fields_csv(const SurfaceMesh& mesh, const std::string& path);

}  // namespace minface

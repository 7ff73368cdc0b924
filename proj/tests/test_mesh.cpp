#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "minface/error.hpp"
#include "minface/gallery.hpp"
#include "minface/mesh.hpp"

using namespace minface;

namespace {

Minface enneper_on(double r) {
    auto d = std::get<RealWeierstrassData>(gallery_entry("enneper").data);
    d.domain = {-r, r, -r, r};
    return Minface(d);
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) n += line.rfind(prefix, 0) == 0;
    return n;
}

ErrorKind error_kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::Spec;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("minface_test_" + name);
}

}  // namespace

TEST(SampleGrid, SmallestGrid) {
    const SurfaceMesh mesh = sample_grid(enneper_on(1), 2, 2);
    EXPECT_EQ(mesh.vertices.size(), 9u);
    EXPECT_EQ(mesh.faces.size(), 8u);
    EXPECT_EQ(error_kind_of([] { (void)sample_grid(enneper_on(1), 1, 4); }), ErrorKind::InvalidData);
}

TEST(SampleGrid, PositionsMatchEvaluate) {
    for (const auto& entry : gallery()) {
        const Minface m(entry.data);
        const SurfaceMesh mesh = sample_grid(m, 8, 6);
        ASSERT_EQ(mesh.vertices.size(), 9u * 7u);
        for (int j = 0; j <= 6; ++j) {
            for (int i = 0; i <= 8; ++i) {
                const MeshVertex& v = mesh.vertices[mesh.index(i, j)];
                EXPECT_EQ(v.position, m.evaluate(v.uv[0], v.uv[1])) << entry.name;
            }
        }
        EXPECT_EQ(mesh.vertices.front().uv, Vec2(m.domain().u_min, m.domain().v_min));
        EXPECT_EQ(mesh.vertices[1].uv[1], m.domain().v_min);  // u varies fastest
        EXPECT_EQ(mesh.vertices.back().uv, Vec2(m.domain().u_max, m.domain().v_max));
    }
}

TEST(SampleGrid, EnneperMasksTheSingularSet) {
    // Step 1/16 on [-2, 2]: (1, -1), (2, -1/2), (1/2, -2) and their mirrors
    // are grid points on uv = -1.
    const SurfaceMesh mesh = sample_grid(enneper_on(2), 64, 64);
    int masked = 0;
    for (const auto& v : mesh.vertices) {
        const bool on = v.uv[0] * v.uv[1] == -1.0;
        EXPECT_EQ(!v.K.has_value(), on) << v.uv.transpose();
        EXPECT_EQ(v.flat_tag == FlatCode::Singular, on);
        masked += on;
        if (v.K) EXPECT_NEAR(*v.K, -16 / std::pow(1 + v.uv[0] * v.uv[1], 4), 1e-9 * std::abs(*v.K));
    }
    EXPECT_EQ(masked, 6);
    EXPECT_EQ(mesh.singular_polylines.size(), 2u);
}

TEST(SampleGrid, FlatCodesOnKchange) {
    const SurfaceMesh mesh = sample_grid(Minface(gallery_entry("kchange").data), 6, 6);
    // Domain [-1.5, 1.5]: index 3 is the axis.
    EXPECT_EQ(mesh.vertices[mesh.index(3, 3)].flat_tag, FlatCode::Umbilic);
    EXPECT_EQ(mesh.vertices[mesh.index(3, 1)].flat_tag, FlatCode::QuasiUmbilic);
    EXPECT_EQ(mesh.vertices[mesh.index(1, 1)].flat_tag, FlatCode::NonFlat);
    EXPECT_EQ(*mesh.vertices[mesh.index(3, 1)].K, 0.0);
    EXPECT_TRUE(mesh.singular_polylines.empty());
}

TEST(SampleGrid, RefinementHalvesParameterEdges) {
    const Minface m = enneper_on(1);
    auto max_edge = [](const SurfaceMesh& mesh) {
        double e = 0;
        for (const auto& f : mesh.faces) {
            for (int k = 0; k < 3; ++k) {
                e = std::max(e, (mesh.vertices[f[k]].uv - mesh.vertices[f[(k + 1) % 3]].uv).norm());
            }
        }
        return e;
    };
    const double a = max_edge(sample_grid(m, 8, 8));
    const double b = max_edge(sample_grid(m, 16, 16));
    EXPECT_NEAR(b / a, 0.5, 1e-12);
}

TEST(SampleGrid, TopologyInvariants) {
    const SurfaceMesh mesh = sample_grid(Minface(gallery_entry("ce-quasiumbilic").data), 7, 5);
    EXPECT_EQ(mesh.vertices.size(), 8u * 6u);
    EXPECT_EQ(mesh.faces.size(), 2u * 7u * 5u);
    for (const auto& f : mesh.faces) {
        for (int k : f) {
            EXPECT_GE(k, 0);
            EXPECT_LT(k, static_cast<int>(mesh.vertices.size()));
        }
        EXPECT_NE(f[0], f[1]);
        EXPECT_NE(f[1], f[2]);
        EXPECT_NE(f[0], f[2]);
    }
}

TEST(SampleGridProperty, MaskedExactlyBelowThreshold) {
    for (const auto& entry : gallery()) {
        const Minface m(entry.data);
        const SurfaceMesh mesh = sample_grid(m, 40, 40);
        for (const auto& v : mesh.vertices) {
            double scale = 1.0;
            if (m.is_weierstrass()) {
                scale += std::abs(m.weierstrass().g1.eval(v.uv[0]) * m.weierstrass().g2.eval(v.uv[1]));
            }
            EXPECT_EQ(!v.K.has_value(), v.singular_proxy <= kMeshSingularTol * scale);
        }
    }
}

TEST(Obj, LayoutAndRoundTrip) {
    const SurfaceMesh mesh = sample_grid(Minface(gallery_entry("ce-quasiumbilic").data), 2, 2);
    std::ostringstream out;
    write_obj(mesh, out);
    EXPECT_EQ(count_lines(out.str(), "v "), 9u);
    EXPECT_EQ(count_lines(out.str(), "f "), 8u);
    std::istringstream in(out.str());
    const ObjGeometry g = read_obj(in);
    ASSERT_EQ(g.vertices.size(), mesh.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        EXPECT_EQ(g.vertices[i], mesh.vertices[i].position);  // bit-exact
    }
    EXPECT_EQ(g.faces, mesh.faces);
}

TEST(Obj, FileRoundTripOnEveryGallerySurface) {
    const auto path = temp_file("roundtrip.obj");
    for (const auto& entry : gallery()) {
        const SurfaceMesh mesh = sample_grid(Minface(entry.data), 17, 13);
        export_obj(mesh, path.string());
        const ObjGeometry g = read_obj(path.string());
        ASSERT_EQ(g.vertices.size(), mesh.vertices.size());
        for (std::size_t i = 0; i < g.vertices.size(); ++i) {
            EXPECT_EQ(g.vertices[i], mesh.vertices[i].position) << entry.name;
        }
        EXPECT_EQ(g.faces, mesh.faces);
    }
    std::filesystem::remove(path);
}

TEST(Obj, Errors) {
    std::istringstream bad_vertex("v 1 2\n");
    EXPECT_EQ(error_kind_of([&] { (void)read_obj(bad_vertex); }), ErrorKind::Spec);
    std::istringstream bad_face("v 0 0 0\nf 1 2 3\n");
    EXPECT_EQ(error_kind_of([&] { (void)read_obj(bad_face); }), ErrorKind::Spec);
    EXPECT_THROW(read_obj(std::string("/nonexistent/dir/mesh.obj")), std::system_error);
    const SurfaceMesh mesh = sample_grid(enneper_on(1), 2, 2);
    EXPECT_THROW(export_obj(mesh, "/nonexistent/dir/mesh.obj"), std::system_error);
}

TEST(FieldsCsv, Layout) {
    const SurfaceMesh mesh = sample_grid(enneper_on(2), 8, 8);
    std::ostringstream out;
    write_fields_csv(mesh, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "u,v,x0,x1,x2,K,lambda,flat_tag,sing_proxy");
    std::size_t rows = 0, masked = 0;
    while (std::getline(in, line)) {
        const MeshVertex& v = mesh.vertices[rows++];
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        cells.resize(9);
        EXPECT_EQ(std::stod(cells[0]), v.uv[0]);
        EXPECT_EQ(std::stod(cells[1]), v.uv[1]);
        EXPECT_EQ(std::stod(cells[4]), v.position[2]);
        EXPECT_EQ(cells[5].empty(), !v.K.has_value());
        EXPECT_EQ(std::stoi(cells[7]), static_cast<int>(v.flat_tag));
        masked += cells[5].empty();
    }
    EXPECT_EQ(rows, mesh.vertices.size());
    EXPECT_EQ(masked, 6u);  // (1, -1), (2, -1/2), (1/2, -2) and mirrors
}

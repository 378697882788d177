#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "morphml/core/rng.hpp"
#include "morphml/geometry/descriptors.hpp"
#include "morphml/geometry/mesh.hpp"
#include "morphml/geometry/morphometrics.hpp"
#include "morphml/geometry/voxelize.hpp"
#include "morphml/synth/geometry.hpp"

using namespace morphml;
using Catch::Approx;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_ascii_cube(const std::filesystem::path& path, bool drop_one_facet = false) {
    const TriangleMesh cube = synth::unit_cube();
    std::ofstream f(path);
    f << "solid cube\n";
    const std::size_t count = cube.triangles.size() - (drop_one_facet ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& t = cube.triangles[i];
        f << "facet normal 0 0 0\nouter loop\n";
        for (auto vi : t) {
            const Vec3& v = cube.vertices[vi];
            f << "vertex " << v.x << " " << v.y << " " << v.z << "\n";
        }
        f << "endloop\nendfacet\n";
    }
    f << "endsolid cube\n";
}

TriangleMesh rigid_motion(TriangleMesh m, Rng& rng) {
    // random rotation from three Euler angles + translation
    const double a = rng.uniform(0, 6.28), b = rng.uniform(0, 6.28), c = rng.uniform(0, 6.28);
    const double ca = std::cos(a), sa = std::sin(a);
    const double cb = std::cos(b), sb = std::sin(b);
    const double cc = std::cos(c), sc = std::sin(c);
    const Vec3 t{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    for (auto& v : m.vertices) {
        Vec3 p{v.x, ca * v.y - sa * v.z, sa * v.y + ca * v.z};
        p = {cb * p.x + sb * p.z, p.y, -sb * p.x + cb * p.z};
        p = {cc * p.x - sc * p.y, sc * p.x + cc * p.y, p.z};
        v = p + t;
    }
    return m;
}

} // namespace

TEST_CASE("ascii STL unit cube loads cleaned and closed") {
    const auto path = temp_file("morphml_cube.stl");
    write_ascii_cube(path);
    const TriangleMesh mesh = load_mesh(path.string(), StlFormat::Ascii);
    CHECK(mesh.vertices.size() == 8);
    CHECK(mesh.triangles.size() == 12);
    CHECK(mesh.is_closed());
}

TEST_CASE("cube with a missing facet is open") {
    const auto path = temp_file("morphml_cube_open.stl");
    write_ascii_cube(path, true);
    const TriangleMesh mesh = load_mesh(path.string(), StlFormat::Ascii);
    CHECK(mesh.triangles.size() == 11);
    CHECK_FALSE(mesh.is_closed());
}

TEST_CASE("binary STL round-trips and truncation is named") {
    const auto path = temp_file("morphml_cube.bstl");
    save_stl_binary(synth::unit_cube(), path.string());
    const TriangleMesh mesh = load_mesh(path.string(), StlFormat::Binary);
    CHECK(mesh.vertices.size() == 8);
    CHECK(mesh.is_closed());

    // truncate mid-triangle
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto short_path = temp_file("morphml_cube_short.bstl");
    std::ofstream out(short_path, std::ios::binary);
    out.write(bytes.data(), 100);
    out.close();
    CHECK_THROWS_MATCHES(load_mesh(short_path.string(), StlFormat::Binary), FormatError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("truncated at byte 100")));
}

TEST_CASE("surface area of boxes and spheres") {
    CHECK(surface_area(synth::unit_cube()) == Approx(6.0));
    CHECK(surface_area(synth::box_mesh({0, 0, 0}, {2, 2, 2})) == Approx(24.0));
    const double sphere_area = surface_area(synth::icosphere(1.0, 4));
    CHECK(sphere_area == Approx(4.0 * std::numbers::pi).epsilon(0.005));
}

TEST_CASE("volume of cube, translated cube, sphere") {
    CHECK(volume(synth::unit_cube()) == Approx(1.0));
    CHECK(volume(synth::box_mesh({10, 10, 10}, {11, 11, 11})) == Approx(1.0));
    CHECK(volume(synth::icosphere(1.0, 4)) ==
          Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.005));

    TriangleMesh open = synth::unit_cube();
    open.triangles.pop_back();
    CHECK_THROWS_AS(volume(open), NotClosedError);
}

TEST_CASE("sphericity") {
    CHECK(sphericity(synth::icosphere(1.0, 4)) == Approx(1.0).margin(1e-2));
    CHECK(sphericity(synth::unit_cube()) == Approx(std::cbrt(std::numbers::pi / 6.0)));
    CHECK(sphericity(synth::box_mesh({0, 0, 0}, {1, 1, 10})) <
          sphericity(synth::unit_cube()));
}

TEST_CASE("undulation index") {
    CHECK(undulation_index(synth::unit_cube()) == Approx(0.0).margin(1e-9));
    CHECK(undulation_index(synth::icosphere(1.0, 3)) == Approx(0.0).margin(1e-9));

    // 10^3-cell cube with a 4x4x5 notch: notch fraction 80/1000
    const TriangleMesh notched = synth::notched_cube();
    REQUIRE(notched.is_closed());
    CHECK(undulation_index(notched) == Approx(0.08).margin(1e-6));

    CHECK(undulation_index(synth::dumbbell()) > 0.0);

    TriangleMesh flat;
    flat.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
    flat.triangles = {{0, 1, 2}, {1, 3, 2}};
    CHECK_THROWS_AS(convex_hull(flat.vertices), DegenerateGeometryError);
}

TEST_CASE("feret diameter") {
    CHECK(feret_diameter(synth::unit_cube()) == Approx(std::sqrt(3.0)));
    CHECK(feret_diameter(synth::icosphere(2.5, 3)) == Approx(5.0).epsilon(1e-6));

    TriangleMesh tri;
    tri.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 4, 0}};
    tri.triangles = {{0, 1, 2}};
    CHECK(feret_diameter(tri) == Approx(5.0));
}

TEST_CASE("feret hull pruning equals brute force") {
    const TriangleMesh sphere = synth::icosphere(1.0, 3); // 642 vertices, hull path
    REQUIRE(sphere.vertices.size() > 256);
    CHECK(feret_diameter(sphere) == detail::max_pairwise_distance(sphere.vertices));
}

TEST_CASE("rigid motion and scaling invariances") {
    Rng rng(7, "geometry-invariance");
    const TriangleMesh base = synth::notched_cube();
    const double a0 = surface_area(base), v0 = volume(base);
    const double s0 = sphericity(base), u0 = undulation_index(base);
    const double f0 = feret_diameter(base), fl0 = flatness(base), c0 = compactness(base);

    for (int i = 0; i < 3; ++i) {
        const TriangleMesh moved = rigid_motion(base, rng);
        CHECK(surface_area(moved) == Approx(a0).epsilon(1e-6));
        CHECK(volume(moved) == Approx(v0).epsilon(1e-6));
        CHECK(sphericity(moved) == Approx(s0).epsilon(1e-6));
        CHECK(undulation_index(moved) == Approx(u0).margin(1e-6));
        CHECK(feret_diameter(moved) == Approx(f0).epsilon(1e-6));
        CHECK(flatness(moved) == Approx(fl0).epsilon(1e-6));
        CHECK(compactness(moved) == Approx(c0).epsilon(1e-6));
    }

    TriangleMesh scaled = base;
    const double s = 3.5;
    for (auto& v : scaled.vertices) v = v * s;
    CHECK(surface_area(scaled) == Approx(a0 * s * s).epsilon(1e-6));
    CHECK(volume(scaled) == Approx(v0 * s * s * s).epsilon(1e-6));
    CHECK(feret_diameter(scaled) == Approx(f0 * s).epsilon(1e-6));
    CHECK(sphericity(scaled) == Approx(s0).epsilon(1e-6));
    CHECK(undulation_index(scaled) == Approx(u0).margin(1e-6));
    CHECK(flatness(scaled) == Approx(fl0).epsilon(1e-6));
    CHECK(compactness(scaled) == Approx(c0).epsilon(1e-6));
}

TEST_CASE("voxelize unit cube over exact bounding box gives shell count") {
    const VoxelGrid grid =
        voxelize_surface_in_box(synth::unit_cube(), {0, 0, 0}, 0.25, 4, 4, 4);
    CHECK(grid.occupied_count() == 56); // 4^3 - 2^3
}

TEST_CASE("voxelized thin feature count scales with resolution") {
    // thin sliver triangle along x
    TriangleMesh sliver;
    sliver.vertices = {{0, 0, 0}, {1, 1e-6, 0}, {1, 0, 1e-6}};
    sliver.triangles = {{0, 1, 2}};
    const auto count_at = [&](int res) {
        return voxelize_surface(sliver, res).occupied_count();
    };
    const double r1 = static_cast<double>(count_at(32)) / static_cast<double>(count_at(16));
    const double r2 = static_cast<double>(count_at(64)) / static_cast<double>(count_at(32));
    CHECK(r1 == Approx(2.0).epsilon(0.25));
    CHECK(r2 == Approx(2.0).epsilon(0.25));
}

TEST_CASE("every triangle centroid's cell is occupied") {
    const TriangleMesh mesh = synth::perturbed_dome(1.0, 3, 0.2, 5);
    const VoxelGrid grid = voxelize_surface(mesh, 32);
    for (const auto& t : mesh.triangles) {
        const Vec3 c = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
        const int x = static_cast<int>((c.x - grid.origin().x) / grid.spacing());
        const int y = static_cast<int>((c.y - grid.origin().y) / grid.spacing());
        const int z = static_cast<int>((c.z - grid.origin().z) / grid.spacing());
        REQUIRE(grid.at(x, y, z));
    }
}

TEST_CASE("voxelize rejects tiny resolutions and empty meshes") {
    CHECK_THROWS_AS(voxelize_surface(synth::unit_cube(), 4), InvalidArgument);
    CHECK_THROWS_AS(voxelize_surface(TriangleMesh{}, 16), InvalidArgument);
}

TEST_CASE("morphometrics of a sphere") {
    const MorphometricRecord rec = morphometrics(synth::icosphere(1.0, 4), 64);
    CHECK(rec.savol_ratio == Approx(3.0).epsilon(0.01));
    CHECK(rec.sphericity == Approx(1.0).margin(0.01));
    CHECK(rec.ui == Approx(0.0).margin(1e-9));
    CHECK(rec.flatness == Approx(1.0).margin(0.01));
    CHECK(rec.cp == Approx(1.0 / (6.0 * std::numbers::pi)).epsilon(0.02));
    CHECK_FALSE(rec.ar.has_value());
    CHECK_FALSE(rec.bf.has_value());
    CHECK_FALSE(rec.neck_width_mm.has_value());
}

TEST_CASE("morphometrics with a neck plane: hemisphere-style dome") {
    TriangleMesh mesh = synth::icosphere(1.0, 3);
    mesh.neck_plane = NeckPlane{{0, 0, 0}, {0, 0, 1}};
    const MorphometricRecord rec = morphometrics(mesh, 32);
    REQUIRE(rec.neck_width_mm.has_value());
    REQUIRE(rec.dome_height_mm.has_value());
    REQUIRE(rec.ar.has_value());
    CHECK(*rec.neck_width_mm == Approx(2.0).epsilon(0.01));
    CHECK(*rec.dome_height_mm == Approx(1.0).epsilon(0.01));
    CHECK(*rec.ar == Approx(0.5).epsilon(0.02));
    CHECK(*rec.bf == Approx(1.0).epsilon(0.02));
}

TEST_CASE("neck plane missing the mesh raises an annotation error") {
    TriangleMesh mesh = synth::icosphere(1.0, 2);
    mesh.neck_plane = NeckPlane{{0, 0, 5}, {0, 0, 1}};
    CHECK_THROWS_AS(morphometrics(mesh, 32), AnnotationError);
}

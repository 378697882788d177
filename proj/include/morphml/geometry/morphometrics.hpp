#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/fractal/fractal.hpp"
#include "morphml/geometry/descriptors.hpp"
#include "morphml/geometry/mesh.hpp"
#include "morphml/geometry/voxelize.hpp"

namespace morphml {

// One value per computable geometric feature of the schema. Neck-dependent
// entries stay empty when the mesh carries no neck-plane annotation.
struct MorphometricRecord {
    double sa = 0.0;            // surface area, mm^2
    double savol_ratio = 0.0;   // A/V, 1/mm
    double sphericity = 0.0;
    double ui = 0.0;            // undulation index
    double max_3d_diameter = 0.0; // Feret, mm
    double size_mm = 0.0;       // = Feret diameter (schema mapping)
    double flatness = 0.0;
    double cp = 0.0;            // compactness
    double fd = 0.0;            // Minkowski dimension of the voxelized surface
    double lacunarity = 0.0;    // dyadic gliding-box mean
    std::optional<double> neck_width_mm;
    std::optional<double> dome_height_mm;
    std::optional<double> ar;   // dome height / neck width
    std::optional<double> bf;   // max dome width parallel to neck plane / neck width
};

namespace detail {

// Points where mesh edges cross the neck plane.
inline std::vector<Vec3> plane_section(const TriangleMesh& mesh, const NeckPlane& plane) {
    std::vector<Vec3> pts;
    auto height = [&](const Vec3& v) { return dot(v - plane.point, plane.normal); };
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const Vec3& a = mesh.vertices[t[e]];
            const Vec3& b = mesh.vertices[t[(e + 1) % 3]];
            const double ha = height(a), hb = height(b);
            if ((ha > 0) != (hb > 0)) {
                const double s = ha / (ha - hb);
                pts.push_back(a + (b - a) * s);
            }
        }
    }
    return pts;
}

inline double max_chord(const std::vector<Vec3>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, norm2(pts[i] - pts[j]));
    return std::sqrt(best);
}

} // namespace detail

inline MorphometricRecord morphometrics(const TriangleMesh& mesh, int grid_resolution) {
    mesh.require_closed();
    MorphometricRecord rec;
    rec.sa = surface_area(mesh);
    const double v = volume(mesh);
    rec.savol_ratio = rec.sa / v;
    rec.sphericity = sphericity(mesh);
    rec.ui = undulation_index(mesh);
    rec.max_3d_diameter = feret_diameter(mesh);
    rec.size_mm = rec.max_3d_diameter;
    rec.flatness = flatness(mesh);
    rec.cp = compactness(mesh);

    const VoxelGrid grid = voxelize_surface(mesh, grid_resolution);
    rec.fd = minkowski_dimension(grid).dimension;
    rec.lacunarity = lacunarity_feature(grid);

    if (mesh.neck_plane) {
        const NeckPlane& plane = *mesh.neck_plane;
        const auto section = detail::plane_section(mesh, plane);
        if (section.size() < 2) throw AnnotationError("neck plane does not intersect the mesh");
        rec.neck_width_mm = detail::max_chord(section);

        double height = 0.0;
        std::vector<Vec3> dome_projected;
        for (const auto& vert : mesh.vertices) {
            const double h = dot(vert - plane.point, plane.normal);
            if (h > 0) {
                height = std::max(height, h);
                dome_projected.push_back(vert - plane.normal * h);
            }
        }
        if (dome_projected.empty()) throw AnnotationError("no vertices on the dome side");
        rec.dome_height_mm = height;
        rec.ar = height / *rec.neck_width_mm;
        rec.bf = detail::max_chord(dome_projected) / *rec.neck_width_mm;
    }
    return rec;
}

} // namespace morphml

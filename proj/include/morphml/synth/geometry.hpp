#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/mesh.hpp"

namespace morphml::synth {

// Axis-aligned box [lo, hi] as 12 consistently outward-wound triangles.
inline TriangleMesh box_mesh(const Vec3& lo, const Vec3& hi) {
    TriangleMesh m;
    m.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
                  {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    m.triangles = {{0, 2, 1}, {0, 3, 2},  // -z
                   {4, 5, 6}, {4, 6, 7},  // +z
                   {0, 1, 5}, {0, 5, 4},  // -y
                   {2, 3, 7}, {2, 7, 6},  // +y
                   {1, 2, 6}, {1, 6, 5},  // +x
                   {3, 0, 4}, {3, 4, 7}}; // -x
    return m;
}

inline TriangleMesh unit_cube() { return box_mesh({0, 0, 0}, {1, 1, 1}); }

// Icosphere: subdivided icosahedron projected to radius r. 10*4^n + 2 vertices.
inline TriangleMesh icosphere(double radius, int subdivisions) {
    if (radius <= 0.0 || subdivisions < 0 || subdivisions > 7)
        throw InvalidArgument("icosphere parameters out of range");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh m;
    m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = midpoints.find({key.first, key.second});
            if (it == midpoints.end()) {
                it = midpoints
                         .emplace(std::pair{key.first, key.second},
                                  static_cast<std::uint32_t>(m.vertices.size()))
                         .first;
                m.vertices.push_back((m.vertices[a] + m.vertices[b]) / 2.0);
            }
            return it->second;
        };
        std::vector<Triangle> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& tr : m.triangles) {
            const std::uint32_t ab = midpoint(tr[0], tr[1]);
            const std::uint32_t bc = midpoint(tr[1], tr[2]);
            const std::uint32_t ca = midpoint(tr[2], tr[0]);
            next.push_back({tr[0], ab, ca});
            next.push_back({tr[1], bc, ab});
            next.push_back({tr[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }
    for (auto& v : m.vertices) v = normalized(v) * radius;
    return m;
}

// Icosphere with a seeded radial sinusoidal perturbation
// r(theta, phi) = R (1 + a sin(k theta) sin(k phi)). Topology unchanged, so
// the mesh stays closed.
inline TriangleMesh perturbed_dome(double radius, int subdivisions, double amplitude,
                                   int frequency) {
    if (amplitude < 0.0 || amplitude > 0.3)
        throw InvalidArgument("perturbation amplitude must be in [0, 0.3]");
    if (frequency < 1) throw InvalidArgument("perturbation frequency must be >= 1");
    TriangleMesh m = icosphere(radius, subdivisions);
    for (auto& v : m.vertices) {
        const double r = norm(v);
        const double theta = std::acos(std::clamp(v.z / r, -1.0, 1.0));
        const double phi = std::atan2(v.y, v.x);
        const double factor = 1.0 + amplitude * std::sin(frequency * theta) *
                                        std::sin(frequency * phi);
        v = v * factor;
    }
    return m;
}

// Boundary surface of a solid voxel block pattern: closed, outward-oriented
// by construction. `solid(x,y,z)` over a nx x ny x nz block lattice of unit
// cells scaled by `cell`.
template <class SolidFn>
TriangleMesh mesh_from_voxels(int nx, int ny, int nz, double cell, SolidFn solid) {
    TriangleMesh m;
    std::map<std::array<std::int64_t, 3>, std::uint32_t> index;
    auto vertex = [&](int x, int y, int z) {
        auto it = index.find({x, y, z});
        if (it == index.end()) {
            it = index.emplace(std::array<std::int64_t, 3>{x, y, z},
                               static_cast<std::uint32_t>(m.vertices.size()))
                     .first;
            m.vertices.push_back({x * cell, y * cell, z * cell});
        }
        return it->second;
    };
    auto filled = [&](int x, int y, int z) {
        return x >= 0 && y >= 0 && z >= 0 && x < nx && y < ny && z < nz && solid(x, y, z);
    };
    // emit a quad for every solid/empty face transition, wound toward the gap
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                if (!filled(x, y, z)) continue;
                struct Face {
                    int dx, dy, dz;
                    std::array<std::array<int, 3>, 4> corners;
                };
                const Face faces[6] = {
                    {-1, 0, 0, {{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}}}},
                    {1, 0, 0, {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}}},
                    {0, -1, 0, {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}}},
                    {0, 1, 0, {{{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}}},
                    {0, 0, -1, {{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}}},
                    {0, 0, 1, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}}}};
                for (const auto& f : faces) {
                    if (filled(x + f.dx, y + f.dy, z + f.dz)) continue;
                    std::uint32_t q[4];
                    for (int c = 0; c < 4; ++c)
                        q[c] = vertex(x + f.corners[c][0], y + f.corners[c][1],
                                      z + f.corners[c][2]);
                    m.triangles.push_back({q[0], q[1], q[2]});
                    m.triangles.push_back({q[0], q[2], q[3]});
                }
            }
    return m;
}

// Unit cube with a rectangular notch of the given fractional volume carved
// into the top face. Convex hull is the full cube, so UI equals the notch
// fraction exactly.
inline TriangleMesh notched_cube(int cells = 10, int notch_x = 4, int notch_y = 4,
                                 int notch_z = 5) {
    const double cell = 1.0 / cells;
    const int x0 = (cells - notch_x) / 2, y0 = (cells - notch_y) / 2;
    return mesh_from_voxels(cells, cells, cells, cell, [&](int x, int y, int z) {
        const bool in_notch = x >= x0 && x < x0 + notch_x && y >= y0 && y < y0 + notch_y &&
                              z >= cells - notch_z;
        return !in_notch;
    });
}

// Two cubes joined by a thin bar; the hull fills the waist, so UI > 0.
inline TriangleMesh dumbbell() {
    return mesh_from_voxels(12, 4, 4, 0.25, [](int x, int y, int z) {
        if (x < 4 || x >= 8) return true;
        return y >= 1 && y < 3 && z >= 1 && z < 3; // bar
    });
}

} // namespace morphml::synth

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/vec3.hpp"

namespace morphml {

struct ConvexHull {
    std::vector<Vec3> points;            // the input point set
    std::vector<Triangle> faces;         // outward-oriented hull facets
    std::vector<std::uint32_t> vertices; // indices of points on the hull

    double volume() const {
        double v = 0.0;
        for (const auto& f : faces) {
            const Vec3& a = points[f[0]];
            const Vec3& b = points[f[1]];
            const Vec3& c = points[f[2]];
            v += dot(a, cross(b, c));
        }
        return std::abs(v) / 6.0;
    }
};

// Incremental hull. Quadratic visibility scan; point counts here are a few
// thousand at most.
inline ConvexHull convex_hull(const std::vector<Vec3>& points) {
    const std::size_t n = points.size();
    if (n < 4) throw DegenerateGeometryError("convex hull needs at least 4 points");

    Vec3 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    const double scale = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-30});
    const double eps = 1e-10 * scale;

    // Initial simplex: two extreme points, farthest from their line, farthest
    // from that plane.
    std::uint32_t i0 = 0, i1 = 0;
    double best = -1.0;
    std::uint32_t axis_min[3] = {0, 0, 0}, axis_max[3] = {0, 0, 0};
    for (std::uint32_t i = 1; i < n; ++i)
        for (int k = 0; k < 3; ++k) {
            if (points[i][k] < points[axis_min[k]][k]) axis_min[k] = i;
            if (points[i][k] > points[axis_max[k]][k]) axis_max[k] = i;
        }
    best = -1.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double d = norm2(points[axis_max[b]] - points[axis_min[a]]);
            if (d > best) {
                best = d;
                i0 = axis_min[a];
                i1 = axis_max[b];
            }
        }
    if (best <= eps * eps) throw DegenerateGeometryError("all points coincide");

    const Vec3 dir = points[i1] - points[i0];
    std::uint32_t i2 = i0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const double d = norm2(cross(points[i] - points[i0], dir));
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (best <= eps * eps * norm2(dir)) throw DegenerateGeometryError("points are collinear");

    Vec3 pn = cross(points[i1] - points[i0], points[i2] - points[i0]);
    std::uint32_t i3 = i0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const double d = std::abs(dot(points[i] - points[i0], pn));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (best <= eps * norm(pn)) throw DegenerateGeometryError("points are coplanar");

    std::vector<Triangle> faces;
    if (dot(points[i3] - points[i0], pn) > 0.0)
        faces = {{i0, i2, i1}, {i0, i1, i3}, {i1, i2, i3}, {i2, i0, i3}};
    else
        faces = {{i0, i1, i2}, {i1, i0, i3}, {i2, i1, i3}, {i0, i2, i3}};

    auto plane_dist = [&](const Triangle& f, const Vec3& p) {
        const Vec3& a = points[f[0]];
        const Vec3 nrm = cross(points[f[1]] - a, points[f[2]] - a);
        return dot(p - a, nrm) / norm(nrm);
    };

    for (std::uint32_t p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (plane_dist(faces[f], points[p]) > eps) visible.push_back(f);
        if (visible.empty()) continue;

        std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (std::size_t f : visible)
            for (int e = 0; e < 3; ++e)
                edges.insert({faces[f][e], faces[f][(e + 1) % 3]});

        std::vector<Triangle> next;
        next.reserve(faces.size());
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (!std::binary_search(visible.begin(), visible.end(), f)) next.push_back(faces[f]);
        for (const auto& [a, b] : edges)
            if (!edges.count({b, a})) next.push_back({a, b, p}); // horizon edge
        faces = std::move(next);
    }

    ConvexHull hull;
    hull.points = points;
    hull.faces = std::move(faces);
    std::set<std::uint32_t> on_hull;
    for (const auto& f : hull.faces)
        for (auto v : f) on_hull.insert(v);
    hull.vertices.assign(on_hull.begin(), on_hull.end());
    return hull;
}

} // namespace morphml

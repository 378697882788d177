#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/convex_hull.hpp"
#include "morphml/geometry/mesh.hpp"

namespace morphml {

inline double surface_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (const auto& t : mesh.triangles)
        area += detail::triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]],
                                      mesh.vertices[t[2]]);
    return area;
}

// Divergence-theorem volume; requires a closed, consistently oriented mesh.
inline double volume(const TriangleMesh& mesh) {
    mesh.require_closed();
    double v = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        v += dot(a, cross(b, c));
    }
    return std::abs(v) / 6.0;
}

// Psi = pi^(1/3) (6V)^(2/3) / A. 1 for a sphere in the analytic limit.
inline double sphericity(const TriangleMesh& mesh) {
    const double v = volume(mesh);
    const double a = surface_area(mesh);
    return std::cbrt(std::numbers::pi) * std::pow(6.0 * v, 2.0 / 3.0) / a;
}

// UI = 1 - V / V_hull. Zero for convex bodies.
inline double undulation_index(const TriangleMesh& mesh) {
    const double v = volume(mesh);
    const double vh = convex_hull(mesh.vertices).volume();
    return 1.0 - v / vh;
}

namespace detail {

inline double max_pairwise_distance(const std::vector<Vec3>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, norm2(pts[i] - pts[j]));
    return std::sqrt(best);
}

} // namespace detail

// Maximum pairwise vertex distance. Hull pruning is an optimization only;
// the result equals the brute-force answer.
inline double feret_diameter(const TriangleMesh& mesh) {
    if (mesh.vertices.size() < 2) throw InvalidArgument("feret diameter needs >= 2 vertices");
    if (mesh.vertices.size() > 256) {
        try {
            const ConvexHull hull = convex_hull(mesh.vertices);
            std::vector<Vec3> pts;
            pts.reserve(hull.vertices.size());
            for (auto i : hull.vertices) pts.push_back(mesh.vertices[i]);
            return detail::max_pairwise_distance(pts);
        } catch (const DegenerateGeometryError&) {
            // planar input; fall through to brute force
        }
    }
    return detail::max_pairwise_distance(mesh.vertices);
}

// Eigenvalues of a symmetric 3x3 matrix, ascending. Trigonometric closed form.
inline std::array<double, 3> symmetric_eigenvalues(const std::array<std::array<double, 3>, 3>& m) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if (p1 == 0.0) {
        std::array<double, 3> eig = {m[0][0], m[1][1], m[2][2]};
        std::sort(eig.begin(), eig.end());
        return eig;
    }
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    std::array<std::array<double, 3>, 3> b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
    const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> eig = {e3, e2, e1};
    std::sort(eig.begin(), eig.end());
    return eig;
}

// sqrt(least / major eigenvalue) of the vertex covariance. 1 for isotropic
// point clouds, -> 0 for flat ones.
inline double flatness(const TriangleMesh& mesh) {
    const std::size_t n = mesh.vertices.size();
    if (n < 4) throw InvalidArgument("flatness needs >= 4 vertices");
    Vec3 mean{};
    for (const auto& v : mesh.vertices) mean += v;
    mean = mean / static_cast<double>(n);
    std::array<std::array<double, 3>, 3> cov{};
    for (const auto& v : mesh.vertices) {
        const Vec3 d = v - mean;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cov[i][j] /= static_cast<double>(n);
    const auto eig = symmetric_eigenvalues(cov);
    if (eig[2] <= 0.0) throw DegenerateGeometryError("degenerate vertex covariance");
    return std::sqrt(std::max(eig[0], 0.0) / eig[2]);
}

// Compactness cp = V / (sqrt(pi) A^(3/2)); scale invariant.
inline double compactness(const TriangleMesh& mesh) {
    const double v = volume(mesh);
    const double a = surface_area(mesh);
    return v / (std::sqrt(std::numbers::pi) * std::pow(a, 1.5));
}

} // namespace morphml

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/mesh.hpp"

namespace morphml {

// 3D binary occupancy grid with isotropic spacing.
class VoxelGrid {
public:
    VoxelGrid() = default;
    VoxelGrid(int nx, int ny, int nz, Vec3 origin, double spacing)
        : nx_(nx), ny_(ny), nz_(nz), origin_(origin), spacing_(spacing),
          cells_(static_cast<std::size_t>(nx) * ny * nz, false) {
        if (nx < 1 || ny < 1 || nz < 1) throw InvalidArgument("grid dims must be >= 1");
        if (spacing <= 0.0) throw InvalidArgument("grid spacing must be positive");
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    int max_dim() const { return std::max({nx_, ny_, nz_}); }
    int min_dim() const { return std::min({nx_, ny_, nz_}); }
    Vec3 origin() const { return origin_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return cells_.size(); }
    std::size_t occupied_count() const { return occupied_; }
    bool empty() const { return occupied_ == 0; }

    bool at(int x, int y, int z) const { return cells_[index(x, y, z)]; }

    void set(int x, int y, int z, bool v = true) {
        auto ref = cells_[index(x, y, z)];
        if (ref != v) {
            occupied_ += v ? 1 : -1;
            ref = v;
        }
    }

    std::size_t index(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * ny_ + y) * nx_ + x;
    }

    const std::vector<bool>& cells() const { return cells_; }

private:
    int nx_ = 0, ny_ = 0, nz_ = 0;
    Vec3 origin_{};
    double spacing_ = 1.0;
    std::vector<bool> cells_;
    std::size_t occupied_ = 0;
};

namespace detail {

// Akenine-Moller triangle/AABB separating-axis test. Box given by center and
// half extents. Touching counts as overlap (conservative voxelization).
inline bool triangle_box_overlap(const Vec3& center, const Vec3& half, const Vec3& ta,
                                 const Vec3& tb, const Vec3& tc) {
    const Vec3 v0 = ta - center, v1 = tb - center, v2 = tc - center;

    auto axis_test = [&](const Vec3& axis) {
        const double p0 = dot(v0, axis), p1 = dot(v1, axis), p2 = dot(v2, axis);
        const double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) +
                         half.z * std::abs(axis.z);
        return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
    };

    // box face normals
    for (int k = 0; k < 3; ++k) {
        const double lo = std::min({v0[k], v1[k], v2[k]});
        const double hi = std::max({v0[k], v1[k], v2[k]});
        if (lo > half[k] || hi < -half[k]) return false;
    }
    // triangle normal
    const Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
    if (axis_test(cross(e0, e1))) return false;
    // 9 edge cross products
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& e : {e0, e1, e2})
        for (const Vec3& a : axes) {
            const Vec3 ax = cross(a, e);
            if (norm2(ax) > 0 && axis_test(ax)) return false;
        }
    return true;
}

} // namespace detail

// Mark every cell intersected by any triangle, over an explicit box [lo, hi]
// split into resolution^3 cubes on the longest axis spacing.
inline VoxelGrid voxelize_surface_in_box(const TriangleMesh& mesh, const Vec3& lo,
                                         double spacing, int nx, int ny, int nz) {
    VoxelGrid grid(nx, ny, nz, lo, spacing);
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        Vec3 tlo = a, thi = a;
        for (const Vec3& v : {b, c})
            for (int k = 0; k < 3; ++k) {
                tlo[k] = std::min(tlo[k], v[k]);
                thi[k] = std::max(thi[k], v[k]);
            }
        int ilo[3], ihi[3];
        const int dims[3] = {nx, ny, nz};
        for (int k = 0; k < 3; ++k) {
            ilo[k] = std::clamp(static_cast<int>(std::floor((tlo[k] - lo[k]) / spacing)), 0,
                                dims[k] - 1);
            ihi[k] = std::clamp(static_cast<int>(std::floor((thi[k] - lo[k]) / spacing)), 0,
                                dims[k] - 1);
        }
        const Vec3 half{spacing / 2.0, spacing / 2.0, spacing / 2.0};
        for (int z = ilo[2]; z <= ihi[2]; ++z)
            for (int y = ilo[1]; y <= ihi[1]; ++y)
                for (int x = ilo[0]; x <= ihi[0]; ++x) {
                    if (grid.at(x, y, z)) continue;
                    const Vec3 center{lo.x + (x + 0.5) * spacing, lo.y + (y + 0.5) * spacing,
                                      lo.z + (z + 0.5) * spacing};
                    if (detail::triangle_box_overlap(center, half, a, b, c))
                        grid.set(x, y, z);
                }
    }
    return grid;
}

// Cubic grid of edge `resolution` covering the mesh bounding box padded by
// one voxel on every side.
inline VoxelGrid voxelize_surface(const TriangleMesh& mesh, int resolution) {
    if (resolution < 8) throw InvalidArgument("voxelization resolution must be >= 8");
    if (mesh.empty()) throw InvalidArgument("cannot voxelize an empty mesh");
    const auto [lo, hi] = mesh.bounding_box();
    const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
    if (extent <= 0.0) throw DegenerateGeometryError("mesh bounding box has zero extent");
    // interior of resolution-2 voxels spans the box; one voxel of padding each side
    const double spacing = extent / (resolution - 2);
    const Vec3 center = (lo + hi) / 2.0;
    const double half_span = spacing * resolution / 2.0;
    const Vec3 grid_lo = {center.x - half_span, center.y - half_span, center.z - half_span};
    return voxelize_surface_in_box(mesh, grid_lo, spacing, resolution, resolution, resolution);
}

// Raw grid file: one ASCII header line "morphml-grid 1 nx ny nz ox oy oz spacing\n"
// followed by bit-packed occupancy, x fastest, little-endian bit order within a byte.
inline void save_grid(const VoxelGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path);
    f.precision(17);
    f << "morphml-grid 1 " << grid.nx() << " " << grid.ny() << " " << grid.nz() << " "
      << grid.origin().x << " " << grid.origin().y << " " << grid.origin().z << " "
      << grid.spacing() << "\n";
    std::uint8_t byte = 0;
    int nbits = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.cells()[i]) byte |= static_cast<std::uint8_t>(1u << nbits);
        if (++nbits == 8) {
            f.put(static_cast<char>(byte));
            byte = 0;
            nbits = 0;
        }
    }
    if (nbits > 0) f.put(static_cast<char>(byte));
}

inline VoxelGrid load_grid(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path);
    std::string magic;
    int version = 0, nx = 0, ny = 0, nz = 0;
    Vec3 origin;
    double spacing = 0.0;
    f >> magic >> version >> nx >> ny >> nz >> origin.x >> origin.y >> origin.z >> spacing;
    if (magic != "morphml-grid") throw FormatError(path + ": not a morphml grid file");
    if (version != 1)
        throw UnsupportedVersionError(path + ": grid version " + std::to_string(version));
    f.get(); // newline
    VoxelGrid grid(nx, ny, nz, origin, spacing);
    const std::size_t nbytes = (grid.size() + 7) / 8;
    std::vector<char> bytes(nbytes);
    f.read(bytes.data(), static_cast<std::streamsize>(nbytes));
    if (static_cast<std::size_t>(f.gcount()) != nbytes)
        throw CorruptionError(path + ": grid payload truncated");
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (bytes[i / 8] & (1 << (i % 8)))
            grid.set(static_cast<int>(i % nx), static_cast<int>((i / nx) % ny),
                     static_cast<int>(i / (static_cast<std::size_t>(nx) * ny)));
    return grid;
}

} // namespace morphml

#pragma once

#include <cmath>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/voxelize.hpp"

namespace morphml::synth {

// Menger sponge occupancy at the given depth: a 3^d-edge grid with exactly
// 20^d occupied cells.
inline VoxelGrid menger_grid(int depth) {
    if (depth < 0 || depth > 5) throw InvalidArgument("menger depth must be in [0, 5]");
    int edge = 1;
    for (int i = 0; i < depth; ++i) edge *= 3;
    VoxelGrid grid(edge, edge, edge, {0, 0, 0}, 1.0);
    auto in_sponge = [&](int x, int y, int z) {
        while (x > 0 || y > 0 || z > 0) {
            const int mx = x % 3, my = y % 3, mz = z % 3;
            if ((mx == 1) + (my == 1) + (mz == 1) >= 2) return false;
            x /= 3;
            y /= 3;
            z /= 3;
        }
        return true;
    };
    for (int z = 0; z < edge; ++z)
        for (int y = 0; y < edge; ++y)
            for (int x = 0; x < edge; ++x)
                if (in_sponge(x, y, z)) grid.set(x, y, z);
    return grid;
}

// n collinear occupied voxels along the x axis of an n^3 grid.
inline VoxelGrid line_grid(int n) {
    if (n < 1) throw InvalidArgument("line length must be >= 1");
    VoxelGrid grid(n, n, n, {0, 0, 0}, 1.0);
    for (int x = 0; x < n; ++x) grid.set(x, 0, 0);
    return grid;
}

inline VoxelGrid solid_grid(int n) {
    VoxelGrid grid(n, n, n, {0, 0, 0}, 1.0);
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) grid.set(x, y, z);
    return grid;
}

} // namespace morphml::synth

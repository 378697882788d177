#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "morphml/core/errors.hpp"
#include "morphml/geometry/voxelize.hpp"

namespace morphml {

// N(eps) over a descending scale ladder.
struct BoxCountSeries {
    std::vector<int> scales;            // box edge lengths in voxels, strictly decreasing
    std::vector<std::size_t> counts;    // occupied-box counts, same length
};

struct DimensionFit {
    double dimension = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

// Boxes are axis-aligned, anchored at the grid origin; partial edge boxes
// count as boxes.
inline BoxCountSeries box_counts(const VoxelGrid& grid, const std::vector<int>& scales) {
    if (grid.empty()) throw EmptySetError("box counting needs a nonempty grid");
    if (scales.size() < 3) throw InsufficientScalesError("box counting needs >= 3 scales");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 1) throw InvalidArgument("box scale must be >= 1 voxel");
        if (i > 0 && scales[i] >= scales[i - 1])
            throw InvalidArgument("box scales must be strictly decreasing");
    }
    // collect occupied voxel coordinates once
    std::vector<std::array<int, 3>> occupied;
    occupied.reserve(grid.occupied_count());
    for (int z = 0; z < grid.nz(); ++z)
        for (int y = 0; y < grid.ny(); ++y)
            for (int x = 0; x < grid.nx(); ++x)
                if (grid.at(x, y, z)) occupied.push_back({x, y, z});

    BoxCountSeries series;
    series.scales = scales;
    for (int eps : scales) {
        std::unordered_set<std::uint64_t> boxes;
        for (const auto& v : occupied) {
            const std::uint64_t bx = static_cast<std::uint64_t>(v[0] / eps);
            const std::uint64_t by = static_cast<std::uint64_t>(v[1] / eps);
            const std::uint64_t bz = static_cast<std::uint64_t>(v[2] / eps);
            boxes.insert((bz << 42) | (by << 21) | bx);
        }
        series.counts.push_back(boxes.size());
    }
    return series;
}

namespace detail {

inline DimensionFit ols_loglog(const BoxCountSeries& s, std::size_t skip_coarse) {
    const std::size_t n = s.scales.size() - skip_coarse;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = skip_coarse; i < s.scales.size(); ++i) {
        const double x = std::log(1.0 / s.scales[i]);
        const double y = std::log(static_cast<double>(s.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double dn = static_cast<double>(n);
    const double varx = sxx - sx * sx / dn;
    if (varx <= 0.0) throw DegenerateFitError("zero variance in log scales");
    const double cov = sxy - sx * sy / dn;
    const double vary = syy - sy * sy / dn;
    DimensionFit fit;
    fit.dimension = cov / varx;
    fit.intercept = (sy - fit.dimension * sx) / dn;
    fit.r_squared = vary > 0.0 ? std::clamp(cov * cov / (varx * vary), 0.0, 1.0) : 1.0;
    fit.points_used = static_cast<int>(n);
    return fit;
}

} // namespace detail

// OLS of log N against log(1/eps) with plateau trimming: up to the two
// coarsest scales are dropped when a drop improves r^2 by more than 0.01 or
// at least halves the misfit 1 - r^2 (coarse boxes saturate well before the
// scaling range does).
inline DimensionFit fit_dimension(const BoxCountSeries& series) {
    if (series.scales.size() != series.counts.size() || series.scales.size() < 3)
        throw InsufficientScalesError("dimension fit needs >= 3 points");
    for (auto c : series.counts)
        if (c == 0) throw InvalidArgument("box counts must be positive");
    DimensionFit best = detail::ols_loglog(series, 0);
    for (std::size_t skip = 1; skip <= 2 && series.scales.size() - skip >= 3; ++skip) {
        const DimensionFit trimmed = detail::ols_loglog(series, skip);
        const bool improves = trimmed.r_squared > best.r_squared + 0.01 ||
                              (1.0 - trimmed.r_squared) < 0.5 * (1.0 - best.r_squared);
        if (!improves) break;
        best = trimmed;
    }
    return best;
}

// Geometric scale ladder from half the largest grid edge down to 1. Dyadic by
// default; when the edge is an exact power of 3 the ladder is triadic so the
// boxes tile the grid exactly (Menger-style grids).
inline std::vector<int> dyadic_scales(int max_edge, int base = 2) {
    std::vector<int> scales;
    int s = 1;
    while (s * base <= max_edge / 2) s *= base;
    for (; s >= 1; s /= base) scales.push_back(s);
    return scales;
}

inline std::vector<int> natural_scales(int max_edge) {
    int p = 1;
    while (p < max_edge) p *= 3;
    return dyadic_scales(max_edge, p == max_edge ? 3 : 2);
}

inline DimensionFit minkowski_dimension(const VoxelGrid& grid) {
    if (grid.empty()) throw EmptySetError("empty grid");
    if (grid.max_dim() < 16) throw InvalidArgument("grid too small for dimension estimate");
    return fit_dimension(box_counts(grid, natural_scales(grid.max_dim())));
}

// Gliding-box lacunarity Lambda(r) = <M^2>/<M>^2 over every r^3 window fully
// inside the grid, stride 1. Computed with a 3D prefix-sum table.
inline double lacunarity(const VoxelGrid& grid, int box_size) {
    if (box_size < 1 || box_size > grid.min_dim())
        throw InvalidArgument("lacunarity box size must be in [1, min grid edge]");
    const int nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    // prefix[z][y][x] = sum of occupancy over [0,x) x [0,y) x [0,z)
    std::vector<std::uint32_t> prefix(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1), 0);
    auto pidx = [&](int x, int y, int z) {
        return (static_cast<std::size_t>(z) * (ny + 1) + y) * (nx + 1) + x;
    };
    for (int z = 1; z <= nz; ++z)
        for (int y = 1; y <= ny; ++y)
            for (int x = 1; x <= nx; ++x)
                prefix[pidx(x, y, z)] =
                    (grid.at(x - 1, y - 1, z - 1) ? 1u : 0u) + prefix[pidx(x - 1, y, z)] +
                    prefix[pidx(x, y - 1, z)] + prefix[pidx(x, y, z - 1)] -
                    prefix[pidx(x - 1, y - 1, z)] - prefix[pidx(x - 1, y, z - 1)] -
                    prefix[pidx(x, y - 1, z - 1)] + prefix[pidx(x - 1, y - 1, z - 1)];

    const int r = box_size;
    double sum = 0.0, sum2 = 0.0;
    std::size_t windows = 0;
    for (int z = 0; z + r <= nz; ++z)
        for (int y = 0; y + r <= ny; ++y)
            for (int x = 0; x + r <= nx; ++x) {
                const double m =
                    static_cast<double>(prefix[pidx(x + r, y + r, z + r)]) -
                    prefix[pidx(x, y + r, z + r)] - prefix[pidx(x + r, y, z + r)] -
                    prefix[pidx(x + r, y + r, z)] + prefix[pidx(x, y, z + r)] +
                    prefix[pidx(x, y + r, z)] + prefix[pidx(x + r, y, z)] - prefix[pidx(x, y, z)];
                sum += m;
                sum2 += m * m;
                ++windows;
            }
    if (windows == 0 || sum == 0.0) throw EmptySetError("no occupied window in lacunarity sweep");
    const double mean = sum / static_cast<double>(windows);
    const double mean2 = sum2 / static_cast<double>(windows);
    return mean2 / (mean * mean);
}

// Feature-table scalar: mean of Lambda over dyadic r in {2,4,8}, clamped to
// the grid edge.
inline double lacunarity_feature(const VoxelGrid& grid) {
    double total = 0.0;
    int used = 0;
    for (int r : {2, 4, 8}) {
        if (r > grid.min_dim()) break;
        total += lacunarity(grid, r);
        ++used;
    }
    if (used == 0) return lacunarity(grid, 1);
    return total / used;
}

} // namespace morphml

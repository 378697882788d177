#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "morphml/core/rng.hpp"
#include "morphml/fractal/fractal.hpp"
#include "morphml/geometry/voxelize.hpp"
#include "morphml/synth/geometry.hpp"
#include "morphml/synth/grids.hpp"

using namespace morphml;
using Catch::Approx;

TEST_CASE("box counts for a single voxel") {
    VoxelGrid grid(8, 8, 8, {0, 0, 0}, 1.0);
    grid.set(3, 3, 3);
    const BoxCountSeries s = box_counts(grid, {8, 4, 2, 1});
    CHECK(s.counts == std::vector<std::size_t>{1, 1, 1, 1});
}

TEST_CASE("box counts for a full 8^3 grid follow (8/eps)^3") {
    const BoxCountSeries s = box_counts(synth::solid_grid(8), {8, 4, 2, 1});
    CHECK(s.counts == std::vector<std::size_t>{1, 8, 64, 512});
}

TEST_CASE("box counts for a 64-voxel line") {
    const BoxCountSeries s = box_counts(synth::line_grid(64), {16, 8, 4, 2, 1});
    CHECK(s.counts == std::vector<std::size_t>{4, 8, 16, 32, 64});
}

TEST_CASE("box count preconditions") {
    VoxelGrid empty(8, 8, 8, {0, 0, 0}, 1.0);
    CHECK_THROWS_AS(box_counts(empty, {4, 2, 1}), EmptySetError);
    CHECK_THROWS_AS(box_counts(synth::solid_grid(8), {4, 2}), InsufficientScalesError);
    CHECK_THROWS_AS(box_counts(synth::solid_grid(8), {2, 4, 1}), InvalidArgument);
}

TEST_CASE("refinement never reduces counts and at most octuples them") {
    const VoxelGrid grid = voxelize_surface(synth::perturbed_dome(1.0, 3, 0.15, 4), 64);
    const BoxCountSeries s = box_counts(grid, dyadic_scales(64));
    for (std::size_t i = 1; i < s.counts.size(); ++i) {
        CHECK(s.counts[i] >= s.counts[i - 1]);
        CHECK(s.counts[i] <= 8 * s.counts[i - 1]);
    }
}

TEST_CASE("exact power laws fit exactly") {
    BoxCountSeries cube{{8, 4, 2, 1}, {1, 8, 64, 512}};
    DimensionFit fit = fit_dimension(cube);
    CHECK(fit.dimension == Approx(3.0));
    CHECK(fit.r_squared == Approx(1.0));

    BoxCountSeries line{{16, 8, 4, 2, 1}, {4, 8, 16, 32, 64}};
    CHECK(fit_dimension(line).dimension == Approx(1.0));
}

TEST_CASE("menger sponge dimension") {
    const VoxelGrid sponge = synth::menger_grid(4); // 81^3
    const DimensionFit fit = minkowski_dimension(sponge);
    CHECK(fit.dimension == Approx(std::log(20.0) / std::log(3.0)).margin(0.1));
}

TEST_CASE("smooth surface, line and solid dimensions") {
    const VoxelGrid sphere = voxelize_surface(synth::icosphere(1.0, 4), 128);
    CHECK(minkowski_dimension(sphere).dimension == Approx(2.0).margin(0.1));
    CHECK(minkowski_dimension(synth::line_grid(64)).dimension == Approx(1.0).margin(0.1));
    CHECK(minkowski_dimension(synth::solid_grid(64)).dimension == Approx(3.0).margin(0.05));
}

TEST_CASE("dimension invariant under whole-voxel translation") {
    const VoxelGrid base = voxelize_surface(synth::icosphere(1.0, 3), 64);
    VoxelGrid shifted(base.nx() + 8, base.ny() + 8, base.nz() + 8, base.origin(),
                      base.spacing());
    for (int z = 0; z < base.nz(); ++z)
        for (int y = 0; y < base.ny(); ++y)
            for (int x = 0; x < base.nx(); ++x)
                if (base.at(x, y, z)) shifted.set(x, y, z);
    // same point set, same anchoring: counts at shared scales are identical
    const auto sa = box_counts(base, {8, 4, 2, 1});
    const auto sb = box_counts(shifted, {8, 4, 2, 1});
    CHECK(sa.counts == sb.counts);
    CHECK(fit_dimension(sa).dimension == Approx(fit_dimension(sb).dimension).margin(1e-9));
}

TEST_CASE("bit-identical fits on identical grids") {
    const VoxelGrid g1 = voxelize_surface(synth::perturbed_dome(1.0, 3, 0.2, 6), 64);
    const VoxelGrid g2 = voxelize_surface(synth::perturbed_dome(1.0, 3, 0.2, 6), 64);
    const DimensionFit f1 = minkowski_dimension(g1);
    const DimensionFit f2 = minkowski_dimension(g2);
    CHECK(f1.dimension == f2.dimension);
    CHECK(f1.intercept == f2.intercept);
    CHECK(f1.r_squared == f2.r_squared);
}

TEST_CASE("lacunarity of uniform, point and checkerboard patterns") {
    CHECK(lacunarity(synth::solid_grid(8), 2) == Approx(1.0));
    CHECK(lacunarity(synth::solid_grid(8), 5) == Approx(1.0));

    VoxelGrid point(8, 8, 8, {0, 0, 0}, 1.0);
    point.set(4, 4, 4);
    CHECK(lacunarity(point, 1) == Approx(512.0));

    VoxelGrid checker(8, 8, 8, {0, 0, 0}, 1.0);
    for (int z = 0; z < 8; ++z)
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                if ((x + y + z) % 2 == 0) checker.set(x, y, z);
    CHECK(lacunarity(checker, 2) == Approx(1.0));
}

TEST_CASE("lacunarity is at least 1 on random grids") {
    Rng rng(11, "lacunarity-prop");
    for (int trial = 0; trial < 10; ++trial) {
        VoxelGrid grid(12, 12, 12, {0, 0, 0}, 1.0);
        for (int z = 0; z < 12; ++z)
            for (int y = 0; y < 12; ++y)
                for (int x = 0; x < 12; ++x)
                    if (rng.uniform() < 0.3) grid.set(x, y, z);
        if (grid.empty()) continue;
        for (int r : {1, 2, 3, 4}) CHECK(lacunarity(grid, r) >= 1.0 - 1e-12);
    }
}

TEST_CASE("grid file round-trip") {
    const VoxelGrid grid = synth::menger_grid(3);
    const auto path = (std::filesystem::temp_directory_path() / "morphml_grid.bin").string();
    save_grid(grid, path);
    const VoxelGrid back = load_grid(path);
    CHECK(back.occupied_count() == grid.occupied_count());
    CHECK(back.cells() == grid.cells());
    CHECK(back.spacing() == grid.spacing());
}

#include "edfcap/voxelize.hpp"

#include <cmath>

#include "edfcap/errors.hpp"

namespace edfcap {

namespace {

std::size_t axis_cells(double extent, double resolution) {
    const double n = std::ceil(extent / resolution - 1e-12);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

} // namespace

OccupancyGrid voxelize(const Scene& scene, double resolution, std::size_t voxel_budget) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
    scene.validate();

    GridShape shape;
    shape.resolution = resolution;
    shape.nx = axis_cells(scene.bounds.max.x - scene.bounds.min.x, resolution);
    shape.ny = axis_cells(scene.bounds.max.y - scene.bounds.min.y, resolution);
    shape.nz = axis_cells(scene.bounds.max.z - scene.bounds.min.z, resolution);
    shape.origin = scene.bounds.min + Vec3{0.5, 0.5, 0.5} * resolution;
    shape.validate();

    const unsigned __int128 total = static_cast<unsigned __int128>(shape.nx) *
                                    shape.ny * shape.nz;
    if (total > voxel_budget) {
        throw ResourceError("voxelize: " + std::to_string(shape.nx) + "x" +
                            std::to_string(shape.ny) + "x" + std::to_string(shape.nz) +
                            " voxels exceed the budget of " +
                            std::to_string(voxel_budget));
    }

    OccupancyGrid grid{shape, std::vector<std::uint8_t>(shape.cell_count(), 0)};

    // Only voxels whose center can lie inside a primitive's AABB are tested;
    // the range is widened by one cell so boundary rounding cannot drop a
    // tangent center.
    auto index_range = [&](double lo, double hi, double org, std::size_t n,
                           std::size_t& a, std::size_t& b) {
        const double fa = std::floor((lo - org) / resolution) - 1.0;
        const double fb = std::ceil((hi - org) / resolution) + 1.0;
        if (fb < 0 || fa >= static_cast<double>(n)) return false;
        a = fa < 0 ? 0 : static_cast<std::size_t>(fa);
        b = fb >= static_cast<double>(n - 1) ? n - 1 : static_cast<std::size_t>(fb);
        return true;
    };

    for (const auto& prim : scene.primitives) {
        const Box aabb = primitive_aabb(prim);
        std::size_t x0, x1, y0, y1, z0, z1;
        if (!index_range(aabb.min.x, aabb.max.x, shape.origin.x, shape.nx, x0, x1) ||
            !index_range(aabb.min.y, aabb.max.y, shape.origin.y, shape.ny, y0, y1) ||
            !index_range(aabb.min.z, aabb.max.z, shape.origin.z, shape.nz, z0, z1)) {
            continue;
        }
        for (std::size_t iz = z0; iz <= z1; ++iz) {
            for (std::size_t iy = y0; iy <= y1; ++iy) {
                for (std::size_t ix = x0; ix <= x1; ++ix) {
                    if (point_primitive_distance(shape.center(ix, iy, iz), prim) <= 0.0) {
                        grid.cells[shape.index(ix, iy, iz)] = 1;
                    }
                }
            }
        }
    }
    return grid;
}

} // namespace edfcap

#pragma once

#include <cstddef>

#include "edfcap/grid.hpp"
#include "edfcap/scene.hpp"

namespace edfcap {

/// Default cap on voxel count for a single voxelization request.
inline constexpr std::size_t kDefaultVoxelBudget = 200'000'000;

/// Rasterize scene primitives into an occupancy grid covering scene.bounds.
/// A voxel is occupied when its center lies inside or on a primitive.
/// Grid extents are ceil(extent / resolution) with centers starting at
/// bounds.min + resolution/2. Throws ResourceError if the cell count would
/// exceed the budget.
OccupancyGrid voxelize(const Scene& scene, double resolution,
                       std::size_t voxel_budget = kDefaultVoxelBudget);

} // namespace edfcap

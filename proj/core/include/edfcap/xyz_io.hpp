#pragma once

#include <optional>
#include <string>

#include "edfcap/grid.hpp"
#include "edfcap/voxelize.hpp"

namespace edfcap {

/// Build an occupancy grid from a whitespace-separated "x y z" text cloud.
/// Lines that are empty or start with '#' are skipped; anything else that
/// does not parse as three finite reals raises FormatError naming the line.
///
/// With explicit bounds, points outside them are ignored; otherwise bounds
/// are the cloud's AABB padded by one voxel on each side. A voxel is
/// occupied when at least one point falls in it. Empty effective clouds are
/// rejected (no way to place a grid).
OccupancyGrid ingest_xyz(const std::string& path, double resolution,
                         std::optional<Box> bounds = std::nullopt,
                         std::size_t voxel_budget = kDefaultVoxelBudget);

} // namespace edfcap

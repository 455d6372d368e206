#pragma once

#include "edfcap/grid.hpp"

namespace edfcap {

/// Exact Euclidean distance transform of an occupancy grid.
///
/// Each output value is the exact distance from the voxel center to the
/// nearest occupied voxel center (in world units), computed by separable
/// lower-envelope passes over integer squared offsets, then clamped to
/// max_distance. A grid with no occupied voxel saturates everywhere.
DistanceGrid edt(const OccupancyGrid& occ, double max_distance);

} // namespace edfcap

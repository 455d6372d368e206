#pragma once

#include <string>

#include "edfcap/grid.hpp"

namespace edfcap {

/// Binary grid container, little-endian, magic "VGD1":
///   u32 magic, u32 version(=1), u8 kind(0 occupancy / 1 distance),
///   u64 nx, u64 ny, u64 nz, f64 resolution, f64 origin xyz,
///   f64 max_distance (0 for occupancy),
/// then the payload x-fastest: u8 per cell (occupancy) or f32 per cell
/// (distance). Malformed files raise FormatError naming the byte offset.

void save_grid(const OccupancyGrid& grid, const std::string& path);
void save_grid(const DistanceGrid& grid, const std::string& path);

OccupancyGrid load_occupancy_grid(const std::string& path);
DistanceGrid load_distance_grid(const std::string& path);

/// Peeks at the header. Returns 0 for occupancy, 1 for distance.
int grid_file_kind(const std::string& path);

} // namespace edfcap

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edfcap/geometry.hpp"

namespace edfcap {

/// How to interpret a distance stored at a voxel center.
enum class LookupMode : std::uint8_t {
    Raw,          ///< stored center distance, no correction
    Conservative, ///< subtract half the voxel diagonal, clamp at 0
};

/// What to report for points outside the grid.
enum class OobPolicy : std::uint8_t {
    TreatFree,     ///< max_distance — outside world assumed obstacle-free
    TreatOccupied, ///< 0 — outside world assumed solid
};

struct GridShape {
    std::size_t nx = 0, ny = 0, nz = 0;
    double resolution = 0;      // voxel edge length, > 0
    Vec3 origin{0, 0, 0};       // world position of voxel (0,0,0)'s center

    std::size_t cell_count() const { return nx * ny * nz; }
    std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return ix + nx * (iy + ny * iz); // x fastest
    }
    Vec3 center(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return {origin.x + static_cast<double>(ix) * resolution,
                origin.y + static_cast<double>(iy) * resolution,
                origin.z + static_cast<double>(iz) * resolution};
    }
    /// Nearest voxel indices for p, or false if p is outside the grid.
    /// A point belongs to the voxel whose center is nearest (ties toward +).
    bool locate(const Vec3& p, std::size_t& ix, std::size_t& iy, std::size_t& iz) const;

    void validate() const; // throws std::invalid_argument
    bool operator==(const GridShape&) const = default;
};

struct OccupancyGrid {
    GridShape shape;
    std::vector<std::uint8_t> cells; // 0 free, 1 occupied; shape.cell_count() entries

    bool occupied(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return cells[shape.index(ix, iy, iz)] != 0;
    }
    std::size_t occupied_count() const;
};

struct DistanceGrid {
    GridShape shape;
    double max_distance = 0;    // saturation value, > 0
    std::vector<double> values; // center distances, clamped to [0, max_distance]

    double at(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return values[shape.index(ix, iy, iz)];
    }
};

/// Distance at p per the lookup mode; out-of-bounds handled by policy.
double lookup(const DistanceGrid& grid, const Vec3& p,
              LookupMode mode = LookupMode::Conservative,
              OobPolicy oob = OobPolicy::TreatFree);

/// Conservative margin removed from stored values: half the voxel diagonal.
inline double conservative_margin(double resolution) {
    return 0.8660254037844386 * resolution; // sqrt(3)/2
}

} // namespace edfcap

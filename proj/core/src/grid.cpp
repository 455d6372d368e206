#include "edfcap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace edfcap {

void GridShape::validate() const {
    if (nx == 0 || ny == 0 || nz == 0) {
        throw std::invalid_argument("grid dims must be positive");
    }
    // guard index arithmetic: nx*(ny*nz) must fit without wrap
    const auto limit = static_cast<std::size_t>(-1);
    if (ny != 0 && nz > limit / ny) throw std::invalid_argument("grid too large");
    if (nx != 0 && ny * nz > limit / nx) throw std::invalid_argument("grid too large");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw std::invalid_argument("grid resolution must be finite and > 0");
    }
    if (!origin.finite()) throw std::invalid_argument("grid origin must be finite");
}

bool GridShape::locate(const Vec3& p, std::size_t& ix, std::size_t& iy,
                       std::size_t& iz) const {
    const double fx = std::floor((p.x - origin.x) / resolution + 0.5);
    const double fy = std::floor((p.y - origin.y) / resolution + 0.5);
    const double fz = std::floor((p.z - origin.z) / resolution + 0.5);
    if (fx < 0 || fy < 0 || fz < 0 || fx >= static_cast<double>(nx) ||
        fy >= static_cast<double>(ny) || fz >= static_cast<double>(nz)) {
        return false;
    }
    ix = static_cast<std::size_t>(fx);
    iy = static_cast<std::size_t>(fy);
    iz = static_cast<std::size_t>(fz);
    return true;
}

std::size_t OccupancyGrid::occupied_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](std::uint8_t c) { return c != 0; }));
}

double lookup(const DistanceGrid& grid, const Vec3& p, LookupMode mode, OobPolicy oob) {
    std::size_t ix, iy, iz;
    if (!grid.shape.locate(p, ix, iy, iz)) {
        return oob == OobPolicy::TreatFree ? grid.max_distance : 0.0;
    }
    const double stored = grid.at(ix, iy, iz);
    if (mode == LookupMode::Raw) return stored;
    return std::max(0.0, stored - conservative_margin(grid.shape.resolution));
}

} // namespace edfcap

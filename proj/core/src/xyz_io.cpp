#include "edfcap/xyz_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>

#include "edfcap/errors.hpp"

namespace edfcap {

namespace {

bool parse_point(const std::string& line, Vec3& p) {
    const char* s = line.c_str();
    char* end = nullptr;
    double v[3];
    for (int i = 0; i < 3; ++i) {
        v[i] = std::strtod(s, &end);
        if (end == s || !std::isfinite(v[i])) return false;
        s = end;
    }
    while (*s == ' ' || *s == '\t' || *s == '\r') ++s;
    if (*s != '\0') return false;
    p = {v[0], v[1], v[2]};
    return true;
}

bool inside(const Box& b, const Vec3& p) {
    return p.x >= b.min.x && p.x <= b.max.x && p.y >= b.min.y && p.y <= b.max.y &&
           p.z >= b.min.z && p.z <= b.max.z;
}

std::size_t axis_cells(double extent, double resolution) {
    const double n = std::ceil(extent / resolution - 1e-12);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

} // namespace

OccupancyGrid ingest_xyz(const std::string& path, double resolution,
                         std::optional<Box> bounds, std::size_t voxel_budget) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open point cloud " + path);

    std::vector<Vec3> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        Vec3 p;
        if (!parse_point(line, p)) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected three numbers, got \"" + line + "\"");
        }
        if (bounds && !inside(*bounds, p)) continue;
        points.push_back(p);
    }
    if (in.bad()) throw IoError("read failure on " + path);
    if (points.empty()) {
        throw FormatError(path + ": no usable points" +
                          (bounds ? " inside the given bounds" : ""));
    }

    Box box;
    if (bounds) {
        box = *bounds;
    } else {
        box.min = box.max = points[0];
        for (const auto& p : points) {
            box.min = componentwise_min(box.min, p);
            box.max = componentwise_max(box.max, p);
        }
        const Vec3 pad{resolution, resolution, resolution};
        box.min = box.min - pad;
        box.max = box.max + pad;
    }

    GridShape sh;
    sh.resolution = resolution;
    sh.nx = axis_cells(box.max.x - box.min.x, resolution);
    sh.ny = axis_cells(box.max.y - box.min.y, resolution);
    sh.nz = axis_cells(box.max.z - box.min.z, resolution);
    sh.origin = box.min + Vec3{0.5, 0.5, 0.5} * resolution;
    sh.validate();
    const unsigned __int128 total = static_cast<unsigned __int128>(sh.nx) * sh.ny * sh.nz;
    if (total > voxel_budget) {
        throw ResourceError("ingest_xyz: " + std::to_string(sh.nx) + "x" +
                            std::to_string(sh.ny) + "x" + std::to_string(sh.nz) +
                            " voxels exceed the budget of " +
                            std::to_string(voxel_budget));
    }

    OccupancyGrid grid{sh, std::vector<std::uint8_t>(sh.cell_count(), 0)};
    for (const auto& p : points) {
        // In-bounds points on the outer face still belong to the last voxel.
        auto idx = [&](double c, double org, std::size_t n) {
            double f = std::floor((c - org) / resolution + 0.5);
            if (f < 0) f = 0;
            if (f > static_cast<double>(n - 1)) f = static_cast<double>(n - 1);
            return static_cast<std::size_t>(f);
        };
        grid.cells[sh.index(idx(p.x, sh.origin.x, sh.nx), idx(p.y, sh.origin.y, sh.ny),
                            idx(p.z, sh.origin.z, sh.nz))] = 1;
    }
    return grid;
}

} // namespace edfcap

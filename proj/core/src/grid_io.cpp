#include "edfcap/grid_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "edfcap/errors.hpp"

namespace edfcap {

namespace {

// Header layout (little-endian), payload starts at byte 73:
//   0  magic "VGD1"
//   4  u32 version = 1
//   8  u8  kind: 0 occupancy, 1 distance
//   9  u64 nx   17 u64 ny   25 u64 nz
//  33  f64 resolution
//  41  f64 origin x   49 y   57 z
//  65  f64 max_distance (0 for occupancy)
constexpr std::size_t kHeaderSize = 73;
constexpr char kMagic[4] = {'V', 'G', 'D', '1'};

void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }
void put_f32(std::string& b, float v) { put_u32(b, std::bit_cast<std::uint32_t>(v)); }

struct Reader {
    std::string path;
    std::string data;
    std::size_t pos = 0;

    void need(std::size_t n, const char* what) const {
        if (pos + n > data.size()) {
            throw FormatError(path + ": truncated at byte offset " +
                              std::to_string(data.size()) + " while reading " + what +
                              " (offset " + std::to_string(pos) + ")");
        }
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i]))
                 << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i]))
                 << (8 * i);
        pos += 8;
        return v;
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return static_cast<std::uint8_t>(data[pos++]);
    }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open grid file " + path);
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path);
    return data;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) throw IoError("write failure on " + path);
}

std::string header_bytes(int kind, const GridShape& sh, double max_distance) {
    std::string b;
    b.reserve(kHeaderSize);
    b.append(kMagic, 4);
    put_u32(b, 1);
    b.push_back(static_cast<char>(kind));
    put_u64(b, sh.nx);
    put_u64(b, sh.ny);
    put_u64(b, sh.nz);
    put_f64(b, sh.resolution);
    put_f64(b, sh.origin.x);
    put_f64(b, sh.origin.y);
    put_f64(b, sh.origin.z);
    put_f64(b, max_distance);
    return b;
}

GridShape read_header(Reader& r, int expected_kind, double& max_distance) {
    r.need(4, "magic");
    if (std::memcmp(r.data.data(), kMagic, 4) != 0) {
        throw FormatError(r.path + ": bad magic at byte offset 0 (expected \"VGD1\")");
    }
    r.pos = 4;
    const std::uint32_t version = r.u32("version");
    if (version != 1) {
        throw FormatError(r.path + ": unsupported version " + std::to_string(version) +
                          " at byte offset 4");
    }
    const int kind = r.u8("kind");
    if (kind != 0 && kind != 1) {
        throw FormatError(r.path + ": unknown grid kind " + std::to_string(kind) +
                          " at byte offset 8");
    }
    if (kind != expected_kind) {
        throw FormatError(r.path + ": grid kind " + std::to_string(kind) +
                          " at byte offset 8, expected " + std::to_string(expected_kind) +
                          (expected_kind == 0 ? " (occupancy)" : " (distance)"));
    }
    GridShape sh;
    sh.nx = r.u64("nx");
    sh.ny = r.u64("ny");
    sh.nz = r.u64("nz");
    sh.resolution = r.f64("resolution");
    sh.origin.x = r.f64("origin.x");
    sh.origin.y = r.f64("origin.y");
    sh.origin.z = r.f64("origin.z");
    max_distance = r.f64("max_distance");
    try {
        sh.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(r.path + ": bad header (offsets 9..72): " +
                          std::string(e.what()));
    }
    return sh;
}

void check_exact_size(const Reader& r, std::size_t expected) {
    if (r.data.size() > expected) {
        throw FormatError(r.path + ": " + std::to_string(r.data.size() - expected) +
                          " trailing bytes at offset " + std::to_string(expected));
    }
}

} // namespace

void save_grid(const OccupancyGrid& grid, const std::string& path) {
    grid.shape.validate();
    if (grid.cells.size() != grid.shape.cell_count()) {
        throw std::invalid_argument("occupancy cell count mismatch");
    }
    std::string b = header_bytes(0, grid.shape, 0.0);
    b.reserve(b.size() + grid.cells.size());
    for (std::uint8_t c : grid.cells) b.push_back(c ? 1 : 0);
    write_file(path, b);
}

void save_grid(const DistanceGrid& grid, const std::string& path) {
    grid.shape.validate();
    if (grid.values.size() != grid.shape.cell_count()) {
        throw std::invalid_argument("distance value count mismatch");
    }
    std::string b = header_bytes(1, grid.shape, grid.max_distance);
    b.reserve(b.size() + 4 * grid.values.size());
    for (double v : grid.values) put_f32(b, static_cast<float>(v));
    write_file(path, b);
}

OccupancyGrid load_occupancy_grid(const std::string& path) {
    Reader r{path, slurp(path)};
    double maxd = 0;
    const GridShape sh = read_header(r, 0, maxd);
    const std::size_t n = sh.cell_count();
    r.need(n, "occupancy payload");
    OccupancyGrid grid{sh, std::vector<std::uint8_t>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<unsigned char>(r.data[r.pos + i]);
        if (c > 1) {
            throw FormatError(path + ": occupancy byte " + std::to_string(c) +
                              " at offset " + std::to_string(r.pos + i) +
                              " (must be 0 or 1)");
        }
        grid.cells[i] = c;
    }
    check_exact_size(r, kHeaderSize + n);
    return grid;
}

DistanceGrid load_distance_grid(const std::string& path) {
    Reader r{path, slurp(path)};
    double maxd = 0;
    const GridShape sh = read_header(r, 1, maxd);
    const std::size_t n = sh.cell_count();
    r.need(4 * n, "distance payload");
    DistanceGrid grid{sh, maxd, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        grid.values[i] = static_cast<double>(r.f32("distance value"));
    }
    check_exact_size(r, kHeaderSize + 4 * n);
    return grid;
}

int grid_file_kind(const std::string& path) {
    Reader r{path, slurp(path)};
    r.need(4, "magic");
    if (std::memcmp(r.data.data(), kMagic, 4) != 0) {
        throw FormatError(path + ": bad magic at byte offset 0 (expected \"VGD1\")");
    }
    r.pos = 4;
    const std::uint32_t version = r.u32("version");
    if (version != 1) {
        throw FormatError(path + ": unsupported version " + std::to_string(version) +
                          " at byte offset 4");
    }
    const int kind = r.u8("kind");
    if (kind != 0 && kind != 1) {
        throw FormatError(path + ": unknown grid kind " + std::to_string(kind) +
                          " at byte offset 8");
    }
    return kind;
}

} // namespace edfcap

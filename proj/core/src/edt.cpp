#include "edfcap/edt.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace edfcap {

namespace {

// 1D lower-envelope pass over parabolas rooted at integer positions with
// integer squared heights (Felzenszwalb/Huttenlocher). All quantities stay
// well below 2^53, so the double arithmetic below is exact on integers and
// any envelope-boundary tie can only pick a parabola of equal value.
void dt1d(const std::int64_t* f, std::int64_t* d, int n, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    auto intersect = [&](int p, int q) {
        return (static_cast<double>(f[q] - f[p]) +
                static_cast<double>(q) * q - static_cast<double>(p) * p) /
               (2.0 * (q - p));
    };
    for (int q = 1; q < n; ++q) {
        double s = intersect(v[k], q);
        while (s <= z[k]) {
            --k;
            s = intersect(v[k], q);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const std::int64_t dx = q - v[k];
        d[q] = dx * dx + f[v[k]];
    }
}

} // namespace

DistanceGrid edt(const OccupancyGrid& occ, double max_distance) {
    occ.shape.validate();
    if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
        throw std::invalid_argument("max_distance must be finite and > 0");
    }
    const auto& sh = occ.shape;
    const std::size_t n = sh.cell_count();
    const std::size_t dmax = std::max({sh.nx, sh.ny, sh.nz});
    if (dmax > 20'000'000) throw std::invalid_argument("grid dimension too large");
    // Upper bound on any real squared voxel distance, used as "no site yet".
    const std::int64_t inf =
        3 * static_cast<std::int64_t>(dmax) * static_cast<std::int64_t>(dmax) + 1;

    std::vector<std::int64_t> vol(n);
    for (std::size_t i = 0; i < n; ++i) vol[i] = occ.cells[i] ? 0 : inf;

    std::vector<std::int64_t> row(dmax), out(dmax);
    std::vector<int> v(dmax);
    std::vector<double> z(dmax + 1);

    auto sweep = [&](std::size_t len, std::size_t stride, std::size_t base) {
        for (std::size_t i = 0; i < len; ++i) row[i] = vol[base + i * stride];
        dt1d(row.data(), out.data(), static_cast<int>(len), v.data(), z.data());
        for (std::size_t i = 0; i < len; ++i) vol[base + i * stride] = out[i];
    };

    for (std::size_t iz = 0; iz < sh.nz; ++iz)
        for (std::size_t iy = 0; iy < sh.ny; ++iy)
            sweep(sh.nx, 1, sh.index(0, iy, iz));
    for (std::size_t iz = 0; iz < sh.nz; ++iz)
        for (std::size_t ix = 0; ix < sh.nx; ++ix)
            sweep(sh.ny, sh.nx, sh.index(ix, 0, iz));
    for (std::size_t iy = 0; iy < sh.ny; ++iy)
        for (std::size_t ix = 0; ix < sh.nx; ++ix)
            sweep(sh.nz, sh.nx * sh.ny, sh.index(ix, iy, 0));

    DistanceGrid dist{sh, max_distance, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t d2 = vol[i];
        dist.values[i] = d2 >= inf
                             ? max_distance
                             : std::min(max_distance,
                                        sh.resolution * std::sqrt(static_cast<double>(d2)));
    }
    return dist;
}

} // namespace edfcap

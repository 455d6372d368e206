#include "edfcap/geometry.hpp"

#include <algorithm>

namespace edfcap {

void validate(const Primitive& prim) {
    if (const auto* s = std::get_if<Sphere>(&prim)) {
        if (!s->center.finite() || !std::isfinite(s->radius)) {
            throw std::invalid_argument("sphere has non-finite fields");
        }
        if (!(s->radius > 0.0)) {
            throw std::invalid_argument("sphere radius must be > 0");
        }
        return;
    }
    const auto& b = std::get<Box>(prim);
    if (!b.min.finite() || !b.max.finite()) {
        throw std::invalid_argument("box has non-finite fields");
    }
    if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z)) {
        throw std::invalid_argument("box min must be < max componentwise");
    }
}

double point_segment_distance(const Vec3& p, const Segment& seg) {
    const double t =
        std::clamp((p - seg.start()).dot(seg.direction()), 0.0, seg.length());
    return (p - (seg.start() + t * seg.direction())).norm();
}

double point_primitive_distance(const Vec3& p, const Primitive& prim) {
    if (const auto* s = std::get_if<Sphere>(&prim)) {
        return std::max(0.0, (p - s->center).norm() - s->radius);
    }
    const auto& b = std::get<Box>(prim);
    const Vec3 d{std::max({b.min.x - p.x, 0.0, p.x - b.max.x}),
                 std::max({b.min.y - p.y, 0.0, p.y - b.max.y}),
                 std::max({b.min.z - p.z, 0.0, p.z - b.max.z})};
    return d.norm();
}

Box primitive_aabb(const Primitive& prim) {
    if (const auto* s = std::get_if<Sphere>(&prim)) {
        const Vec3 r{s->radius, s->radius, s->radius};
        return {s->center - r, s->center + r};
    }
    return std::get<Box>(prim);
}

bool aabb_overlaps(const Box& a, const Box& b) {
    return a.min.x <= b.max.x && b.min.x <= a.max.x &&
           a.min.y <= b.max.y && b.min.y <= a.max.y &&
           a.min.z <= b.max.z && b.min.z <= a.max.z;
}

} // namespace edfcap

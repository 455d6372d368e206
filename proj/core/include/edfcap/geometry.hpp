#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

namespace edfcap {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double norm_squared() const { return x * x + y * y + z * z; }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    /// Exact comparison; intended for grid metadata and tests, not geometry.
    bool operator==(const Vec3&) const = default;
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec3 componentwise_min(const Vec3& a, const Vec3& b) {
    return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}
inline Vec3 componentwise_max(const Vec3& a, const Vec3& b) {
    return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}

/// A line segment with cached length and unit direction, used as the central
/// axis of a slender link. Degenerate segments (start == end) are rejected at
/// construction since the direction would be undefined.
class Segment {
public:
    Segment(const Vec3& start, const Vec3& end) : start_(start), end_(end) {
        if (!start.finite() || !end.finite()) {
            throw std::invalid_argument("segment endpoints must be finite");
        }
        length_ = (end - start).norm();
        if (length_ <= 0.0) {
            throw std::invalid_argument("degenerate segment: start == end");
        }
        direction_ = (end - start) * (1.0 / length_);
    }

    const Vec3& start() const { return start_; }
    const Vec3& end() const { return end_; }
    double length() const { return length_; }
    const Vec3& direction() const { return direction_; }

    /// Point on the axis at arc-length alpha from the start. alpha outside
    /// [0, length] is a contract violation, not clamped.
    Vec3 point_at(double alpha) const {
        if (alpha < 0.0 || alpha > length_) {
            throw std::domain_error("axis parameter " + std::to_string(alpha) +
                                    " outside [0, " + std::to_string(length_) + "]");
        }
        return start_ + alpha * direction_;
    }

private:
    Vec3 start_;
    Vec3 end_;
    double length_;
    Vec3 direction_;
};

struct Capsule {
    Segment axis;
    double radius;

    Capsule(const Segment& axis_, double radius_) : axis(axis_), radius(radius_) {
        if (!(radius > 0.0)) throw std::invalid_argument("capsule radius must be > 0");
    }
};

struct Sphere {
    Vec3 center;
    double radius = 0.0;
};

struct Box {
    Vec3 min;
    Vec3 max;
};

using Primitive = std::variant<Sphere, Box>;

void validate(const Primitive& prim);

/// Exact minimum distance from a point to a segment.
double point_segment_distance(const Vec3& p, const Segment& seg);

/// Unsigned exterior distance from a point to a primitive; 0 inside or on the
/// boundary.
double point_primitive_distance(const Vec3& p, const Primitive& prim);

Box primitive_aabb(const Primitive& prim);
bool aabb_overlaps(const Box& a, const Box& b);

} // namespace edfcap

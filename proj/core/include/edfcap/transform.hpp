#pragma once

#include <array>
#include <cmath>

#include "edfcap/geometry.hpp"

namespace edfcap {

/// Row-major 3x3 rotation matrix.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    /// Rodrigues rotation about a unit axis.
    static Mat3 axis_angle(const Vec3& axis, double angle) {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double t = 1.0 - c;
        const double x = axis.x, y = axis.y, z = axis.z;
        Mat3 r;
        r.m = {t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
               t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
               t * x * z - s * y, t * y * z + s * x, t * z * z + c};
        return r;
    }

    /// Intrinsic roll-pitch-yaw: Rz(yaw) * Ry(pitch) * Rx(roll).
    static Mat3 rpy(double roll, double pitch, double yaw) {
        return axis_angle({0, 0, 1}, yaw) * axis_angle({0, 1, 0}, pitch) *
               axis_angle({1, 0, 0}, roll);
    }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                r.m[3 * i + j] = m[3 * i + 0] * o.m[0 + j] +
                                 m[3 * i + 1] * o.m[3 + j] +
                                 m[3 * i + 2] * o.m[6 + j];
            }
        }
        return r;
    }
};

struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }
    static RigidTransform from_translation(const Vec3& t) { return {Mat3::identity(), t}; }
    static RigidTransform from_rotation(const Mat3& r) { return {r, Vec3{}}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    RigidTransform operator*(const RigidTransform& o) const {
        return {rotation * o.rotation, rotation * o.translation + translation};
    }
};

} // namespace edfcap

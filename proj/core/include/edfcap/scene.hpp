#pragma once

#include <string>
#include <vector>

#include "edfcap/geometry.hpp"

namespace edfcap {

/// A static obstacle set: a list of primitives inside a world AABB.
struct Scene {
    std::vector<Primitive> primitives;
    Box bounds{{0, 0, 0}, {0, 0, 0}};

    /// Throws std::invalid_argument if bounds are empty or a primitive lies
    /// entirely outside them.
    void validate() const;
};

inline constexpr double kEmptySceneDistance = 1e9;

/// Exact distance from p to the nearest primitive surface (0 inside any
/// primitive). An empty scene returns the far-field sentinel.
double analytic_distance(const Scene& scene, const Vec3& p,
                         double empty_distance = kEmptySceneDistance);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

Scene scene_from_json_text(const std::string& text, const std::string& origin = "<string>");
std::string scene_to_json_text(const Scene& scene);

} // namespace edfcap

#pragma once

#include <cstdint>
#include <string>

#include "edfcap/scene.hpp"

namespace edfcap {

/// Synthetic outdoor test scene: a ground slab, vertical box "trunks", and
/// sphere clutter, scattered uniformly but kept out of a clear cylinder
/// around the origin where the robot base sits.
struct ForestParams {
    std::uint64_t seed = 7;
    double extent = 20;            // side of the square footprint, meters
    std::size_t n_trunks = 40;
    double trunk_radius_lo = 0.15, trunk_radius_hi = 0.45;
    double trunk_height_lo = 4.0, trunk_height_hi = 9.0;
    double clutter_fraction = 0.5; // spheres per trunk
    double clear_radius = 2.0;     // keep-out cylinder around the base
    bool ground = true;            // slab under everything

    bool operator==(const ForestParams&) const = default;
};

Scene gen_forest_scene(const ForestParams& params);

/// Stable identifier echoed into benchmark reports.
std::string forest_scene_id(const ForestParams& params);

/// Parse "forest:seed=7,extent=20,trunks=40,clutter=0.5" (any subset of
/// keys, any order) into params. Throws FormatError on unknown keys.
ForestParams parse_forest_spec(const std::string& spec);

} // namespace edfcap

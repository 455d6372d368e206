#include "edfcap/forest.hpp"

#include <cmath>
#include <cstdio>

#include "edfcap/errors.hpp"
#include "edfcap/rng.hpp"

namespace edfcap {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Squared distance from the vertical base axis to the footprint rectangle.
double footprint_dist2(double x0, double y0, double x1, double y1) {
    const double dx = std::max({x0, 0.0, -x1});
    const double dy = std::max({y0, 0.0, -y1});
    return dx * dx + dy * dy;
}

} // namespace

Scene gen_forest_scene(const ForestParams& p) {
    if (!(p.extent > 0.0)) throw std::invalid_argument("extent must be > 0");
    const double half = 0.5 * p.extent;
    Scene scene;
    scene.bounds = {{-half - 1.0, -half - 1.0, -1.0},
                    {half + 1.0, half + 1.0, p.trunk_height_hi + 1.0}};
    if (p.ground) {
        scene.primitives.push_back(Box{{-half, -half, -0.5}, {half, half, 0.0}});
    }

    SplitMix64 rng{mix64(p.seed, 0x666f726573ull)};
    auto place = [&](double margin, double& x, double& y) {
        // Rejection keeps the base cylinder clear; bounded so a tiny scene
        // cannot spin forever.
        for (int attempt = 0; attempt < 1000; ++attempt) {
            x = uniform_in(rng.next(), -half + margin, half - margin);
            y = uniform_in(rng.next(), -half + margin, half - margin);
            if (footprint_dist2(x - margin, y - margin, x + margin, y + margin) >
                p.clear_radius * p.clear_radius) {
                return true;
            }
        }
        return false;
    };

    for (std::size_t i = 0; i < p.n_trunks; ++i) {
        const double r = uniform_in(rng.next(), p.trunk_radius_lo, p.trunk_radius_hi);
        const double h = uniform_in(rng.next(), p.trunk_height_lo, p.trunk_height_hi);
        double x, y;
        if (!place(r, x, y)) continue;
        scene.primitives.push_back(Box{{x - r, y - r, 0.0}, {x + r, y + r, h}});
    }

    const auto n_spheres =
        static_cast<std::size_t>(std::llround(p.clutter_fraction * p.n_trunks));
    for (std::size_t i = 0; i < n_spheres; ++i) {
        const double r = uniform_in(rng.next(), 0.2, 0.6);
        const double z = uniform_in(rng.next(), 1.0, p.trunk_height_hi - 1.0);
        double x, y;
        if (!place(r, x, y)) continue;
        scene.primitives.push_back(Sphere{{x, y, z}, r});
    }

    scene.validate();
    return scene;
}

// Round-trips through parse_forest_spec, so a report's scene_id can be fed
// straight back to --scene.
std::string forest_scene_id(const ForestParams& p) {
    return "forest:seed=" + std::to_string(p.seed) + ",extent=" + fmt(p.extent) +
           ",trunks=" + std::to_string(p.n_trunks) +
           ",r_lo=" + fmt(p.trunk_radius_lo) + ",r_hi=" + fmt(p.trunk_radius_hi) +
           ",h_lo=" + fmt(p.trunk_height_lo) + ",h_hi=" + fmt(p.trunk_height_hi) +
           ",clutter=" + fmt(p.clutter_fraction) + ",clear=" + fmt(p.clear_radius) +
           (p.ground ? "" : ",ground=0");
}

ForestParams parse_forest_spec(const std::string& spec) {
    std::string body = spec;
    if (body.rfind("forest", 0) == 0) {
        body = body.size() > 6 && body[6] == ':' ? body.substr(7) : body.substr(6);
    }
    ForestParams p;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t comma = body.find(',', pos);
        const std::string item =
            body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? body.size() : comma + 1;
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw FormatError("forest spec: expected key=value, got \"" + item + "\"");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "seed") p.seed = std::stoull(value);
            else if (key == "extent") p.extent = std::stod(value);
            else if (key == "trunks") p.n_trunks = std::stoull(value);
            else if (key == "r_lo") p.trunk_radius_lo = std::stod(value);
            else if (key == "r_hi") p.trunk_radius_hi = std::stod(value);
            else if (key == "h_lo") p.trunk_height_lo = std::stod(value);
            else if (key == "h_hi") p.trunk_height_hi = std::stod(value);
            else if (key == "clutter") p.clutter_fraction = std::stod(value);
            else if (key == "clear") p.clear_radius = std::stod(value);
            else if (key == "ground") p.ground = std::stoi(value) != 0;
            else throw FormatError("forest spec: unknown key \"" + key + "\"");
        } catch (const std::invalid_argument&) {
            throw FormatError("forest spec: bad value for \"" + key + "\": " + value);
        } catch (const std::out_of_range&) {
            throw FormatError("forest spec: value out of range for \"" + key + "\": " +
                              value);
        }
    }
    return p;
}

} // namespace edfcap

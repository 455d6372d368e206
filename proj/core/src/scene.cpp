#include "edfcap/scene.hpp"

#include <fstream>
#include <sstream>

#include "edfcap/errors.hpp"
#include "json.hpp"

namespace edfcap {

namespace {

bool intersects_bounds(const Primitive& prim, const Box& bounds) {
    if (const auto* s = std::get_if<Sphere>(&prim)) {
        return point_primitive_distance(s->center, Primitive{bounds}) <= s->radius;
    }
    return aabb_overlaps(std::get<Box>(prim), bounds);
}

} // namespace

void Scene::validate() const {
    if (!bounds.min.finite() || !bounds.max.finite() ||
        !(bounds.min.x < bounds.max.x && bounds.min.y < bounds.max.y &&
          bounds.min.z < bounds.max.z)) {
        throw std::invalid_argument("scene bounds must be a nonempty box");
    }
    for (std::size_t i = 0; i < primitives.size(); ++i) {
        edfcap::validate(primitives[i]);
        if (!intersects_bounds(primitives[i], bounds)) {
            throw std::invalid_argument("scene primitive " + std::to_string(i) +
                                        " lies entirely outside the bounds");
        }
    }
}

double analytic_distance(const Scene& scene, const Vec3& p, double empty_distance) {
    double best = empty_distance;
    for (const auto& prim : scene.primitives) {
        best = std::min(best, point_primitive_distance(p, prim));
        if (best == 0.0) break;
    }
    return best;
}

namespace {

using nlohmann::json;

Vec3 vec3_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
        !j[1].is_number() || !j[2].is_number()) {
        throw FormatError(what + " must be an array of 3 numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

} // namespace

Scene scene_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("scene " + origin + ": JSON parse error at byte " +
                          std::to_string(e.byte) + ": " + e.what());
    }
    try {
        Scene scene;
        scene.bounds.min = vec3_from(doc.at("bounds").at("min"), "bounds.min");
        scene.bounds.max = vec3_from(doc.at("bounds").at("max"), "bounds.max");
        for (const auto& p : doc.value("primitives", json::array())) {
            const std::string type = p.at("type").get<std::string>();
            if (type == "sphere") {
                scene.primitives.push_back(Sphere{
                    vec3_from(p.at("center"), "sphere.center"),
                    p.at("radius").get<double>()});
            } else if (type == "box") {
                scene.primitives.push_back(Box{vec3_from(p.at("min"), "box.min"),
                                               vec3_from(p.at("max"), "box.max")});
            } else {
                throw FormatError("unknown primitive type \"" + type + "\"");
            }
        }
        scene.validate();
        return scene;
    } catch (const json::exception& e) {
        throw FormatError("scene " + origin + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError("scene " + origin + ": " + e.what());
    }
}

std::string scene_to_json_text(const Scene& scene) {
    json prims = json::array();
    for (const auto& prim : scene.primitives) {
        if (const auto* s = std::get_if<Sphere>(&prim)) {
            prims.push_back({{"type", "sphere"},
                             {"center", to_json(s->center)},
                             {"radius", s->radius}});
        } else {
            const auto& b = std::get<Box>(prim);
            prims.push_back({{"type", "box"},
                             {"min", to_json(b.min)},
                             {"max", to_json(b.max)}});
        }
    }
    json doc{{"bounds",
              {{"min", to_json(scene.bounds.min)}, {"max", to_json(scene.bounds.max)}}},
             {"primitives", prims}};
    return doc.dump(2) + "\n";
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scene file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return scene_from_json_text(buf.str(), path);
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << scene_to_json_text(scene);
    if (!out.flush()) throw IoError("write failure on " + path);
}

} // namespace edfcap

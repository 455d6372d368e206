#include "edfcap/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edfcap/errors.hpp"
#include "edfcap/rng.hpp"
#include "json.hpp"

namespace edfcap {

void ChainModel::validate() const {
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const auto& j = joints[i];
        const std::string who = "joint " + (j.name.empty() ? std::to_string(i) : j.name);
        if (!j.axis.finite() || std::abs(j.axis.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument(who + ": axis must be a unit vector");
        }
        if (!(j.lo < j.hi)) {
            throw std::invalid_argument(who + ": limits must satisfy lo < hi");
        }
    }
    for (std::size_t i = 0; i < collision_links.size(); ++i) {
        const auto& link = collision_links[i];
        const std::string who =
            "collision link " + (link.name.empty() ? std::to_string(i) : link.name);
        if (link.start_frame >= link.end_frame) {
            throw std::invalid_argument(who + ": frame indices must increase");
        }
        if (link.end_frame > joints.size()) {
            throw std::invalid_argument(who + ": end frame past the last joint");
        }
        if (!(link.radius > 0.0)) {
            throw std::invalid_argument(who + ": radius must be > 0");
        }
        if (link.forced_length && !(*link.forced_length > 0.0)) {
            throw std::invalid_argument(who + ": forced length must be > 0");
        }
        if (link.length_extension_joint && *link.length_extension_joint >= joints.size()) {
            throw std::invalid_argument(who + ": extension joint index out of range");
        }
    }
}

std::vector<RigidTransform> chain_frames(const ChainModel& model, const Configuration& q) {
    if (q.size() != model.joints.size()) {
        throw std::domain_error("configuration has " + std::to_string(q.size()) +
                                " values for " + std::to_string(model.joints.size()) +
                                " joints");
    }
    std::string violations;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto& j = model.joints[i];
        if (q[i] < j.lo || q[i] > j.hi) {
            violations += (violations.empty() ? "" : ", ") +
                          (j.name.empty() ? "joint " + std::to_string(i) : j.name) +
                          "=" + std::to_string(q[i]) + " outside [" +
                          std::to_string(j.lo) + ", " + std::to_string(j.hi) + "]";
        }
    }
    if (!violations.empty()) {
        throw std::domain_error("configuration out of limits: " + violations);
    }

    std::vector<RigidTransform> frames;
    frames.reserve(model.joints.size() + 1);
    frames.push_back(model.base);
    for (std::size_t i = 0; i < model.joints.size(); ++i) {
        const auto& j = model.joints[i];
        const RigidTransform motion =
            j.kind == JointSpec::Kind::Revolute
                ? RigidTransform::from_rotation(Mat3::axis_angle(j.axis, q[i]))
                : RigidTransform::from_translation(j.axis * q[i]);
        frames.push_back(frames.back() * j.origin_offset * motion);
    }
    return frames;
}

std::vector<Capsule> forward(const ChainModel& model, const Configuration& q) {
    const auto frames = chain_frames(model, q);
    std::vector<Capsule> capsules;
    capsules.reserve(model.collision_links.size());
    for (const auto& link : model.collision_links) {
        const Vec3 ps = frames[link.start_frame].translation;
        Vec3 pe = frames[link.end_frame].translation;
        if (link.forced_length) {
            pe = ps + *link.forced_length * (pe - ps).normalized();
        }
        capsules.emplace_back(Segment(ps, pe), link.radius);
    }
    return capsules;
}

Configuration sample_configuration(const ChainModel& model, std::uint64_t seed,
                                   std::uint64_t index) {
    SplitMix64 rng{mix64(seed, index)};
    Configuration q;
    q.reserve(model.joints.size());
    for (const auto& j : model.joints) {
        q.push_back(uniform_in(rng.next(), j.lo, j.hi));
    }
    return q;
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

RigidTransform transform_from(const json& j, const std::string& what) {
    RigidTransform t;
    if (j.contains("translation")) {
        t.translation = vec3_from(j.at("translation"), what + ".translation");
    }
    if (j.contains("rpy")) {
        const Vec3 r = vec3_from(j.at("rpy"), what + ".rpy");
        t.rotation = Mat3::rpy(r.x, r.y, r.z);
    }
    return t;
}

} // namespace

ChainModel chain_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("chain " + origin + ": JSON parse error at byte " +
                          std::to_string(e.byte) + ": " + e.what());
    }
    try {
        ChainModel model;
        model.name = doc.value("name", "");
        if (doc.contains("base")) model.base = transform_from(doc.at("base"), "base");
        for (const auto& j : doc.at("joints")) {
            JointSpec spec;
            spec.name = j.value("name", "");
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "revolute") {
                spec.kind = JointSpec::Kind::Revolute;
            } else if (kind == "prismatic") {
                spec.kind = JointSpec::Kind::Prismatic;
            } else {
                throw FormatError("unknown joint kind \"" + kind + "\"");
            }
            spec.axis = vec3_from(j.at("axis"), "joint axis");
            if (j.contains("origin")) {
                spec.origin_offset = transform_from(j.at("origin"), "joint origin");
            }
            const auto& lim = j.at("limits");
            if (!lim.is_array() || lim.size() != 2) {
                throw FormatError("joint limits must be [lo, hi]");
            }
            spec.lo = lim[0].get<double>();
            spec.hi = lim[1].get<double>();
            model.joints.push_back(std::move(spec));
        }
        for (const auto& c : doc.value("collision_links", json::array())) {
            CollisionLink link;
            link.name = c.value("name", "");
            link.start_frame = c.at("start_frame").get<std::size_t>();
            link.end_frame = c.at("end_frame").get<std::size_t>();
            link.radius = c.at("radius").get<double>();
            if (c.contains("length_extension_joint")) {
                link.length_extension_joint =
                    c.at("length_extension_joint").get<std::size_t>();
            }
            model.collision_links.push_back(std::move(link));
        }
        model.validate();
        return model;
    } catch (const json::exception& e) {
        throw FormatError("chain " + origin + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError("chain " + origin + ": " + e.what());
    }
}

ChainModel load_chain(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open chain file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return chain_from_json_text(buf.str(), path);
}

} // namespace edfcap

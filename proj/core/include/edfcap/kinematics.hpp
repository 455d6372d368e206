#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edfcap/geometry.hpp"
#include "edfcap/transform.hpp"

namespace edfcap {

struct JointSpec {
    enum class Kind : std::uint8_t { Revolute, Prismatic };
    Kind kind = Kind::Revolute;
    Vec3 axis{0, 0, 1};            // unit vector in the joint's own frame
    RigidTransform origin_offset;  // parent frame -> this joint at q = 0
    double lo = 0, hi = 0;         // limits: radians or meters, lo < hi
    std::string name;
};

/// A capsule attached to the chain: endpoints are the origins of two frames.
/// Frame k is the pose after joint k (frame 0 = base), so a prismatic joint
/// between the two frames stretches the link with its q value.
struct CollisionLink {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
    double radius = 0;
    std::optional<std::size_t> length_extension_joint; // 0-based, documents
                                                       // which q adds length
    std::optional<double> forced_length; // sweep override: keep direction,
                                         // re-place the end point
    std::string name;
};

struct ChainModel {
    RigidTransform base;
    std::vector<JointSpec> joints;
    std::vector<CollisionLink> collision_links;
    std::string name;

    void validate() const; // throws std::invalid_argument
};

using Configuration = std::vector<double>;

/// All frame poses for q: result[0] = base, result[k] = pose after joint k.
/// Throws std::domain_error naming every out-of-limit joint.
std::vector<RigidTransform> chain_frames(const ChainModel& model,
                                         const Configuration& q);

/// World-frame capsules for every collision link at configuration q.
std::vector<Capsule> forward(const ChainModel& model, const Configuration& q);

/// Uniform independent draw within every joint's limits. Bit-identical for
/// a given (seed, index) on any platform.
Configuration sample_configuration(const ChainModel& model,
                                   std::uint64_t seed, std::uint64_t index = 0);

ChainModel load_chain(const std::string& path);
ChainModel chain_from_json_text(const std::string& text,
                                const std::string& origin = "<string>");

} // namespace edfcap

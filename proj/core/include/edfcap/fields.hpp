#pragma once

#include "edfcap/grid.hpp"
#include "edfcap/scene.hpp"

namespace edfcap {

/// A queryable lower bound on distance-to-obstacles. Collision checks only
/// ever see this interface, so analytic scenes and voxel grids swap freely.
class DistanceField {
public:
    virtual ~DistanceField() = default;
    virtual double distance(const Vec3& p, LookupMode mode) const = 0;
};

/// Exact distances straight from scene geometry. Values are already true
/// distances, so LookupMode has no effect.
class AnalyticField final : public DistanceField {
public:
    explicit AnalyticField(Scene scene);
    double distance(const Vec3& p, LookupMode) const override;
    const Scene& scene() const { return scene_; }

private:
    Scene scene_;
};

/// Distances read from a precomputed grid.
class GridField final : public DistanceField {
public:
    explicit GridField(DistanceGrid grid, OobPolicy oob = OobPolicy::TreatFree);
    double distance(const Vec3& p, LookupMode mode) const override;
    const DistanceGrid& grid() const { return grid_; }

private:
    DistanceGrid grid_;
    OobPolicy oob_;
};

} // namespace edfcap

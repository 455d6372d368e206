#include "edfcap/fields.hpp"

namespace edfcap {

AnalyticField::AnalyticField(Scene scene) : scene_(std::move(scene)) {
    scene_.validate();
}

double AnalyticField::distance(const Vec3& p, LookupMode) const {
    return analytic_distance(scene_, p);
}

GridField::GridField(DistanceGrid grid, OobPolicy oob)
    : grid_(std::move(grid)), oob_(oob) {
    grid_.shape.validate();
}

double GridField::distance(const Vec3& p, LookupMode mode) const {
    return lookup(grid_, p, mode, oob_);
}

} // namespace edfcap

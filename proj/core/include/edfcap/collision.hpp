#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "edfcap/fields.hpp"
#include "edfcap/geometry.hpp"
#include "edfcap/grid.hpp"

namespace edfcap {

/// How a required extra clearance d_s enters the collision test.
/// Either the measured distance shrinks (d - d_s vs r) or the link radius
/// grows (d vs r + d_s). Both decide the same predicate; step sizes differ.
struct SafetyMode {
    enum class Kind : std::uint8_t { None, SubtractFromDistance, AddToRadius };
    Kind kind = Kind::None;
    double distance = 0; // d_s >= 0, meters

    static constexpr SafetyMode none() { return {Kind::None, 0.0}; }
    static constexpr SafetyMode subtract_from_distance(double ds) {
        return {Kind::SubtractFromDistance, ds};
    }
    static constexpr SafetyMode add_to_radius(double ds) {
        return {Kind::AddToRadius, ds};
    }
    bool operator==(const SafetyMode&) const = default;
};

struct CheckParams {
    LookupMode lookup_mode = LookupMode::Conservative;
    SafetyMode safety = SafetyMode::none();
    double collision_margin = 0;        // treat d_eff <= r_eff + margin as hit
    std::size_t max_queries = 1'000'000;
    bool record_alphas = false;         // fill CheckReport::queried_alphas
    bool dedupe_end_query = false;      // skip the final d(l) if just queried
};

enum class Verdict : std::uint8_t { Free, Collision };

struct CheckReport {
    Verdict verdict = Verdict::Free;
    std::size_t queries = 0;
    double effective_radius = 0;
    std::vector<double> queried_alphas; // empty unless params.record_alphas

    bool collision() const { return verdict == Verdict::Collision; }
};

/// (d_eff, r_eff) after applying the safety mode to a raw lookup d and
/// link radius r. The collision test is d_eff <= r_eff + margin everywhere.
struct EffectivePair {
    double distance;
    double radius;
};
EffectivePair effective_pair(double d, double r, const SafetyMode& safety);

/// Length of the axis interval certified free by one query: sqrt(d^2 - r^2).
/// Requires d > r_eff; callers branch to collision first.
double step_length(double d, double r_eff);

/// Adaptive sweep from alpha = 0: query, hit-test, hop by step_length.
/// The end point d(l) is always queried after the loop (see dedupe_end_query).
/// Throws QueryBudgetError past params.max_queries.
CheckReport check_uni(const Capsule& capsule, const DistanceField& field,
                      const CheckParams& params = {});

/// Adaptive search from both ends of each pending interval plus a midpoint
/// probe; uncovered gaps go back on a FIFO queue until none remain.
CheckReport check_bi(const Capsule& capsule, const DistanceField& field,
                     const CheckParams& params = {});

/// Capsule covered by n+1 spheres, n = ceil(l/s): centers k * (l/n) along
/// the axis, radius sqrt(r^2 + (l/n / 2)^2) so adjacent spheres meet in a
/// circle of radius exactly r.
struct SphereDecomposition {
    std::vector<double> centers; // alphas, meters
    double sphere_radius = 0;    // r'
    double separation = 0;       // s' = l/n
};
SphereDecomposition decompose(const Capsule& capsule, double separation);

/// Baseline: one query per decomposition sphere, early exit on hit.
CheckReport check_fixed(const Capsule& capsule, const DistanceField& field,
                        double separation, const CheckParams& params = {});

/// Dense verification: sample alpha = 0, eps, 2*eps, ..., l (l always
/// included). Exact up to the field's 1-Lipschitz bound on missed minima.
struct OracleReport {
    Verdict verdict = Verdict::Free;
    double min_clearance = 0; // min over samples of d_eff - r_eff
    std::size_t samples = 0;
};
OracleReport oracle_check(const Capsule& capsule, const DistanceField& field,
                          double eps, const CheckParams& params = {});

} // namespace edfcap

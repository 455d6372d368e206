#include "edfcap/collision.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

#include "edfcap/errors.hpp"

namespace edfcap {

EffectivePair effective_pair(double d, double r, const SafetyMode& safety) {
    switch (safety.kind) {
        case SafetyMode::Kind::SubtractFromDistance:
            return {d - safety.distance, r};
        case SafetyMode::Kind::AddToRadius:
            return {d, r + safety.distance};
        case SafetyMode::Kind::None:
        default:
            return {d, r};
    }
}

double step_length(double d, double r_eff) {
    if (!(d > r_eff)) {
        throw std::domain_error("step_length requires d > r_eff (d=" +
                                std::to_string(d) + ", r_eff=" + std::to_string(r_eff) +
                                "); callers must branch to collision first");
    }
    // (d-r)(d+r) avoids cancellation when d is barely above r_eff.
    return std::sqrt((d - r_eff) * (d + r_eff));
}

namespace {

// Per-check query bookkeeping: counts lookups, records alphas on request,
// enforces the budget, flips the verdict on a hit.
struct Prober {
    const Capsule& capsule;
    const DistanceField& field;
    const CheckParams& params;
    CheckReport report;

    Prober(const Capsule& c, const DistanceField& f, const CheckParams& p, double radius)
        : capsule(c), field(f), params(p) {
        if (params.collision_margin < 0) {
            throw std::invalid_argument("collision_margin must be >= 0");
        }
        if (params.safety.distance < 0) {
            throw std::invalid_argument("safety distance must be >= 0");
        }
        report.effective_radius = effective_pair(0.0, radius, params.safety).radius;
    }

    // Effective distance at axis parameter alpha.
    double query(double alpha) {
        if (report.queries >= params.max_queries) {
            throw QueryBudgetError(
                "collision check exceeded " + std::to_string(params.max_queries) +
                " queries at alpha=" + std::to_string(alpha) +
                " (near-tangent clearance; raise max_queries or collision_margin)");
        }
        const double d =
            field.distance(capsule.axis.point_at(alpha), params.lookup_mode);
        ++report.queries;
        if (params.record_alphas) report.queried_alphas.push_back(alpha);
        double d_eff = d;
        if (params.safety.kind == SafetyMode::Kind::SubtractFromDistance) {
            d_eff = d - params.safety.distance;
        }
        if (d_eff <= report.effective_radius + params.collision_margin) {
            report.verdict = Verdict::Collision;
        }
        return d_eff;
    }

    bool hit() const { return report.verdict == Verdict::Collision; }
    double step(double d_eff) const { return step_length(d_eff, report.effective_radius); }
};

} // namespace

CheckReport check_uni(const Capsule& capsule, const DistanceField& field,
                      const CheckParams& params) {
    Prober pr(capsule, field, params, capsule.radius);
    const double l = capsule.axis.length();
    double alpha = 0.0;
    double last_alpha = -1.0;
    while (alpha <= l) {
        const double d_eff = pr.query(alpha);
        if (pr.hit()) return std::move(pr.report);
        last_alpha = alpha;
        alpha += pr.step(d_eff);
    }
    // The end point is always verified; a loop iteration that landed exactly
    // on l is re-queried (and re-counted) unless deduplication is opted in.
    if (!(params.dedupe_end_query && last_alpha == l)) {
        pr.query(l);
    }
    return std::move(pr.report);
}

CheckReport check_bi(const Capsule& capsule, const DistanceField& field,
                     const CheckParams& params) {
    Prober pr(capsule, field, params, capsule.radius);
    std::deque<std::pair<double, double>> pending{{0.0, capsule.axis.length()}};
    while (!pending.empty()) {
        const auto [al, ar] = pending.front();
        pending.pop_front();
        const double dl = pr.query(al);
        if (pr.hit()) return std::move(pr.report);
        const double dr = pr.query(ar);
        if (pr.hit()) return std::move(pr.report);
        const double bl = al + pr.step(dl); // covered from the left
        const double br = ar - pr.step(dr); // covered from the right
        if (bl < br) {
            const double am = 0.5 * (bl + br);
            const double dm = pr.query(am);
            if (pr.hit()) return std::move(pr.report);
            const double sm = pr.step(dm);
            // Gaps on either side of the midpoint's covered span re-enter
            // the FIFO queue.
            if (bl < am - sm) pending.emplace_back(bl, am - sm);
            if (am + sm < br) pending.emplace_back(am + sm, br);
        }
    }
    return std::move(pr.report);
}

SphereDecomposition decompose(const Capsule& capsule, double separation) {
    if (!(separation > 0.0)) throw std::invalid_argument("separation must be > 0");
    const double l = capsule.axis.length();
    const double ratio = std::ceil(l / separation - 1e-12);
    const std::size_t n = ratio < 1.0 ? 1 : static_cast<std::size_t>(ratio);
    const double spacing = l / static_cast<double>(n);
    SphereDecomposition dec;
    dec.separation = spacing;
    // Adjacent spheres of radius r' spaced s' apart intersect in a circle of
    // radius exactly r, so their union covers the whole capsule.
    dec.sphere_radius =
        std::sqrt(capsule.radius * capsule.radius + 0.25 * spacing * spacing);
    dec.centers.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        dec.centers.push_back(static_cast<double>(k) * spacing);
    }
    dec.centers.push_back(l); // exact, never n*spacing rounded past l
    return dec;
}

CheckReport check_fixed(const Capsule& capsule, const DistanceField& field,
                        double separation, const CheckParams& params) {
    const SphereDecomposition dec = decompose(capsule, separation);
    Prober pr(capsule, field, params, dec.sphere_radius);
    for (const double alpha : dec.centers) {
        pr.query(alpha);
        if (pr.hit()) break;
    }
    return std::move(pr.report);
}

OracleReport oracle_check(const Capsule& capsule, const DistanceField& field,
                          double eps, const CheckParams& params) {
    if (!(eps > 0.0)) throw std::invalid_argument("oracle step must be > 0");
    const double l = capsule.axis.length();
    OracleReport rep;
    rep.min_clearance = std::numeric_limits<double>::infinity();
    auto sample = [&](double alpha) {
        const double d =
            field.distance(capsule.axis.point_at(alpha), params.lookup_mode);
        const auto [d_eff, r_eff] = effective_pair(d, capsule.radius, params.safety);
        rep.min_clearance = std::min(rep.min_clearance, d_eff - r_eff);
        ++rep.samples;
    };
    for (std::size_t k = 0;; ++k) {
        const double alpha = static_cast<double>(k) * eps;
        if (alpha >= l) break;
        sample(alpha);
    }
    sample(l);
    if (rep.min_clearance <= 0.0) rep.verdict = Verdict::Collision;
    return rep;
}

} // namespace edfcap

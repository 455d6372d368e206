#include <cmath>
#include <vector>

#include "doctest.h"
#include "edfcap/collision.hpp"
#include "edfcap/edt.hpp"
#include "edfcap/errors.hpp"
#include "edfcap/fields.hpp"
#include "edfcap/forest.hpp"
#include "edfcap/rng.hpp"
#include "edfcap/scene.hpp"
#include "edfcap/voxelize.hpp"

using namespace edfcap;

namespace {

// Test double violating the 1-Lipschitz contract on purpose: step sizes and
// traces become exactly predictable.
struct ConstantField final : DistanceField {
    double value;
    explicit ConstantField(double v) : value(v) {}
    double distance(const Vec3&, LookupMode) const override { return value; }
};

Scene one_sphere(const Vec3& center, double radius) {
    Scene scene;
    scene.bounds = {{-20, -20, -20}, {20, 20, 20}};
    scene.primitives.push_back(Sphere{center, radius});
    scene.validate();
    return scene;
}

Scene empty_scene() {
    Scene scene;
    scene.bounds = {{-20, -20, -20}, {20, 20, 20}};
    return scene;
}

Scene random_scene(SplitMix64& rng) {
    Scene scene;
    scene.bounds = {{-6, -6, -6}, {6, 6, 6}};
    const std::size_t n = 3 + rng.next() % 6;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 c{uniform_in(rng.next(), -5, 5), uniform_in(rng.next(), -5, 5),
                     uniform_in(rng.next(), -5, 5)};
        if (rng.next() & 1) {
            scene.primitives.push_back(Sphere{c, uniform_in(rng.next(), 0.2, 1.5)});
        } else {
            const Vec3 e{uniform_in(rng.next(), 0.2, 2.0), uniform_in(rng.next(), 0.2, 2.0),
                         uniform_in(rng.next(), 0.2, 2.0)};
            scene.primitives.push_back(Box{c - e, c + e});
        }
    }
    scene.validate();
    return scene;
}

Capsule random_capsule(SplitMix64& rng) {
    const Vec3 a{uniform_in(rng.next(), -5, 5), uniform_in(rng.next(), -5, 5),
                 uniform_in(rng.next(), -5, 5)};
    Vec3 b{uniform_in(rng.next(), -5, 5), uniform_in(rng.next(), -5, 5),
           uniform_in(rng.next(), -5, 5)};
    if ((b - a).norm() < 0.2) b.x += 1.0;
    return Capsule(Segment(a, b), uniform_in(rng.next(), 0.05, 0.5));
}

void check_alphas(const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i] - want[i]) <= 1e-9);
    }
}

} // namespace

TEST_CASE("step length closed forms") {
    CHECK(step_length(5.0, 3.0) == doctest::Approx(4.0));
    CHECK(step_length(2.0, 1.0) == doctest::Approx(std::sqrt(3.0)));
    CHECK(step_length(1.0 + 1e-12, 1.0) > 0.0);
    CHECK_THROWS_AS(step_length(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(step_length(0.5, 1.0), std::domain_error);
}

TEST_CASE("effective pair per safety mode") {
    const auto none = effective_pair(2.0, 0.3, SafetyMode::none());
    CHECK(none.distance == 2.0);
    CHECK(none.radius == 0.3);
    const auto sub = effective_pair(2.0, 0.3, SafetyMode::subtract_from_distance(0.5));
    CHECK(sub.distance == 1.5);
    CHECK(sub.radius == 0.3);
    const auto add = effective_pair(2.0, 0.3, SafetyMode::add_to_radius(0.5));
    CHECK(add.distance == 2.0);
    CHECK(add.radius == 0.8);
}

TEST_CASE("radius-side safety always steps farther when it may") {
    SplitMix64 rng{2024};
    std::size_t checked = 0;
    while (checked < 10'000) {
        const double d = uniform_in(rng.next(), 0.01, 10.0);
        const double r = uniform_in(rng.next(), 0.001, 1.0);
        const double ds = uniform_in(rng.next(), 1e-4, 0.5);
        if (!(d - ds > r)) continue;
        const auto sub = effective_pair(d, r, SafetyMode::subtract_from_distance(ds));
        const auto add = effective_pair(d, r, SafetyMode::add_to_radius(ds));
        const double step_sub = step_length(sub.distance, sub.radius);
        const double step_add = step_length(add.distance, add.radius);
        REQUIRE(step_add > step_sub);
        ++checked;
    }
}

TEST_CASE("uniform sweep trace on a constant field") {
    // d = 0.5, r = 0.3 gives steps of 0.4; the final end-point query repeats
    // alpha = l because the loop's last landing is just short of it.
    const ConstantField field(0.5);
    const Capsule capsule(Segment({0, 0, 0}, {2, 0, 0}), 0.3);
    CheckParams params;
    params.record_alphas = true;
    const CheckReport rep = check_uni(capsule, field, params);
    CHECK_FALSE(rep.collision());
    CHECK(rep.queries == 7);
    check_alphas(rep.queried_alphas, {0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.0});
    CHECK(rep.effective_radius == 0.3);

    // Replay the recurrence with the library's own step function.
    std::vector<double> expect;
    double alpha = 0.0;
    while (alpha <= 2.0) {
        expect.push_back(alpha);
        alpha += step_length(0.5, 0.3);
    }
    expect.push_back(2.0);
    REQUIRE(rep.queried_alphas.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(rep.queried_alphas[i] == expect[i]); // bit-exact replay
    }
}

TEST_CASE("end query deduplication") {
    // d = 5, r = 3 steps exactly 4, so alpha lands exactly on l = 8.
    const ConstantField field(5.0);
    const Capsule capsule(Segment({0, 0, 0}, {8, 0, 0}), 3.0);
    CheckParams params;
    params.record_alphas = true;
    const CheckReport plain = check_uni(capsule, field, params);
    CHECK(plain.queries == 4);
    check_alphas(plain.queried_alphas, {0, 4, 8, 8});

    params.dedupe_end_query = true;
    const CheckReport deduped = check_uni(capsule, field, params);
    CHECK(deduped.queries == 3);
    check_alphas(deduped.queried_alphas, {0, 4, 8});
}

TEST_CASE("bidirectional trace on a constant field") {
    const ConstantField field(0.5);
    const Capsule capsule(Segment({0, 0, 0}, {2, 0, 0}), 0.3);
    CheckParams params;
    params.record_alphas = true;
    const CheckReport rep = check_bi(capsule, field, params);
    CHECK_FALSE(rep.collision());
    CHECK(rep.queries == 7);
    // Ends first, then the midpoint, then one two-ended pass per gap.
    check_alphas(rep.queried_alphas, {0, 2, 1, 0.4, 0.6, 1.4, 1.6});
}

TEST_CASE("bidirectional needs no midpoint when end spans meet") {
    const ConstantField field(5.0);
    const Capsule capsule(Segment({0, 0, 0}, {8, 0, 0}), 3.0);
    const CheckReport rep = check_bi(capsule, field);
    CHECK(rep.queries == 2);
    CHECK_FALSE(rep.collision());
}

TEST_CASE("near-tangent clearance exhausts the query budget") {
    const ConstantField field(0.3 + 1e-9);
    const Capsule capsule(Segment({0, 0, 0}, {1, 0, 0}), 0.3);
    CheckParams params;
    params.max_queries = 1000;
    CHECK_THROWS_AS(check_uni(capsule, field, params), QueryBudgetError);
    CHECK_THROWS_AS(check_bi(capsule, field, params), QueryBudgetError);
}

TEST_CASE("collision margin turns the tangent case into a hit") {
    const ConstantField field(0.3 + 1e-9);
    const Capsule capsule(Segment({0, 0, 0}, {1, 0, 0}), 0.3);
    CheckParams params;
    params.collision_margin = 1e-6;
    const CheckReport rep = check_uni(capsule, field, params);
    CHECK(rep.collision());
    CHECK(rep.queries == 1);
}

TEST_CASE("sphere decomposition counts and geometry") {
    const Capsule c35(Segment({0, 0, 0}, {3.5, 0, 0}), 0.3);
    const SphereDecomposition d = decompose(c35, 0.1);
    CHECK(d.centers.size() == 36);
    CHECK(d.separation == doctest::Approx(0.1));
    CHECK(d.centers.front() == 0.0);
    CHECK(d.centers.back() == 3.5);
    CHECK(d.sphere_radius == doctest::Approx(std::sqrt(0.09 + 0.0025)));

    // Separation longer than the axis collapses to the two end spheres.
    const Capsule c2(Segment({0, 0, 0}, {2, 0, 0}), 0.3);
    const SphereDecomposition ends = decompose(c2, 5.0);
    CHECK(ends.centers == std::vector<double>{0.0, 2.0});
    CHECK(ends.sphere_radius == doctest::Approx(std::sqrt(0.09 + 1.0)));

    const Capsule c315(Segment({0, 0, 0}, {3.15, 0, 0}), 0.3);
    CHECK(decompose(c315, 0.5).centers.size() == 8);

    CHECK_THROWS_AS(decompose(c2, 0.0), std::invalid_argument);
}

TEST_CASE("decomposition spheres cover the capsule") {
    // Any point within r of the axis must be inside some sphere.
    SplitMix64 rng{31};
    const Capsule capsule(Segment({0, 0, 0}, {2.7, 0, 0}), 0.25);
    const SphereDecomposition dec = decompose(capsule, 0.4);
    for (int i = 0; i < 2000; ++i) {
        const double alpha = uniform_in(rng.next(), 0, capsule.axis.length());
        const Vec3 offset{0, uniform_in(rng.next(), -0.25, 0.25),
                          uniform_in(rng.next(), -0.25, 0.25)};
        if (offset.norm() > 0.25) continue;
        const Vec3 p = capsule.axis.point_at(alpha) + offset;
        bool covered = false;
        for (const double c : dec.centers) {
            if ((p - capsule.axis.point_at(c)).norm() <= dec.sphere_radius + 1e-12) {
                covered = true;
                break;
            }
        }
        CHECK(covered);
    }
}

TEST_CASE("verdicts against a single sphere") {
    const AnalyticField field(one_sphere({1.0, 0.0, 0.0}, 0.4));
    const Capsule through(Segment({-1, 0, 0}, {3, 0, 0}), 0.2);
    CHECK(check_uni(through, field).collision());
    CHECK(check_bi(through, field).collision());
    CHECK(check_fixed(through, field, 0.3).collision());
    CHECK(oracle_check(through, field, 1e-3).verdict == Verdict::Collision);

    const Capsule above(Segment({-1, 0, 2}, {3, 0, 2}), 0.2);
    CHECK_FALSE(check_uni(above, field).collision());
    CHECK_FALSE(check_bi(above, field).collision());
    CHECK_FALSE(check_fixed(above, field, 0.3).collision());
    CHECK(oracle_check(above, field, 1e-3).verdict == Verdict::Free);
    // Clearance to the axis is sqrt(0)+2 - 0.4 (sphere) - 0.2 (capsule).
    CHECK(oracle_check(above, field, 1e-3).min_clearance == doctest::Approx(1.4));
}

TEST_CASE("adaptive verdicts match the dense oracle away from tangency") {
    SplitMix64 rng{99};
    int counted = 0;
    while (counted < 300) {
        const Scene scene = random_scene(rng);
        const Capsule capsule = random_capsule(rng);
        const AnalyticField field(scene);
        const OracleReport oracle = oracle_check(capsule, field, 1e-3);
        if (std::abs(oracle.min_clearance) <= 1e-2) continue; // marginal, skip
        const bool expect = oracle.verdict == Verdict::Collision;
        CHECK(check_uni(capsule, field).collision() == expect);
        CHECK(check_bi(capsule, field).collision() == expect);
        ++counted;
    }
}

TEST_CASE("fixed decomposition is conservative") {
    // A Free answer from the inflated spheres implies the capsule is free.
    SplitMix64 rng{123};
    for (int i = 0; i < 150; ++i) {
        const Scene scene = random_scene(rng);
        const Capsule capsule = random_capsule(rng);
        const AnalyticField field(scene);
        if (!check_fixed(capsule, field, 0.35).collision()) {
            CHECK(oracle_check(capsule, field, 1e-3).min_clearance > -1e-9);
        }
    }
}

TEST_CASE("skipped intervals are truly clear") {
    SplitMix64 rng{456};
    CheckParams params;
    params.record_alphas = true;
    int free_runs = 0;
    while (free_runs < 20) {
        const Scene scene = random_scene(rng);
        const Capsule capsule = random_capsule(rng);
        const AnalyticField field(scene);
        const CheckReport rep = check_uni(capsule, field, params);
        if (rep.collision()) continue;
        ++free_runs;
        const double l = capsule.axis.length();
        for (const double alpha : rep.queried_alphas) {
            const double d = field.distance(capsule.axis.point_at(alpha),
                                            LookupMode::Raw);
            const double span = step_length(d, capsule.radius);
            const double lo = std::max(0.0, alpha - span);
            const double hi = std::min(l, alpha + span);
            for (int k = 0; k <= 100; ++k) {
                const double a = lo + (hi - lo) * k / 100;
                const double clearance =
                    field.distance(capsule.axis.point_at(a), LookupMode::Raw) -
                    capsule.radius;
                CHECK(clearance >= -1e-9);
            }
        }
    }
}

TEST_CASE("safety modes agree on the verdict") {
    SplitMix64 rng{789};
    int counted = 0;
    while (counted < 200) {
        const Scene scene = random_scene(rng);
        const Capsule capsule = random_capsule(rng);
        const AnalyticField field(scene);
        const double ds = uniform_in(rng.next(), 0.02, 0.3);

        CheckParams grown;
        grown.safety = SafetyMode::add_to_radius(ds);
        const OracleReport oracle = oracle_check(capsule, field, 1e-3, grown);
        if (std::abs(oracle.min_clearance) <= 1e-2) continue;

        CheckParams shrunk;
        shrunk.safety = SafetyMode::subtract_from_distance(ds);
        const bool expect = oracle.verdict == Verdict::Collision;
        CHECK(check_uni(capsule, field, grown).collision() == expect);
        CHECK(check_uni(capsule, field, shrunk).collision() == expect);
        CHECK(check_bi(capsule, field, grown).collision() == expect);
        CHECK(check_bi(capsule, field, shrunk).collision() == expect);
        ++counted;
    }
}

TEST_CASE("empty field query counts") {
    const AnalyticField field(empty_scene());
    for (const double l : {1.0, 3.5, 5.65}) {
        const Capsule capsule(Segment({0, 0, 0}, {l, 0, 0}), 0.3);
        CHECK(check_uni(capsule, field).queries == 2);
        CHECK(check_bi(capsule, field).queries == 2);
        for (const double s : {0.1, 0.3, 0.5}) {
            const std::size_t expect =
                static_cast<std::size_t>(std::ceil(l / s - 1e-9)) + 1;
            CHECK(check_fixed(capsule, field, s).queries == expect);
        }
    }
}

TEST_CASE("free verdicts on a conservative grid respect voxel centers") {
    const Scene scene =
        gen_forest_scene(parse_forest_spec("forest:seed=5,extent=10,trunks=15"));
    const OccupancyGrid occ = voxelize(scene, 0.25);
    const DistanceGrid dist = edt(occ, 100.0);
    const GridField field(dist);

    std::vector<Vec3> occupied;
    for (std::size_t z = 0; z < occ.shape.nz; ++z)
        for (std::size_t y = 0; y < occ.shape.ny; ++y)
            for (std::size_t x = 0; x < occ.shape.nx; ++x)
                if (occ.occupied(x, y, z)) occupied.push_back(occ.shape.center(x, y, z));
    REQUIRE(!occupied.empty());

    SplitMix64 rng{246};
    int free_runs = 0;
    for (int trial = 0; trial < 400 && free_runs < 30; ++trial) {
        const Vec3 a{uniform_in(rng.next(), -4, 4), uniform_in(rng.next(), -4, 4),
                     uniform_in(rng.next(), 0.5, 8)};
        Vec3 b{uniform_in(rng.next(), -4, 4), uniform_in(rng.next(), -4, 4),
               uniform_in(rng.next(), 0.5, 8)};
        if ((b - a).norm() < 0.2) b.z += 0.5;
        const Capsule capsule(Segment(a, b), uniform_in(rng.next(), 0.05, 0.3));
        const CheckReport rep = check_bi(capsule, field);
        if (rep.collision()) continue;
        ++free_runs;
        const double l = capsule.axis.length();
        for (double alpha = 0.0;; alpha += 0.05) {
            const bool last = alpha >= l;
            const Vec3 p = capsule.axis.point_at(last ? l : alpha);
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec3& c : occupied) nearest = std::min(nearest, (p - c).norm());
            CHECK(nearest > capsule.radius);
            if (last) break;
        }
    }
    CHECK(free_runs == 30);
}

TEST_CASE("oracle sample count and report fields") {
    const AnalyticField field(empty_scene());
    const Capsule capsule(Segment({0, 0, 0}, {1, 0, 0}), 0.3);
    const OracleReport rep = oracle_check(capsule, field, 0.3);
    CHECK(rep.samples == 5); // 0, 0.3, 0.6, 0.9 and the end point
    CHECK(rep.verdict == Verdict::Free);

    CHECK_THROWS_AS(oracle_check(capsule, field, 0.0), std::invalid_argument);
}

TEST_CASE("reports omit alphas unless asked") {
    const ConstantField field(0.5);
    const Capsule capsule(Segment({0, 0, 0}, {2, 0, 0}), 0.3);
    CHECK(check_uni(capsule, field).queried_alphas.empty());
    CHECK(check_bi(capsule, field).queried_alphas.empty());
}

TEST_CASE("fixed reports the inflated radius") {
    const ConstantField field(5.0);
    const Capsule capsule(Segment({0, 0, 0}, {2, 0, 0}), 0.3);
    const CheckReport rep = check_fixed(capsule, field, 1.0);
    CHECK(rep.effective_radius == doctest::Approx(std::sqrt(0.09 + 0.25)));
}

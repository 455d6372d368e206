// Microbenchmarks for the hot paths: single-capsule checks against both
// field backends, the distance transform, and raw lookups. The capsule set
// is a fixed sample of crane poses so every method sees identical work.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "edfcap/collision.hpp"
#include "edfcap/edt.hpp"
#include "edfcap/fields.hpp"
#include "edfcap/forest.hpp"
#include "edfcap/kinematics.hpp"
#include "edfcap/rng.hpp"
#include "edfcap/voxelize.hpp"

namespace {

using namespace edfcap;

const Scene& forest() {
    static const Scene scene = gen_forest_scene(ForestParams{});
    return scene;
}

const AnalyticField& analytic_field() {
    static const AnalyticField field(forest());
    return field;
}

const GridField& grid_field() {
    static const GridField field(edt(voxelize(forest(), 0.2), 100.0),
                                 OobPolicy::TreatFree);
    return field;
}

const std::vector<Capsule>& crane_capsules() {
    static const std::vector<Capsule> caps = [] {
        const ChainModel model = load_chain(EDFCAP_FIXTURE_DIR "/crane7.json");
        std::vector<Capsule> out;
        for (std::uint64_t i = 0; i < 256; ++i) {
            for (const Capsule& c : forward(model, sample_configuration(model, 7, i))) {
                out.push_back(c);
            }
        }
        return out;
    }();
    return caps;
}

template <typename CheckFn>
void run_checks(benchmark::State& state, const DistanceField& field, CheckFn&& check) {
    const std::vector<Capsule>& caps = crane_capsules();
    std::size_t i = 0;
    std::size_t queries = 0;
    for (auto _ : state) {
        const CheckReport rep = check(caps[i++ % caps.size()], field);
        queries += rep.queries;
        benchmark::DoNotOptimize(rep.verdict);
    }
    state.counters["queries"] = benchmark::Counter(
        static_cast<double>(queries), benchmark::Counter::kAvgIterations);
}

CheckReport uni(const Capsule& c, const DistanceField& f) { return check_uni(c, f); }
CheckReport bi(const Capsule& c, const DistanceField& f) { return check_bi(c, f); }
CheckReport fixed01(const Capsule& c, const DistanceField& f) {
    return check_fixed(c, f, 0.1);
}
CheckReport fixed03(const Capsule& c, const DistanceField& f) {
    return check_fixed(c, f, 0.3);
}

void BM_CheckUniAnalytic(benchmark::State& s) { run_checks(s, analytic_field(), uni); }
void BM_CheckBiAnalytic(benchmark::State& s) { run_checks(s, analytic_field(), bi); }
void BM_CheckFixed01Analytic(benchmark::State& s) {
    run_checks(s, analytic_field(), fixed01);
}
void BM_CheckFixed03Analytic(benchmark::State& s) {
    run_checks(s, analytic_field(), fixed03);
}
void BM_CheckUniGrid(benchmark::State& s) { run_checks(s, grid_field(), uni); }
void BM_CheckBiGrid(benchmark::State& s) { run_checks(s, grid_field(), bi); }
void BM_CheckFixed01Grid(benchmark::State& s) { run_checks(s, grid_field(), fixed01); }
void BM_CheckFixed03Grid(benchmark::State& s) { run_checks(s, grid_field(), fixed03); }

BENCHMARK(BM_CheckUniAnalytic);
BENCHMARK(BM_CheckBiAnalytic);
BENCHMARK(BM_CheckFixed01Analytic);
BENCHMARK(BM_CheckFixed03Analytic);
BENCHMARK(BM_CheckUniGrid);
BENCHMARK(BM_CheckBiGrid);
BENCHMARK(BM_CheckFixed01Grid);
BENCHMARK(BM_CheckFixed03Grid);

void BM_DistanceTransform(benchmark::State& state) {
    const double res = 0.1 * static_cast<double>(state.range(0));
    const OccupancyGrid occ = voxelize(forest(), res);
    for (auto _ : state) {
        DistanceGrid dist = edt(occ, 100.0);
        benchmark::DoNotOptimize(dist.values.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(occ.shape.cell_count()));
}
BENCHMARK(BM_DistanceTransform)->Arg(4)->Arg(2)->Unit(benchmark::kMillisecond);

std::vector<Vec3> probe_points() {
    std::vector<Vec3> pts;
    SplitMix64 rng{99};
    const Box& b = forest().bounds;
    for (int i = 0; i < 4096; ++i) {
        pts.push_back({uniform_in(rng.next(), b.min.x, b.max.x),
                       uniform_in(rng.next(), b.min.y, b.max.y),
                       uniform_in(rng.next(), b.min.z, b.max.z)});
    }
    return pts;
}

void BM_GridLookup(benchmark::State& state) {
    const GridField& field = grid_field();
    const std::vector<Vec3> pts = probe_points();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            field.distance(pts[i++ % pts.size()], LookupMode::Conservative));
    }
}
BENCHMARK(BM_GridLookup);

void BM_AnalyticLookup(benchmark::State& state) {
    const AnalyticField& field = analytic_field();
    const std::vector<Vec3> pts = probe_points();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            field.distance(pts[i++ % pts.size()], LookupMode::Raw));
    }
}
BENCHMARK(BM_AnalyticLookup);

} // namespace

BENCHMARK_MAIN();

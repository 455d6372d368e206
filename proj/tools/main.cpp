#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edfcap/bench.hpp"
#include "edfcap/collision.hpp"
#include "edfcap/edt.hpp"
#include "edfcap/errors.hpp"
#include "edfcap/fields.hpp"
#include "edfcap/forest.hpp"
#include "edfcap/grid_io.hpp"
#include "edfcap/kinematics.hpp"
#include "edfcap/scene.hpp"
#include "edfcap/voxelize.hpp"
#include "edfcap/xyz_io.hpp"

using namespace edfcap;

namespace {

// Exit codes: 0 ok (check: free), 10 check found a collision, 1 usage,
// 2 I/O, 3 file format, 4 numeric/budget errors.
constexpr int kExitCollision = 10;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

std::vector<double> parse_numbers(const std::string& text, std::size_t count,
                                  const std::string& what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": bad number \"" + item + "\"");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.size() != count) {
        throw std::invalid_argument(what + ": expected " + std::to_string(count) +
                                    " comma-separated numbers, got " +
                                    std::to_string(out.size()));
    }
    return out;
}

Capsule parse_capsule(const std::string& text) {
    const auto v = parse_numbers(text, 7, "--capsule");
    return Capsule(Segment({v[0], v[1], v[2]}, {v[3], v[4], v[5]}), v[6]);
}

Box parse_bounds(const std::string& text) {
    const auto v = parse_numbers(text, 6, "--bounds");
    return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

bool is_forest_spec(const std::string& s) { return s.rfind("forest", 0) == 0; }

Scene load_scene_arg(const std::string& arg) {
    return is_forest_spec(arg) ? gen_forest_scene(parse_forest_spec(arg))
                               : load_scene(arg);
}

std::string scene_id_of(const std::string& arg) {
    return is_forest_spec(arg) ? forest_scene_id(parse_forest_spec(arg)) : arg;
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("EDFCAP_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0; // run_monte_carlo falls back to hardware concurrency
}

struct FieldArgs {
    std::string field_path;
    std::string scene_arg;
    double res = 0;
    bool analytic = false;
    double max_distance = 100.0;
    std::string oob = "free";

    void attach(CLI::App* cmd, bool with_analytic) {
        cmd->add_option("--field", field_path, "distance grid file (.vgd)");
        cmd->add_option("--scene", scene_arg,
                        "scene JSON file or forest:<key=value,...> generator spec");
        cmd->add_option("--res", res, "voxel resolution for on-the-fly grids [m]");
        if (with_analytic) {
            cmd->add_flag("--analytic", analytic,
                          "query the exact scene geometry instead of a grid");
        }
        cmd->add_option("--max-distance", max_distance,
                        "distance-field saturation value [m]")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--oob", oob, "out-of-bounds policy: free|occupied")
            ->check(CLI::IsMember({"free", "occupied"}));
    }

    OobPolicy oob_policy() const {
        return oob == "occupied" ? OobPolicy::TreatOccupied : OobPolicy::TreatFree;
    }

    // Builds the queryable field; fills the id and config echo lines.
    std::unique_ptr<DistanceField> make(std::string& id,
                                        std::vector<std::string>& config) const {
        if (!field_path.empty()) {
            if (!scene_arg.empty() || analytic) {
                throw std::invalid_argument("--field excludes --scene/--analytic");
            }
            id = field_path;
            config.push_back("field=" + field_path);
            config.push_back("oob=" + oob);
            return std::make_unique<GridField>(load_distance_grid(field_path),
                                               oob_policy());
        }
        if (scene_arg.empty()) {
            throw std::invalid_argument("need --field or --scene");
        }
        id = scene_id_of(scene_arg);
        const Scene scene = load_scene_arg(scene_arg);
        config.push_back("scene=" + id);
        if (analytic) {
            config.push_back("field=analytic");
            return std::make_unique<AnalyticField>(scene);
        }
        if (!(res > 0)) {
            throw std::invalid_argument("--scene needs --res (or --analytic)");
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "res=%g max_distance=%g", res, max_distance);
        config.push_back(std::string("field=grid ") + buf);
        config.push_back("oob=" + oob);
        return std::make_unique<GridField>(edt(voxelize(scene, res), max_distance),
                                           oob_policy());
    }
};

struct CheckArgs {
    double safety = 0;
    std::string safety_mode = "radius";
    std::string lookup = "conservative";
    double margin = 0;
    std::size_t max_queries = 1'000'000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--safety", safety, "extra clearance d_s [m]")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--safety-mode", safety_mode,
                        "where d_s enters: radius (grows r) | distance (shrinks d)")
            ->check(CLI::IsMember({"radius", "distance"}));
        cmd->add_option("--lookup", lookup, "grid lookup mode: conservative|raw")
            ->check(CLI::IsMember({"conservative", "raw"}));
        cmd->add_option("--margin", margin, "collision margin added to the hit test")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--max-queries", max_queries, "per-link query budget");
    }

    CheckParams params() const {
        CheckParams p;
        p.lookup_mode = lookup == "raw" ? LookupMode::Raw : LookupMode::Conservative;
        p.safety = safety == 0          ? SafetyMode::none()
                   : safety_mode == "radius" ? SafetyMode::add_to_radius(safety)
                                             : SafetyMode::subtract_from_distance(safety);
        p.collision_margin = margin;
        p.max_queries = max_queries;
        return p;
    }

    void echo(std::vector<std::string>& config) const {
        config.push_back("lookup=" + lookup);
        char buf[96];
        if (safety == 0) {
            std::snprintf(buf, sizeof buf, "safety=none margin=%g", margin);
        } else {
            std::snprintf(buf, sizeof buf, "safety=%s:%g margin=%g",
                          safety_mode.c_str(), safety, margin);
        }
        config.emplace_back(buf);
        config.push_back("max_queries=" + std::to_string(max_queries));
    }
};

std::vector<MethodSpec> parse_methods_csv(const std::string& text) {
    std::vector<MethodSpec> methods;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!item.empty()) methods.push_back(parse_method(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (methods.empty()) throw std::invalid_argument("--methods: no methods given");
    return methods;
}

int cmd_voxelize(const std::string& scene_arg, double res, const std::string& out,
                 std::size_t budget) {
    const Scene scene = load_scene_arg(scene_arg);
    const OccupancyGrid grid = voxelize(scene, res, budget);
    save_grid(grid, out);
    std::printf("wrote %s: %zux%zux%zu voxels at %g m, %zu occupied\n", out.c_str(),
                grid.shape.nx, grid.shape.ny, grid.shape.nz, grid.shape.resolution,
                grid.occupied_count());
    return 0;
}

int cmd_edf(const std::string& occ_path, const std::string& scene_arg, double res,
            double max_distance, const std::string& out, std::size_t budget) {
    OccupancyGrid occ;
    if (!occ_path.empty()) {
        occ = load_occupancy_grid(occ_path);
    } else if (!scene_arg.empty()) {
        if (!(res > 0)) throw std::invalid_argument("--scene needs --res");
        occ = voxelize(load_scene_arg(scene_arg), res, budget);
    } else {
        throw std::invalid_argument("need --occ or --scene");
    }
    const DistanceGrid dist = edt(occ, max_distance);
    save_grid(dist, out);
    std::printf("wrote %s: %zux%zux%zu voxels at %g m, max distance %g m\n", out.c_str(),
                dist.shape.nx, dist.shape.ny, dist.shape.nz, dist.shape.resolution,
                dist.max_distance);
    return 0;
}

int cmd_cloud2occ(const std::string& in, double res, const std::string& bounds_text,
                  const std::string& out, std::size_t budget) {
    std::optional<Box> bounds;
    if (!bounds_text.empty()) bounds = parse_bounds(bounds_text);
    const OccupancyGrid grid = ingest_xyz(in, res, bounds, budget);
    save_grid(grid, out);
    std::printf("wrote %s: %zux%zux%zu voxels at %g m, %zu occupied\n", out.c_str(),
                grid.shape.nx, grid.shape.ny, grid.shape.nz, grid.shape.resolution,
                grid.occupied_count());
    return 0;
}

int cmd_check(const FieldArgs& field_args, const CheckArgs& check_args,
              const std::string& capsule_text, const std::string& method_text) {
    const Capsule capsule = parse_capsule(capsule_text);
    const MethodSpec method = parse_method(method_text);
    std::string id;
    std::vector<std::string> config;
    // A scene given without --res is checked analytically.
    FieldArgs fa = field_args;
    if (fa.field_path.empty() && !(fa.res > 0)) fa.analytic = true;
    const auto field = fa.make(id, config);
    const CheckParams params = check_args.params();

    bool collision = false;
    std::size_t queries = 0;
    switch (method.kind) {
        case MethodSpec::Kind::Uni: {
            const CheckReport r = check_uni(capsule, *field, params);
            collision = r.collision();
            queries = r.queries;
            break;
        }
        case MethodSpec::Kind::Bi: {
            const CheckReport r = check_bi(capsule, *field, params);
            collision = r.collision();
            queries = r.queries;
            break;
        }
        case MethodSpec::Kind::Fixed: {
            const CheckReport r = check_fixed(capsule, *field, method.param, params);
            collision = r.collision();
            queries = r.queries;
            break;
        }
        case MethodSpec::Kind::Oracle: {
            const OracleReport r = oracle_check(capsule, *field, method.param, params);
            collision = r.verdict == Verdict::Collision;
            queries = r.samples;
            break;
        }
    }
    std::fprintf(stderr, "queries=%zu\n", queries);
    std::printf("%s\n", collision ? "collision" : "free");
    return collision ? kExitCollision : 0;
}

struct BenchCommon {
    FieldArgs field_args;
    CheckArgs check_args;
    std::string model_path;
    std::size_t samples = 10'000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    bool short_circuit = false;
    std::string methods_text;
    std::string out_csv;
    std::string out_json;

    void attach(CLI::App* cmd) {
        field_args.attach(cmd, true);
        check_args.attach(cmd);
        cmd->add_option("--model", model_path, "chain fixture JSON")->required();
        cmd->add_option("--samples", samples, "number of sampled configurations");
        cmd->add_option("--seed", seed, "sampler seed");
        cmd->add_option("--threads", threads,
                        "worker threads (0 = all cores; env EDFCAP_THREADS)");
        cmd->add_flag("--short-circuit", short_circuit,
                      "stop a configuration at its first colliding link");
        cmd->add_option("--methods", methods_text,
                        "comma list: uni,bi,fixed:<sep>,oracle:<step>")
            ->required();
        cmd->add_option("--out", out_csv, "CSV report path")->required();
        cmd->add_option("--json", out_json, "also write a JSON report");
    }

    MonteCarloOptions options(const std::string& scene_id) const {
        MonteCarloOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        opt.threads = resolve_threads(threads);
        opt.params = check_args.params();
        opt.short_circuit_links = short_circuit;
        opt.scene_id = scene_id;
        return opt;
    }

    std::vector<std::string> base_config(const char* cmd) const {
        std::vector<std::string> config{std::string("cmd=") + cmd};
        config.push_back("model=" + model_path);
        config.push_back("samples=" + std::to_string(samples));
        config.push_back("seed=" + std::to_string(seed));
        config.push_back("threads=" + std::to_string(resolve_threads(threads)));
        config.push_back(std::string("short_circuit=") + (short_circuit ? "1" : "0"));
        config.push_back("methods=" + methods_text);
        return config;
    }
};

int cmd_bench(const BenchCommon& args) {
    const ChainModel model = load_chain(args.model_path);
    const std::vector<MethodSpec> methods = parse_methods_csv(args.methods_text);
    std::string id;
    std::vector<std::string> config = args.base_config("bench");
    const auto field = args.field_args.make(id, config);
    args.check_args.echo(config);

    MonteCarloOptions opt = args.options(id);
    BenchReport report = run_monte_carlo(model, *field, methods, opt);
    report.config_lines = config;
    const std::vector<BenchReport> reports{std::move(report)};
    write_report_csv(reports, args.out_csv);
    if (!args.out_json.empty()) write_report_json(reports, args.out_json);
    std::printf("wrote %s (%zu method rows, %zu samples)\n", args.out_csv.c_str(),
                reports[0].rows.size(), args.samples);
    return 0;
}

int cmd_sweep(const BenchCommon& args, const std::string& variable,
              const std::string& values_text, std::size_t link_index) {
    const ChainModel model = load_chain(args.model_path);
    SweepSpec spec;
    if (variable == "length") spec.variable = SweepSpec::Variable::LinkLength;
    else if (variable == "radius") spec.variable = SweepSpec::Variable::LinkRadius;
    else if (variable == "safety") spec.variable = SweepSpec::Variable::SafetyDistance;
    else throw std::invalid_argument("--variable must be length|radius|safety");
    {
        std::size_t pos = 0;
        while (pos <= values_text.size()) {
            const std::size_t comma = values_text.find(',', pos);
            const std::string item = values_text.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!item.empty()) spec.values.push_back(std::stod(item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    spec.link_index = link_index;
    spec.methods = parse_methods_csv(args.methods_text);

    std::string id;
    std::vector<std::string> config = args.base_config("sweep");
    config.push_back("variable=" + variable);
    config.push_back("values=" + values_text);
    config.push_back("link_index=" + std::to_string(link_index));
    const auto field = args.field_args.make(id, config);
    args.check_args.echo(config);

    MonteCarloOptions opt = args.options(id);
    std::vector<BenchReport> reports = run_sweep(model, *field, spec, opt);
    for (auto& rep : reports) {
        rep.config_lines.insert(rep.config_lines.begin(), config.begin(), config.end());
    }
    write_report_csv(reports, args.out_csv);
    if (!args.out_json.empty()) write_report_json(reports, args.out_json);
    std::printf("wrote %s (%zu sweep values)\n", args.out_csv.c_str(), reports.size());
    return 0;
}

int cmd_info(const std::string& in) {
    // Grid container files carry a magic; anything else is tried as JSON.
    bool is_grid = false;
    try {
        grid_file_kind(in);
        is_grid = true;
    } catch (const FormatError&) {
    }
    if (is_grid) {
        if (grid_file_kind(in) == 0) {
            const OccupancyGrid g = load_occupancy_grid(in);
            std::printf("occupancy grid %s\n", in.c_str());
            std::printf("  dims: %zu x %zu x %zu (%zu cells)\n", g.shape.nx, g.shape.ny,
                        g.shape.nz, g.shape.cell_count());
            std::printf("  resolution: %g m\n", g.shape.resolution);
            std::printf("  origin: (%g, %g, %g)\n", g.shape.origin.x, g.shape.origin.y,
                        g.shape.origin.z);
            std::printf("  occupied: %zu\n", g.occupied_count());
        } else {
            const DistanceGrid g = load_distance_grid(in);
            double lo = g.max_distance, hi = 0;
            for (double v : g.values) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            std::printf("distance grid %s\n", in.c_str());
            std::printf("  dims: %zu x %zu x %zu (%zu cells)\n", g.shape.nx, g.shape.ny,
                        g.shape.nz, g.shape.cell_count());
            std::printf("  resolution: %g m\n", g.shape.resolution);
            std::printf("  origin: (%g, %g, %g)\n", g.shape.origin.x, g.shape.origin.y,
                        g.shape.origin.z);
            std::printf("  max distance: %g m, value range [%g, %g]\n", g.max_distance,
                        lo, hi);
        }
        return 0;
    }
    // JSON: a chain has "joints", a scene has "bounds".
    try {
        const ChainModel model = load_chain(in);
        std::printf("chain %s (%s)\n", in.c_str(),
                    model.name.empty() ? "unnamed" : model.name.c_str());
        std::printf("  joints: %zu\n", model.joints.size());
        for (const auto& j : model.joints) {
            std::printf("    %-12s %-9s axis (%g, %g, %g) limits [%g, %g]\n",
                        j.name.c_str(),
                        j.kind == JointSpec::Kind::Revolute ? "revolute" : "prismatic",
                        j.axis.x, j.axis.y, j.axis.z, j.lo, j.hi);
        }
        std::printf("  collision links: %zu\n", model.collision_links.size());
        for (const auto& c : model.collision_links) {
            std::printf("    %-12s frames %zu -> %zu, radius %g\n", c.name.c_str(),
                        c.start_frame, c.end_frame, c.radius);
        }
        return 0;
    } catch (const FormatError&) {
    }
    const Scene scene = load_scene_arg(in);
    std::size_t spheres = 0, boxes = 0;
    for (const auto& p : scene.primitives) {
        (std::holds_alternative<Sphere>(p) ? spheres : boxes)++;
    }
    std::printf("scene %s\n", in.c_str());
    std::printf("  bounds: (%g, %g, %g) .. (%g, %g, %g)\n", scene.bounds.min.x,
                scene.bounds.min.y, scene.bounds.min.z, scene.bounds.max.x,
                scene.bounds.max.y, scene.bounds.max.z);
    std::printf("  primitives: %zu spheres, %zu boxes\n", spheres, boxes);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"capsule collision checks in Euclidean distance fields"};
    app.require_subcommand(1);

    // voxelize
    auto* vox = app.add_subcommand("voxelize", "rasterize a scene into an occupancy grid");
    std::string vox_scene, vox_out;
    double vox_res = 0;
    std::size_t vox_budget = kDefaultVoxelBudget;
    vox->add_option("--scene", vox_scene, "scene JSON or forest:<spec>")->required();
    vox->add_option("--res", vox_res, "voxel edge length [m]")
        ->required()
        ->check(CLI::PositiveNumber);
    vox->add_option("--out", vox_out, "output grid file")->required();
    vox->add_option("--budget", vox_budget, "max voxel count");

    // edf
    auto* edf = app.add_subcommand("edf", "distance-transform an occupancy grid");
    std::string edf_occ, edf_scene, edf_out;
    double edf_res = 0, edf_maxd = 100.0;
    std::size_t edf_budget = kDefaultVoxelBudget;
    edf->add_option("--occ", edf_occ, "occupancy grid file");
    edf->add_option("--scene", edf_scene, "scene JSON or forest:<spec> (with --res)");
    edf->add_option("--res", edf_res, "voxel edge length [m]");
    edf->add_option("--max-distance", edf_maxd, "saturation distance [m]")
        ->check(CLI::PositiveNumber);
    edf->add_option("--out", edf_out, "output grid file")->required();
    edf->add_option("--budget", edf_budget, "max voxel count");

    // cloud2occ
    auto* cloud = app.add_subcommand("cloud2occ", "ingest an XYZ point cloud");
    std::string cloud_in, cloud_bounds, cloud_out;
    double cloud_res = 0;
    std::size_t cloud_budget = kDefaultVoxelBudget;
    cloud->add_option("--in", cloud_in, "ASCII cloud: x y z per line")->required();
    cloud->add_option("--res", cloud_res, "voxel edge length [m]")
        ->required()
        ->check(CLI::PositiveNumber);
    cloud->add_option("--bounds", cloud_bounds, "x0,y0,z0,x1,y1,z1 crop box");
    cloud->add_option("--out", cloud_out, "output grid file")->required();
    cloud->add_option("--budget", cloud_budget, "max voxel count");

    // check
    auto* chk = app.add_subcommand("check", "collision-check one capsule");
    FieldArgs chk_field;
    CheckArgs chk_params;
    std::string chk_capsule, chk_method = "bi";
    chk_field.attach(chk, true);
    chk_params.attach(chk);
    chk->add_option("--capsule", chk_capsule, "x1,y1,z1,x2,y2,z2,r")->required();
    chk->add_option("--method", chk_method, "uni|bi|fixed:<sep>|oracle:<step>");

    // bench
    auto* bench = app.add_subcommand("bench", "Monte-Carlo method comparison");
    BenchCommon bench_args;
    bench_args.attach(bench);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter sweep of the benchmark");
    BenchCommon sweep_args;
    sweep_args.attach(sweep);
    std::string sweep_variable, sweep_values;
    std::size_t sweep_link = 1;
    sweep->add_option("--variable", sweep_variable, "length|radius|safety")->required();
    sweep->add_option("--values", sweep_values, "comma list, strictly increasing")
        ->required();
    sweep->add_option("--link-index", sweep_link, "collision link the sweep rewrites");

    // info
    auto* info = app.add_subcommand("info", "describe a grid/scene/chain file");
    std::string info_in;
    info->add_option("--in", info_in, "file to inspect")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*vox) return cmd_voxelize(vox_scene, vox_res, vox_out, vox_budget);
        if (*edf) return cmd_edf(edf_occ, edf_scene, edf_res, edf_maxd, edf_out, edf_budget);
        if (*cloud) return cmd_cloud2occ(cloud_in, cloud_res, cloud_bounds, cloud_out,
                                         cloud_budget);
        if (*chk) return cmd_check(chk_field, chk_params, chk_capsule, chk_method);
        if (*bench) return cmd_bench(bench_args);
        if (*sweep) return cmd_sweep(sweep_args, sweep_variable, sweep_values, sweep_link);
        if (*info) return cmd_info(info_in);
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitUsage;
    } catch (const QueryBudgetError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFormat;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edfcap/collision.hpp"
#include "edfcap/fields.hpp"
#include "edfcap/kinematics.hpp"

namespace edfcap {

struct MethodSpec {
    enum class Kind : std::uint8_t { Uni, Bi, Fixed, Oracle };
    Kind kind = Kind::Uni;
    double param = 0; // Fixed: sphere separation; Oracle: sample step

    static MethodSpec uni() { return {Kind::Uni, 0}; }
    static MethodSpec bi() { return {Kind::Bi, 0}; }
    static MethodSpec fixed(double separation) { return {Kind::Fixed, separation}; }
    static MethodSpec oracle(double step) { return {Kind::Oracle, step}; }

    std::string label() const; // "uni", "bi", "fixed:0.3", "oracle:0.001"
    bool operator==(const MethodSpec&) const = default;
};

/// Parse a method label as accepted on the command line.
MethodSpec parse_method(const std::string& text);

/// One row of a benchmark report: one method over the full sample set.
struct MethodStats {
    std::string method;           // label, e.g. "fixed:0.3" or "uni@radius"
    double param = 0;             // method parameter (0 when none)
    std::size_t samples = 0;
    double collision_fraction = 0;
    double mean_queries = 0;
    double median_queries = 0;
    double p99_queries = 0;
    double mean_ns = 0;           // wall time per configuration check
    double median_ns = 0;

    bool operator==(const MethodStats&) const = default;
};

struct BenchReport {
    std::string scene_id;
    std::uint64_t seed = 0;
    std::string lookup_mode;               // "conservative" | "raw" | "analytic"
    std::string safety;                    // "none" | "radius:0.1" | "distance:0.1"
    std::vector<std::string> config_lines; // resolved run config, echoed verbatim
    std::vector<MethodStats> rows;

    bool operator==(const BenchReport&) const = default;
};

struct MonteCarloOptions {
    std::size_t samples = 10'000;
    std::uint64_t seed = 42;
    unsigned threads = 0;            // 0 = hardware concurrency
    CheckParams params;
    bool short_circuit_links = false; // stop at the first colliding link;
                                      // off keeps query stats comparable
    std::vector<std::pair<std::size_t, double>> pinned_joints; // (index, value)
    std::string scene_id = "unnamed";
};

/// Paired Monte-Carlo evaluation: every method sees the identical
/// configuration sequence; a configuration collides if any link does.
/// Query counts sum over links; wall time wraps the whole-configuration
/// check. Results are independent of thread count.
BenchReport run_monte_carlo(const ChainModel& model, const DistanceField& field,
                            const std::vector<MethodSpec>& methods,
                            const MonteCarloOptions& options);

struct SweepSpec {
    enum class Variable : std::uint8_t { LinkLength, LinkRadius, SafetyDistance };
    Variable variable = Variable::LinkLength;
    std::vector<double> values;   // nonempty, strictly increasing
    std::size_t link_index = 1;   // collision link the sweep rewrites
    std::vector<MethodSpec> methods;
};

/// One BenchReport per sweep value. LinkLength forces the chosen link's
/// capsule length; LinkRadius rewrites its radius and pins the telescope
/// joint at 2 m; SafetyDistance runs every method under both safety modes
/// (labels get "@radius" / "@distance" suffixes, param = d_s).
std::vector<BenchReport> run_sweep(const ChainModel& model,
                                   const DistanceField& field,
                                   const SweepSpec& spec,
                                   const MonteCarloOptions& options);

/// CSV: '#'-prefixed config echo, one header line, one row per MethodStats.
/// Columns: scene_id,seed,method,param,samples,collision_fraction,
/// mean_queries,median_queries,p99_queries,mean_ns,median_ns.
/// Timing columns sit last so determinism diffs can strip them.
void write_report_csv(const std::vector<BenchReport>& reports,
                      const std::string& path);
std::string report_csv_text(const std::vector<BenchReport>& reports);

void write_report_json(const std::vector<BenchReport>& reports,
                       const std::string& path);
std::string report_json_text(const std::vector<BenchReport>& reports);
std::vector<BenchReport> reports_from_json_text(const std::string& text);
std::vector<BenchReport> read_report_json(const std::string& path);

} // namespace edfcap

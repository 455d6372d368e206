#include "edfcap/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "edfcap/errors.hpp"
#include "json.hpp"

namespace edfcap {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string safety_string(const SafetyMode& s) {
    switch (s.kind) {
        case SafetyMode::Kind::SubtractFromDistance:
            return "distance:" + fmt(s.distance);
        case SafetyMode::Kind::AddToRadius:
            return "radius:" + fmt(s.distance);
        case SafetyMode::Kind::None:
        default:
            return "none";
    }
}

} // namespace

std::string MethodSpec::label() const {
    switch (kind) {
        case Kind::Bi: return "bi";
        case Kind::Fixed: return "fixed:" + fmt(param);
        case Kind::Oracle: return "oracle:" + fmt(param);
        case Kind::Uni:
        default: return "uni";
    }
}

MethodSpec parse_method(const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "uni" || head == "bi") {
        if (colon != std::string::npos) {
            throw FormatError("method \"" + head + "\" takes no parameter");
        }
        return head == "uni" ? MethodSpec::uni() : MethodSpec::bi();
    }
    if (head == "fixed" || head == "oracle") {
        if (colon == std::string::npos) {
            throw FormatError("method \"" + head + "\" needs a parameter, e.g. " +
                              head + ":0.3");
        }
        double v = 0;
        try {
            v = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            throw FormatError("bad method parameter in \"" + text + "\"");
        }
        if (!(v > 0)) throw FormatError("method parameter must be > 0 in \"" + text + "\"");
        return head == "fixed" ? MethodSpec::fixed(v) : MethodSpec::oracle(v);
    }
    throw FormatError("unknown method \"" + text +
                      "\" (expected uni, bi, fixed:<sep>, oracle:<step>)");
}

namespace {

struct LinkOutcome {
    bool collision;
    std::size_t queries;
};

LinkOutcome run_one(const MethodSpec& m, const Capsule& c, const DistanceField& f,
                    const CheckParams& p) {
    switch (m.kind) {
        case MethodSpec::Kind::Uni: {
            const CheckReport r = check_uni(c, f, p);
            return {r.collision(), r.queries};
        }
        case MethodSpec::Kind::Bi: {
            const CheckReport r = check_bi(c, f, p);
            return {r.collision(), r.queries};
        }
        case MethodSpec::Kind::Fixed: {
            const CheckReport r = check_fixed(c, f, m.param, p);
            return {r.collision(), r.queries};
        }
        case MethodSpec::Kind::Oracle:
        default: {
            const OracleReport r = oracle_check(c, f, m.param, p);
            return {r.verdict == Verdict::Collision, r.samples};
        }
    }
}

double mean_of(const std::vector<double>& v) {
    double sum = 0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double sorted_pick(std::vector<double> v, std::size_t idx) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

double median_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : sorted_pick(v, (v.size() - 1) / 2);
}

double p99_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(
        std::floor(0.99 * static_cast<double>(v.size() - 1)));
    return sorted_pick(v, idx);
}

enum class WorkerErrorKind { None, Budget, Domain, Other };

struct WorkerError {
    WorkerErrorKind kind = WorkerErrorKind::None;
    std::string message;
};

std::string format_q(const Configuration& q) {
    std::string s = "[";
    for (std::size_t i = 0; i < q.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", q[i]);
        s += (i ? "," : "") + std::string(buf);
    }
    return s + "]";
}

} // namespace

BenchReport run_monte_carlo(const ChainModel& model, const DistanceField& field,
                            const std::vector<MethodSpec>& methods,
                            const MonteCarloOptions& options) {
    model.validate();
    if (options.samples == 0) throw std::invalid_argument("samples must be >= 1");
    if (methods.empty()) throw std::invalid_argument("no methods given");
    const std::size_t n = options.samples;
    const std::size_t m = methods.size();

    // Per-method, per-sample outcome slots; workers write disjoint indices so
    // the result is identical for any thread count.
    std::vector<std::vector<double>> queries(m, std::vector<double>(n));
    std::vector<std::vector<double>> ns(m, std::vector<double>(n));
    std::vector<std::vector<std::uint8_t>> hit(m, std::vector<std::uint8_t>(n));

    unsigned workers = options.threads ? options.threads
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, n));

    std::vector<WorkerError> errors(workers);

    auto body = [&](unsigned w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        Configuration q;
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                q = sample_configuration(model, options.seed, i);
                for (const auto& [joint, value] : options.pinned_joints) {
                    q.at(joint) = value;
                }
                const std::vector<Capsule> capsules = forward(model, q);
                for (std::size_t mi = 0; mi < m; ++mi) {
                    bool any_hit = false;
                    std::size_t total_queries = 0;
                    const auto t0 = std::chrono::steady_clock::now();
                    for (const auto& c : capsules) {
                        const LinkOutcome out =
                            run_one(methods[mi], c, field, options.params);
                        any_hit = any_hit || out.collision;
                        total_queries += out.queries;
                        if (any_hit && options.short_circuit_links) break;
                    }
                    const auto t1 = std::chrono::steady_clock::now();
                    hit[mi][i] = any_hit ? 1 : 0;
                    queries[mi][i] = static_cast<double>(total_queries);
                    ns[mi][i] = static_cast<double>(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                            .count());
                }
            } catch (const QueryBudgetError& e) {
                errors[w] = {WorkerErrorKind::Budget,
                             std::string(e.what()) + " at sample " + std::to_string(i) +
                                 ", q=" + format_q(q)};
                return;
            } catch (const std::domain_error& e) {
                errors[w] = {WorkerErrorKind::Domain, e.what()};
                return;
            } catch (const std::exception& e) {
                errors[w] = {WorkerErrorKind::Other, e.what()};
                return;
            }
        }
    };

    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& t : pool) t.join();
    }

    for (const auto& err : errors) {
        switch (err.kind) {
            case WorkerErrorKind::Budget: throw QueryBudgetError(err.message);
            case WorkerErrorKind::Domain: throw std::domain_error(err.message);
            case WorkerErrorKind::Other: throw std::runtime_error(err.message);
            case WorkerErrorKind::None: break;
        }
    }

    BenchReport report;
    report.scene_id = options.scene_id;
    report.seed = options.seed;
    report.lookup_mode =
        options.params.lookup_mode == LookupMode::Conservative ? "conservative" : "raw";
    report.safety = safety_string(options.params.safety);
    report.rows.reserve(m);
    for (std::size_t mi = 0; mi < m; ++mi) {
        MethodStats row;
        row.method = methods[mi].label();
        row.param = methods[mi].param;
        row.samples = n;
        std::size_t hits = 0;
        for (std::uint8_t h : hit[mi]) hits += h;
        row.collision_fraction = static_cast<double>(hits) / static_cast<double>(n);
        row.mean_queries = mean_of(queries[mi]);
        row.median_queries = median_of(queries[mi]);
        row.p99_queries = p99_of(queries[mi]);
        row.mean_ns = mean_of(ns[mi]);
        row.median_ns = median_of(ns[mi]);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<BenchReport> run_sweep(const ChainModel& model, const DistanceField& field,
                                   const SweepSpec& spec,
                                   const MonteCarloOptions& options) {
    if (spec.values.empty()) throw std::invalid_argument("sweep needs values");
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
        if (!(spec.values[i - 1] < spec.values[i])) {
            throw std::invalid_argument("sweep values must be strictly increasing");
        }
    }
    if (spec.methods.empty()) throw std::invalid_argument("sweep needs methods");
    if (spec.link_index >= model.collision_links.size()) {
        throw std::invalid_argument("sweep link index out of range");
    }

    std::vector<BenchReport> reports;
    reports.reserve(spec.values.size());
    for (const double value : spec.values) {
        ChainModel varied = model;
        MonteCarloOptions opt = options;
        switch (spec.variable) {
            case SweepSpec::Variable::LinkLength:
                varied.collision_links[spec.link_index].forced_length = value;
                break;
            case SweepSpec::Variable::LinkRadius: {
                auto& link = varied.collision_links[spec.link_index];
                link.radius = value;
                // Park the telescope at a fixed extension so the capsule
                // geometry differs across runs only in its radius.
                if (link.length_extension_joint) {
                    opt.pinned_joints.emplace_back(*link.length_extension_joint, 2.0);
                }
                break;
            }
            case SweepSpec::Variable::SafetyDistance:
                break; // handled below, needs two runs per value
        }

        if (spec.variable == SweepSpec::Variable::SafetyDistance) {
            opt.params.safety = SafetyMode::add_to_radius(value);
            BenchReport rep = run_monte_carlo(varied, field, spec.methods, opt);
            for (auto& row : rep.rows) {
                row.method += "@radius";
                row.param = value;
            }
            opt.params.safety = SafetyMode::subtract_from_distance(value);
            BenchReport rep2 = run_monte_carlo(varied, field, spec.methods, opt);
            for (auto& row : rep2.rows) {
                row.method += "@distance";
                row.param = value;
            }
            rep.rows.insert(rep.rows.end(), rep2.rows.begin(), rep2.rows.end());
            rep.safety = "sweep:" + fmt(value);
            rep.config_lines.push_back("sweep=safety value=" + fmt(value));
            reports.push_back(std::move(rep));
            continue;
        }

        BenchReport rep = run_monte_carlo(varied, field, spec.methods, opt);
        const char* what =
            spec.variable == SweepSpec::Variable::LinkLength ? "length" : "radius";
        for (auto& row : rep.rows) row.param = value;
        rep.config_lines.push_back(std::string("sweep=") + what + " value=" + fmt(value));
        reports.push_back(std::move(rep));
    }
    return reports;
}

namespace {

void append_csv(std::string& out, const BenchReport& rep) {
    for (const auto& row : rep.rows) {
        char buf[256];
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f,%.3f,%.3f",
                      row.collision_fraction, row.mean_queries, row.median_queries,
                      row.p99_queries, row.mean_ns, row.median_ns);
        out += "\"" + rep.scene_id + "\"," + std::to_string(rep.seed) + "," +
               row.method + "," + fmt(row.param) + "," + std::to_string(row.samples) +
               buf + "\n";
    }
}

} // namespace

std::string report_csv_text(const std::vector<BenchReport>& reports) {
    std::string out;
    for (const auto& rep : reports) {
        for (const auto& line : rep.config_lines) out += "# " + line + "\n";
    }
    out += "scene_id,seed,method,param,samples,collision_fraction,mean_queries,"
           "median_queries,p99_queries,mean_ns,median_ns\n";
    for (const auto& rep : reports) append_csv(out, rep);
    return out;
}

void write_report_csv(const std::vector<BenchReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << report_csv_text(reports);
    if (!out.flush()) throw IoError("write failure on " + path);
}

namespace {

using nlohmann::json;

json row_to_json(const MethodStats& row) {
    return {{"method", row.method},
            {"param", row.param},
            {"samples", row.samples},
            {"collision_fraction", row.collision_fraction},
            {"mean_queries", row.mean_queries},
            {"median_queries", row.median_queries},
            {"p99_queries", row.p99_queries},
            {"mean_ns", row.mean_ns},
            {"median_ns", row.median_ns}};
}

MethodStats row_from_json(const json& j) {
    MethodStats row;
    row.method = j.at("method").get<std::string>();
    row.param = j.at("param").get<double>();
    row.samples = j.at("samples").get<std::size_t>();
    row.collision_fraction = j.at("collision_fraction").get<double>();
    row.mean_queries = j.at("mean_queries").get<double>();
    row.median_queries = j.at("median_queries").get<double>();
    row.p99_queries = j.at("p99_queries").get<double>();
    row.mean_ns = j.at("mean_ns").get<double>();
    row.median_ns = j.at("median_ns").get<double>();
    return row;
}

} // namespace

std::string report_json_text(const std::vector<BenchReport>& reports) {
    json arr = json::array();
    for (const auto& rep : reports) {
        json rows = json::array();
        for (const auto& row : rep.rows) rows.push_back(row_to_json(row));
        arr.push_back({{"scene_id", rep.scene_id},
                       {"seed", rep.seed},
                       {"lookup_mode", rep.lookup_mode},
                       {"safety", rep.safety},
                       {"config", rep.config_lines},
                       {"rows", rows}});
    }
    return arr.dump(2) + "\n";
}

void write_report_json(const std::vector<BenchReport>& reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << report_json_text(reports);
    if (!out.flush()) throw IoError("write failure on " + path);
}

std::vector<BenchReport> reports_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("report: JSON parse error at byte " + std::to_string(e.byte) +
                          ": " + e.what());
    }
    try {
        std::vector<BenchReport> reports;
        for (const auto& r : doc) {
            BenchReport rep;
            rep.scene_id = r.at("scene_id").get<std::string>();
            rep.seed = r.at("seed").get<std::uint64_t>();
            rep.lookup_mode = r.at("lookup_mode").get<std::string>();
            rep.safety = r.at("safety").get<std::string>();
            rep.config_lines = r.at("config").get<std::vector<std::string>>();
            for (const auto& row : r.at("rows")) rep.rows.push_back(row_from_json(row));
            reports.push_back(std::move(rep));
        }
        return reports;
    } catch (const json::exception& e) {
        throw FormatError(std::string("report: ") + e.what());
    }
}

std::vector<BenchReport> read_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return reports_from_json_text(buf.str());
}

} // namespace edfcap

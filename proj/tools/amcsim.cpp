// amcsim — command-line front end for the analog matrix-computing simulator.
//
// Subcommands: simulate, sweep, compensate, bench, oracle.
// Exit codes: 0 success, 2 invalid input (bad flags, malformed files,
// infeasible specs), 3 singular system, 1 anything else.
// AMCSIM_THREADS caps the worker pool used by sweep and compensate.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amc/compensation.hpp"
#include "amc/experiments.hpp"
#include "amc/io.hpp"
#include "amc/oracle.hpp"
#include "amc/types.hpp"
#include "amc/workload.hpp"

namespace {

using nlohmann::json;

/// Binds config-file keys to the same storage as the CLI flags. A key from
/// the file applies only when the matching flag was not given on the command
/// line (precedence: flags > file > defaults).
class ConfigBinder {
public:
    template <typename T>
    void bind(const std::string& key, CLI::Option* option, T* target) {
        options_[key] = option;
        setters_[key] = [target](const json& value) { *target = value.get<T>(); };
    }

    void apply_file(const std::string& path) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in.is_open()) throw amc::InvalidInput("cannot open config file '" + path + "'");
        json parsed;
        try {
            parsed = json::parse(in, nullptr, true, true);  // allow comments
        } catch (const json::exception& err) {
            throw amc::InvalidInput("config file '" + path + "': " + err.what());
        }
        if (!parsed.is_object())
            throw amc::InvalidInput("config file '" + path + "': top level must be an object");
        for (const auto& [key, value] : parsed.items()) {
            auto setter = setters_.find(key);
            if (setter == setters_.end())
                throw amc::InvalidInput("config file '" + path + "': unknown key '" + key + "'");
            try {
                if (options_.at(key)->count() == 0) setter->second(value);
            } catch (const json::exception& err) {
                throw amc::InvalidInput("config file '" + path + "', key '" + key +
                                        "': " + err.what());
            }
        }
    }

private:
    std::map<std::string, CLI::Option*> options_;
    std::map<std::string, std::function<void(const json&)>> setters_;
};

std::string join_longs(const std::vector<long long>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += values[i];
    }
    return out;
}

/// Ordered key=value pairs describing the effective configuration; echoed
/// into every output header and into JSON outputs.
using KvList = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> header_lines(const std::string& command, const KvList& kv) {
    std::vector<std::string> lines{"amcsim " + command};
    for (const auto& [key, value] : kv) lines.push_back(key + "=" + value);
    return lines;
}

json config_json(const std::string& command, const KvList& kv) {
    json j;
    j["command"] = command;
    for (const auto& [key, value] : kv) j[key] = value;
    return j;
}

/// Output stream selection: path when given, stdout otherwise.
class OutTarget {
public:
    explicit OutTarget(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_.is_open()) throw amc::InvalidInput("cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

/// Options shared by the model-building subcommands.
struct CommonOpts {
    std::string circuit = "inv";
    long long n = 8;
    std::string matrix_file;
    std::string gen = "dds";
    double r = 1.0;
    std::string node;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::string config_file;
};

void attach_common(CLI::App* cmd, CommonOpts* o, ConfigBinder* binder) {
    binder->bind("circuit",
                 cmd->add_option("--circuit", o->circuit, "Circuit: inv, egv, or mvm")
                     ->check(CLI::IsMember({"inv", "egv", "mvm"})),
                 &o->circuit);
    binder->bind("n", cmd->add_option("--n", o->n, "Matrix size (ignored with --matrix)"), &o->n);
    auto* matrix = cmd->add_option("--matrix", o->matrix_file,
                                   "Conductance matrix CSV (N rows of N values, siemens)");
    binder->bind("matrix", matrix, &o->matrix_file);
    auto* gen = cmd->add_option("--gen", o->gen,
                                "Generated matrix kind: dds (diagonally dominant symmetric) or pd")
                    ->check(CLI::IsMember({"dds", "pd"}));
    binder->bind("gen", gen, &o->gen);
    gen->excludes(matrix);
    auto* r = cmd->add_option("--r", o->r, "Wire resistance per segment [ohm]");
    binder->bind("r", r, &o->r);
    auto* node = cmd->add_option("--node", o->node, "Technology node preset: baseline, 32nm, 22nm, 16nm")
                     ->check(CLI::IsMember({"baseline", "32nm", "22nm", "16nm"}));
    binder->bind("node", node, &o->node);
    node->excludes(r);
    binder->bind("seed", cmd->add_option("--seed", o->seed, "RNG seed"), &o->seed);
    binder->bind("out", cmd->add_option("--out", o->out, "Output path (default stdout)"), &o->out);
    binder->bind("format",
                 cmd->add_option("--format", o->format, "Output format: csv or json")
                     ->check(CLI::IsMember({"csv", "json"})),
                 &o->format);
    cmd->add_option("--config", o->config_file, "JSON config file (flags take precedence)");
}

double effective_r(const CommonOpts& o) {
    return o.node.empty() ? o.r : amc::preset(o.node).r_wire;
}

amc::MatrixKind gen_kind(const std::string& gen) {
    return gen == "pd" ? amc::MatrixKind::positive_definite
                       : amc::MatrixKind::diag_dominant_symmetric;
}

amc::RunConfig to_run_config(const CommonOpts& o, bool with_oracle) {
    amc::RunConfig cfg;
    cfg.circuit = amc::circuit_from_name(o.circuit);
    cfg.n = o.n;
    cfg.matrix_file = o.matrix_file;
    cfg.gen_kind = gen_kind(o.gen);
    cfg.r_wire = effective_r(o);
    cfg.seed = o.seed;
    cfg.with_oracle = with_oracle;
    return cfg;
}

KvList common_kv(const CommonOpts& o) {
    KvList kv{{"circuit", o.circuit}};
    if (o.matrix_file.empty()) {
        kv.emplace_back("n", std::to_string(o.n));
        kv.emplace_back("gen", o.gen);
    } else {
        kv.emplace_back("matrix", o.matrix_file);
    }
    kv.emplace_back("r_ohm", amc::format_double(effective_r(o)));
    if (!o.node.empty()) kv.emplace_back("node", o.node);
    kv.emplace_back("seed", std::to_string(o.seed));
    kv.emplace_back("format", o.format);
    return kv;
}

json record_json(const amc::BenchRecord& r) {
    json j;
    j["circuit"] = r.circuit;
    j["n"] = r.n;
    j["r_ohm"] = r.r_ohm;
    j["trial"] = r.trial;
    j["re_vs_ideal"] = r.re_vs_ideal;
    if (r.re_vs_oracle) j["re_vs_oracle"] = *r.re_vs_oracle;
    j["assemble_ms"] = r.assemble_ms;
    j["factor_ms"] = r.factor_ms;
    j["solve_ms"] = r.solve_ms;
    j["nnz"] = r.nnz;
    j["sparsity"] = r.sparsity;
    j["status"] = r.failed ? "failed" : "ok";
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json curve_json(const std::vector<amc::BiasCurvePoint>& curve) {
    json arr = json::array();
    for (const auto& p : curve) {
        json item;
        item["round"] = p.round;
        item["ratio"] = p.ratio;
        item["mean_re"] = p.mean_re;
        item["trials_used"] = p.trials_used;
        arr.push_back(item);
    }
    return arr;
}

int cmd_simulate(const CommonOpts& o, bool oracle) {
    const amc::RunConfig cfg = to_run_config(o, oracle);
    const amc::SimulationResult result = amc::run_simulation(cfg);
    KvList kv = common_kv(o);
    kv.emplace_back("oracle", oracle ? "1" : "0");
    if (!o.out.empty()) amc::write_vector(o.out, result.output);
    if (o.format == "json") {
        json j;
        j["config"] = config_json("simulate", kv);
        j["record"] = record_json(result.record);
        j["output"] = vector_json(result.output);
        std::cout << j.dump(2) << '\n';
    } else {
        amc::write_bench_csv(std::cout, header_lines("simulate", kv), {result.record});
    }
    return 0;
}

int cmd_oracle(const CommonOpts& o) {
    const amc::RunConfig cfg = to_run_config(o, true);
    const amc::OracleResult result = amc::run_oracle(cfg);
    KvList kv = common_kv(o);
    if (!o.out.empty()) amc::write_vector(o.out, result.output);
    if (o.format == "json") {
        json j;
        j["config"] = config_json("oracle", kv);
        j["output"] = vector_json(result.output);
        j["max_kcl_residual"] = result.max_kcl_residual;
        j["current_scale"] = result.current_scale;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& line : header_lines("oracle", kv)) std::cout << "# " << line << '\n';
        std::cout << "max_kcl_residual,current_scale\n"
                  << amc::format_double(result.max_kcl_residual) << ','
                  << amc::format_double(result.current_scale) << '\n';
        if (o.out.empty()) {
            std::cout << "# output\n";
            for (Eigen::Index i = 0; i < result.output.size(); ++i)
                std::cout << "# " << amc::format_double(result.output(i)) << '\n';
        }
    }
    return 0;
}

int cmd_sweep(const std::vector<long long>& sizes, const std::vector<std::string>& nodes,
              const std::vector<std::string>& circuits, long long trials, std::uint64_t seed,
              bool oracle, const std::string& out, const std::string& format) {
    amc::SweepConfig cfg;
    cfg.sizes.assign(sizes.begin(), sizes.end());
    cfg.presets = nodes;
    cfg.circuits.clear();
    for (const auto& name : circuits) cfg.circuits.push_back(amc::circuit_from_name(name));
    cfg.trials = static_cast<int>(trials);
    cfg.seed = seed;
    cfg.with_oracle = oracle;
    const std::vector<amc::BenchRecord> records = amc::run_sweep(cfg);

    KvList kv{{"sizes", join_longs(sizes)},
              {"nodes", join_strings(nodes)},
              {"circuits", join_strings(circuits)},
              {"trials", std::to_string(trials)},
              {"seed", std::to_string(seed)},
              {"oracle", oracle ? "1" : "0"},
              {"format", format}};
    OutTarget target(out);
    if (format == "json") {
        json j;
        j["config"] = config_json("sweep", kv);
        json arr = json::array();
        for (const auto& r : records) arr.push_back(record_json(r));
        j["records"] = arr;
        target.stream() << j.dump(2) << '\n';
    } else {
        amc::write_bench_csv(target.stream(), header_lines("sweep", kv), records);
    }
    return 0;
}

int cmd_compensate(const CommonOpts& o, const amc::BiasSearchConfig& search,
                   const std::vector<double>& ratios) {
    const amc::CircuitKind circuit = amc::circuit_from_name(o.circuit);
    const amc::CrossbarModel model = amc::make_model(to_run_config(o, false));
    KvList kv = common_kv(o);
    kv.emplace_back("step", amc::format_double(search.initial_step));
    kv.emplace_back("rounds", std::to_string(search.refinement_rounds));
    kv.emplace_back("grid_points", std::to_string(search.grid_points));
    kv.emplace_back("grid_center", std::to_string(search.grid_center_index));
    kv.emplace_back("trials", std::to_string(search.trials_per_candidate));

    if (!ratios.empty()) {
        const auto curve = amc::bias_sweep(circuit, model, ratios, search);
        OutTarget target(o.out);
        if (o.format == "json") {
            json j;
            j["config"] = config_json("compensate", kv);
            j["curve"] = curve_json(curve);
            target.stream() << j.dump(2) << '\n';
        } else {
            amc::write_curve_csv(target.stream(), header_lines("compensate", kv), curve);
        }
        return 0;
    }

    const amc::BiasSearchResult result = amc::search_optimal_bias(circuit, model, search);
    if (o.format == "json") {
        json j;
        j["config"] = config_json("compensate", kv);
        json summary;
        summary["optimal_bias_ratio"] = result.optimal_bias_ratio;
        summary["min_re"] = result.min_re;
        summary["baseline_re"] = result.baseline_re;
        summary["delta_re"] = result.delta_re;
        j["summary"] = summary;
        j["curve"] = curve_json(result.curve);
        OutTarget target(o.out);
        target.stream() << j.dump(2) << '\n';
    } else {
        // Summary to stdout; full curve to --out when given.
        amc::write_search_csv(std::cout, header_lines("compensate", kv), result);
        if (!o.out.empty()) {
            OutTarget target(o.out);
            amc::write_curve_csv(target.stream(), header_lines("compensate", kv), result.curve);
        }
    }
    return 0;
}

int cmd_bench(const std::string& circuit, const std::vector<long long>& sizes, long long reps,
              double r, const std::string& node, std::uint64_t seed, double timeout,
              const std::string& out, const std::string& format) {
    amc::BenchConfig cfg;
    cfg.circuit = amc::circuit_from_name(circuit);
    cfg.sizes.assign(sizes.begin(), sizes.end());
    cfg.repetitions = static_cast<int>(reps);
    cfg.r_wire = node.empty() ? r : amc::preset(node).r_wire;
    cfg.seed = seed;
    cfg.timeout_seconds = timeout;
    const amc::BenchReport report = amc::run_bench(cfg);

    KvList kv{{"circuit", circuit},
              {"sizes", join_longs(sizes)},
              {"reps", std::to_string(reps)},
              {"r_ohm", amc::format_double(cfg.r_wire)},
              {"seed", std::to_string(seed)},
              {"timeout_s", amc::format_double(timeout)},
              {"format", format}};
    OutTarget target(out);
    if (format == "json") {
        json j;
        j["config"] = config_json("bench", kv);
        json arr = json::array();
        for (const auto& p : report.sizes) {
            json item;
            item["n"] = p.n;
            item["repetitions"] = p.repetitions;
            item["assemble_ms"] = p.assemble_ms;
            item["factor_ms"] = p.factor_ms;
            item["solve_ms"] = p.solve_ms;
            item["total_ms"] = p.total_ms;
            item["nnz"] = p.nnz;
            item["nnz_per_n2"] = p.nnz_per_n2;
            item["status"] = p.skipped ? "skipped" : "ok";
            if (!p.note.empty()) item["note"] = p.note;
            arr.push_back(item);
        }
        j["sizes"] = arr;
        j["loglog_slope"] = report.slope;
        target.stream() << j.dump(2) << '\n';
    } else {
        amc::write_bench_report_csv(target.stream(), header_lines("bench", kv), report);
    }
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Closed-loop analog matrix-computing (RRAM crossbar) simulator.\n"
                 "Set AMCSIM_THREADS to cap the worker pool."};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Solve one circuit instance");
    CommonOpts sim_opts;
    ConfigBinder sim_binder;
    attach_common(sim, &sim_opts, &sim_binder);
    bool sim_oracle = false;
    sim_binder.bind("oracle",
                    sim->add_flag("--oracle", sim_oracle, "Also solve the full netlist oracle"),
                    &sim_oracle);

    // oracle
    auto* orc = app.add_subcommand("oracle", "Solve the full resistor-netlist oracle");
    CommonOpts orc_opts;
    ConfigBinder orc_binder;
    attach_common(orc, &orc_opts, &orc_binder);

    // sweep
    auto* swp = app.add_subcommand("sweep", "Cross-product sweep over sizes and tech nodes");
    std::vector<long long> swp_sizes{4, 8, 16, 32, 64};
    std::vector<std::string> swp_nodes{"baseline", "32nm", "22nm", "16nm"};
    std::vector<std::string> swp_circuits{"inv", "egv", "mvm"};
    long long swp_trials = 3;
    std::uint64_t swp_seed = 0;
    bool swp_oracle = false;
    std::string swp_out, swp_format = "csv", swp_config;
    ConfigBinder swp_binder;
    swp_binder.bind("sizes",
                    swp->add_option("--sizes", swp_sizes, "Matrix sizes")->delimiter(','),
                    &swp_sizes);
    swp_binder.bind("nodes",
                    swp->add_option("--nodes", swp_nodes, "Tech node presets")->delimiter(','),
                    &swp_nodes);
    swp_binder.bind("circuits",
                    swp->add_option("--circuits", swp_circuits, "Circuits to run")->delimiter(','),
                    &swp_circuits);
    swp_binder.bind("trials", swp->add_option("--trials", swp_trials, "Trials per cell"),
                    &swp_trials);
    swp_binder.bind("seed", swp->add_option("--seed", swp_seed, "RNG seed"), &swp_seed);
    swp_binder.bind("oracle",
                    swp->add_flag("--oracle", swp_oracle, "Compare each row to the netlist oracle"),
                    &swp_oracle);
    swp_binder.bind("out", swp->add_option("--out", swp_out, "Output path (default stdout)"),
                    &swp_out);
    swp_binder.bind("format",
                    swp->add_option("--format", swp_format, "csv or json")
                        ->check(CLI::IsMember({"csv", "json"})),
                    &swp_format);
    swp->add_option("--config", swp_config, "JSON config file (flags take precedence)");

    // compensate
    auto* cmp = app.add_subcommand("compensate", "Search the optimal input-bias ratio");
    CommonOpts cmp_opts;
    ConfigBinder cmp_binder;
    attach_common(cmp, &cmp_opts, &cmp_binder);
    amc::BiasSearchConfig cmp_search;
    std::vector<double> cmp_ratios;
    cmp_binder.bind("step", cmp->add_option("--step", cmp_search.initial_step,
                                            "Step before the first /10 refinement"),
                    &cmp_search.initial_step);
    cmp_binder.bind("rounds",
                    cmp->add_option("--rounds", cmp_search.refinement_rounds, "Refinement rounds"),
                    &cmp_search.refinement_rounds);
    cmp_binder.bind("grid_points",
                    cmp->add_option("--grid-points", cmp_search.grid_points, "Candidates per round"),
                    &cmp_search.grid_points);
    cmp_binder.bind("grid_center",
                    cmp->add_option("--grid-center", cmp_search.grid_center_index,
                                    "Grid index sitting at the running offset"),
                    &cmp_search.grid_center_index);
    cmp_binder.bind("trials",
                    cmp->add_option("--trials", cmp_search.trials_per_candidate,
                                    "Randomized trials per candidate"),
                    &cmp_search.trials_per_candidate);
    cmp_binder.bind("ratios",
                    cmp->add_option("--ratios", cmp_ratios,
                                    "Evaluate these bias ratios instead of searching")
                        ->delimiter(','),
                    &cmp_ratios);

    // bench
    auto* bch = app.add_subcommand("bench", "Runtime scaling benchmark");
    std::string bch_circuit = "inv";
    std::vector<long long> bch_sizes{128, 256, 512, 1024};
    long long bch_reps = 3;
    double bch_r = 1.0;
    std::string bch_node;
    std::uint64_t bch_seed = 0;
    double bch_timeout = 600.0;
    std::string bch_out, bch_format = "csv", bch_config;
    ConfigBinder bch_binder;
    bch_binder.bind("circuit",
                    bch->add_option("--circuit", bch_circuit, "Circuit: inv, egv, or mvm")
                        ->check(CLI::IsMember({"inv", "egv", "mvm"})),
                    &bch_circuit);
    bch_binder.bind("sizes",
                    bch->add_option("--sizes", bch_sizes, "Ascending matrix sizes")->delimiter(','),
                    &bch_sizes);
    bch_binder.bind("reps", bch->add_option("--reps", bch_reps, "Repetitions per size (median)"),
                    &bch_reps);
    auto* bch_r_opt = bch->add_option("--r", bch_r, "Wire resistance per segment [ohm]");
    bch_binder.bind("r", bch_r_opt, &bch_r);
    auto* bch_node_opt =
        bch->add_option("--node", bch_node, "Technology node preset")
            ->check(CLI::IsMember({"baseline", "32nm", "22nm", "16nm"}));
    bch_binder.bind("node", bch_node_opt, &bch_node);
    bch_node_opt->excludes(bch_r_opt);
    bch_binder.bind("seed", bch->add_option("--seed", bch_seed, "RNG seed"), &bch_seed);
    bch_binder.bind("timeout",
                    bch->add_option("--timeout", bch_timeout, "Per-size timeout [s]"),
                    &bch_timeout);
    bch_binder.bind("out", bch->add_option("--out", bch_out, "Output path (default stdout)"),
                    &bch_out);
    bch_binder.bind("format",
                    bch->add_option("--format", bch_format, "csv or json")
                        ->check(CLI::IsMember({"csv", "json"})),
                    &bch_format);
    bch->add_option("--config", bch_config, "JSON config file (flags take precedence)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) {
        sim_binder.apply_file(sim_opts.config_file);
        return cmd_simulate(sim_opts, sim_oracle);
    }
    if (orc->parsed()) {
        orc_binder.apply_file(orc_opts.config_file);
        return cmd_oracle(orc_opts);
    }
    if (swp->parsed()) {
        swp_binder.apply_file(swp_config);
        return cmd_sweep(swp_sizes, swp_nodes, swp_circuits, swp_trials, swp_seed, swp_oracle,
                         swp_out, swp_format);
    }
    if (cmp->parsed()) {
        cmp_binder.apply_file(cmp_opts.config_file);
        cmp_search.seed = cmp_opts.seed;
        return cmd_compensate(cmp_opts, cmp_search, cmp_ratios);
    }
    if (bch->parsed()) {
        bch_binder.apply_file(bch_config);
        return cmd_bench(bch_circuit, bch_sizes, bch_reps, bch_r, bch_node, bch_seed, bch_timeout,
                         bch_out, bch_format);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const amc::SingularSystem& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const amc::InvalidInput& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}

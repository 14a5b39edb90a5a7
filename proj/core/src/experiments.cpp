#include "amc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "amc/egv.hpp"
#include "amc/inv.hpp"
#include "amc/io.hpp"
#include "amc/mvm.hpp"
#include "amc/oracle.hpp"
#include "parallel.hpp"

namespace amc {

void RunConfig::validate() const {
    if (!(r_wire > 0.0)) throw InvalidInput("run config: wire resistance must be positive");
    if (trials < 1) throw InvalidInput("run config: trials must be at least 1");
    if (matrix_file.empty() && n < 2) throw InvalidInput("run config: n must be at least 2");
}

void SweepConfig::validate() const {
    if (sizes.empty() || presets.empty() || circuits.empty())
        throw InvalidInput("sweep config: sizes, presets and circuits must be non-empty");
    for (Eigen::Index n : sizes)
        if (n < 2) throw InvalidInput("sweep config: sizes must be at least 2");
    for (const std::string& label : presets) preset(label);  // throws on unknown labels
    if (trials < 1) throw InvalidInput("sweep config: trials must be at least 1");
}

void BenchConfig::validate() const {
    if (sizes.empty()) throw InvalidInput("bench config: sizes must be non-empty");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 2) throw InvalidInput("bench config: sizes must be at least 2");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw InvalidInput("bench config: sizes must be strictly ascending");
    }
    if (repetitions < 3) throw InvalidInput("bench config: need at least 3 repetitions for a median");
    if (!(r_wire > 0.0)) throw InvalidInput("bench config: wire resistance must be positive");
    if (!(timeout_seconds > 0.0)) throw InvalidInput("bench config: timeout must be positive");
}

namespace {

MatrixSpec generated_spec(Eigen::Index n, MatrixKind kind, std::uint64_t seed) {
    if (kind == MatrixKind::diag_dominant_symmetric) return MatrixSpec::dd_feasible(n, seed);
    MatrixSpec spec;
    spec.n = n;
    spec.kind = kind;
    spec.seed = seed;
    return spec;
}

/// One fully specified problem: the model plus the circuit's stimulus. For
/// egv the stimulus is the feedback conductance (dominant eigenvalue) and
/// the ideal direction is kept alongside.
struct Instance {
    CircuitKind circuit = CircuitKind::inv;
    CrossbarModel model;
    Eigen::VectorXd input;      // b for inv (G x = b), v for mvm; empty for egv
    double g_lambda = 0.0;      // egv only
    Eigen::VectorXd egv_ideal;  // egv only: dominant eigenvector
};

Instance make_instance(CircuitKind circuit, CrossbarModel model, std::uint64_t input_seed) {
    Instance inst{circuit, std::move(model), {}, 0.0, {}};
    switch (circuit) {
        case CircuitKind::inv:
            inst.input = gen_input(inst.model.n(), InputKind::current, input_seed);
            break;
        case CircuitKind::mvm:
            inst.input = gen_input(inst.model.n(), InputKind::voltage, input_seed);
            break;
        case CircuitKind::egv: {
            auto [lambda, u] = dominant_eigenpair(inst.model.g);
            inst.g_lambda = lambda;
            inst.egv_ideal = std::move(u);
            break;
        }
    }
    return inst;
}

struct InstanceSolution {
    Eigen::VectorXd output;       // user-facing solution (x, x_hat, or y)
    Eigen::VectorXd oracle_side;  // circuit read-out matching the oracle probes
    SolveStats stats;
};

InstanceSolution solve_instance(const Instance& inst) {
    switch (inst.circuit) {
        case CircuitKind::inv: {
            CircuitSolution sol = solve_linear_system(inst.model, inst.input);
            return {sol.output, sol.output, sol.stats};
        }
        case CircuitKind::mvm: {
            CircuitSolution sol = solve_mvm(inst.model, inst.input);
            return {sol.output, sol.output, sol.stats};
        }
        case CircuitKind::egv: {
            EgvOptions opt;
            opt.g_lambda = inst.g_lambda;
            EgvSolution sol = solve_egv(inst.model, opt);
            return {sol.x_hat, sol.raw, sol.stats};
        }
    }
    throw Error("unknown circuit kind");
}

double ideal_error(const Instance& inst, const InstanceSolution& sol) {
    switch (inst.circuit) {
        case CircuitKind::inv:
            return re_inv(sol.output, ideal_inv(inst.model.g, inst.input));
        case CircuitKind::mvm:
            return re_inv(sol.output, ideal_mvm(inst.model.g, inst.input));
        case CircuitKind::egv:
            return re_egv(sol.output, inst.egv_ideal);
    }
    throw Error("unknown circuit kind");
}

NodalSystem oracle_system(const Instance& inst) {
    switch (inst.circuit) {
        case CircuitKind::inv:
            // solve_linear_system injects -b, so the netlist gets -b too.
            return build_inv_netlist(inst.model, -inst.input);
        case CircuitKind::mvm:
            return build_mvm_netlist(inst.model, inst.input);
        case CircuitKind::egv:
            return build_egv_unreduced(inst.model, inst.g_lambda, EgvOptions{}.v0);
    }
    throw Error("unknown circuit kind");
}

void fill_timing(BenchRecord* record, const SolveStats& stats) {
    record->assemble_ms = stats.assemble_seconds * 1e3;
    record->factor_ms = stats.factor_seconds * 1e3;
    record->solve_ms = stats.solve_seconds * 1e3;
    record->nnz = stats.nnz;
    const double dim = static_cast<double>(stats.dim);
    record->sparsity = dim > 0 ? 1.0 - static_cast<double>(stats.nnz) / (dim * dim) : 0.0;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m == 0) return 0.0;
    return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

}  // namespace

CrossbarModel make_model(const RunConfig& cfg) {
    cfg.validate();
    if (!cfg.matrix_file.empty())
        return CrossbarModel(read_matrix_csv(cfg.matrix_file), cfg.r_wire);
    return CrossbarModel(gen_matrix(generated_spec(cfg.n, cfg.gen_kind, cfg.seed)), cfg.r_wire);
}

SimulationResult run_simulation(const RunConfig& cfg) {
    CrossbarModel model = make_model(cfg);
    const Instance inst = make_instance(cfg.circuit, std::move(model), mix_seed(cfg.seed, 1));
    const InstanceSolution sol = solve_instance(inst);

    BenchRecord record;
    record.circuit = circuit_name(cfg.circuit);
    record.n = inst.model.n();
    record.r_ohm = cfg.r_wire;
    record.trial = 0;
    record.re_vs_ideal = ideal_error(inst, sol);
    fill_timing(&record, sol.stats);
    if (cfg.with_oracle) {
        const OracleSolution oracle = solve_nodal(oracle_system(inst));
        record.re_vs_oracle = re_inv(sol.oracle_side, oracle.output);
    }
    return {sol.output, record};
}

OracleResult run_oracle(const RunConfig& cfg) {
    CrossbarModel model = make_model(cfg);
    const Instance inst = make_instance(cfg.circuit, std::move(model), mix_seed(cfg.seed, 1));
    const OracleSolution oracle = solve_nodal(oracle_system(inst));
    return {oracle.output, oracle.max_kcl_residual, oracle.current_scale};
}

std::vector<BenchRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<TechNodePreset> nodes;
    nodes.reserve(cfg.presets.size());
    for (const auto& label : cfg.presets) nodes.push_back(preset(label));

    struct Cell {
        CircuitKind circuit;
        Eigen::Index n;
        double r;
        int trial;
    };
    std::vector<Cell> cells;
    for (CircuitKind circuit : cfg.circuits)
        for (Eigen::Index n : cfg.sizes)
            for (const auto& node : nodes)
                for (int trial = 0; trial < cfg.trials; ++trial)
                    cells.push_back({circuit, n, node.r_wire, trial});

    std::vector<BenchRecord> records(cells.size());
    detail::parallel_for_stateful(
        static_cast<int>(cells.size()), [] { return 0; },
        [&](int&, int k) {
            const Cell& cell = cells[static_cast<std::size_t>(k)];
            BenchRecord record;
            record.circuit = circuit_name(cell.circuit);
            record.n = cell.n;
            record.r_ohm = cell.r;
            record.trial = cell.trial;
            try {
                const std::uint64_t row = static_cast<std::uint64_t>(k);
                Eigen::MatrixXd g = gen_matrix(generated_spec(
                    cell.n, MatrixKind::diag_dominant_symmetric, mix_seed(cfg.seed, 2 * row)));
                const Instance inst = make_instance(
                    cell.circuit, CrossbarModel(std::move(g), cell.r), mix_seed(cfg.seed, 2 * row + 1));
                const InstanceSolution sol = solve_instance(inst);
                record.re_vs_ideal = ideal_error(inst, sol);
                fill_timing(&record, sol.stats);
                if (cfg.with_oracle) {
                    const OracleSolution oracle = solve_nodal(oracle_system(inst));
                    record.re_vs_oracle = re_inv(sol.oracle_side, oracle.output);
                }
            } catch (const Error& err) {
                record.failed = true;
                record.note = err.what();
            }
            records[static_cast<std::size_t>(k)] = std::move(record);
        });
    return records;
}

BenchReport run_bench(const BenchConfig& cfg) {
    cfg.validate();
    BenchReport report;
    report.sizes.reserve(cfg.sizes.size());
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        const Eigen::Index n = cfg.sizes[si];
        const std::uint64_t stream = static_cast<std::uint64_t>(si);
        Eigen::MatrixXd g = gen_matrix(generated_spec(
            n, MatrixKind::diag_dominant_symmetric, mix_seed(cfg.seed, 2 * stream)));
        const Instance inst = make_instance(cfg.circuit, CrossbarModel(std::move(g), cfg.r_wire),
                                            mix_seed(cfg.seed, 2 * stream + 1));

        BenchSizePoint point;
        point.n = n;
        std::vector<double> assembles, factors, solves, totals;
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
            const InstanceSolution sol = solve_instance(inst);
            const SolveStats& st = sol.stats;
            const double total =
                (st.assemble_seconds + st.factor_seconds + st.solve_seconds) * 1e3;
            assembles.push_back(st.assemble_seconds * 1e3);
            factors.push_back(st.factor_seconds * 1e3);
            solves.push_back(st.solve_seconds * 1e3);
            totals.push_back(total);
            point.nnz = st.nnz;
            if (rep == 0 && total > cfg.timeout_seconds * 1e3) {
                point.skipped = true;
                point.note = "first repetition exceeded the per-size timeout";
                break;
            }
        }
        point.repetitions = static_cast<int>(totals.size());
        point.assemble_ms = median(assembles);
        point.factor_ms = median(factors);
        point.solve_ms = median(solves);
        point.total_ms = median(totals);
        point.nnz_per_n2 = static_cast<double>(point.nnz) / (static_cast<double>(n) * static_cast<double>(n));
        report.sizes.push_back(std::move(point));
    }

    std::vector<std::pair<double, double>> timed;
    for (const auto& point : report.sizes)
        if (!point.skipped) timed.emplace_back(static_cast<double>(point.n), point.total_ms);
    const std::size_t keep = (timed.size() + 1) / 2;
    std::vector<std::pair<double, double>> top(timed.end() - static_cast<std::ptrdiff_t>(keep),
                                               timed.end());
    report.slope = loglog_slope(top);
    return report;
}

double loglog_slope(const std::vector<std::pair<double, double>>& xy) {
    std::vector<std::pair<double, double>> logs;
    for (const auto& [x, y] : xy)
        if (x > 0.0 && y > 0.0) logs.emplace_back(std::log(x), std::log(y));
    if (logs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [lx, ly] : logs) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double m = static_cast<double>(logs.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / denom;
}

}  // namespace amc

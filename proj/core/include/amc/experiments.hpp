#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "amc/compensation.hpp"
#include "amc/types.hpp"
#include "amc/workload.hpp"

namespace amc {

/// Parameters for one simulation run. The matrix comes either from
/// matrix_file (CSV) or is generated from (n, gen_kind, seed); setting both
/// is rejected. Generated diagonally dominant specs use the feasibility-
/// adjusted conductance floor so any n works.
struct RunConfig {
    CircuitKind circuit = CircuitKind::inv;
    Eigen::Index n = 8;
    std::string matrix_file;
    MatrixKind gen_kind = MatrixKind::diag_dominant_symmetric;
    double r_wire = 1.0;
    int trials = 1;
    std::uint64_t seed = 0;
    bool with_oracle = false;

    void validate() const;
};

/// One solved problem instance. re_vs_oracle is engaged only when the
/// full-netlist oracle ran. Runtime fields cover the algorithm (assembly,
/// factorization, solve), never file I/O.
struct BenchRecord {
    std::string circuit;
    Eigen::Index n = 0;
    double r_ohm = 0.0;
    int trial = 0;
    double re_vs_ideal = 0.0;
    std::optional<double> re_vs_oracle;
    double assemble_ms = 0.0;
    double factor_ms = 0.0;
    double solve_ms = 0.0;
    Eigen::Index nnz = 0;
    double sparsity = 0.0;
    bool failed = false;
    std::string note;
};

/// Builds the crossbar for a run: matrix read from cfg.matrix_file when set,
/// generated from the seed otherwise.
CrossbarModel make_model(const RunConfig& cfg);

struct SimulationResult {
    Eigen::VectorXd output;
    BenchRecord record;
};

/// Solves the configured circuit once (trial 0). Inputs derive from
/// mix_seed(cfg.seed, 1); generated matrices from cfg.seed. re_vs_ideal
/// compares against dense linear algebra; with_oracle additionally solves
/// the full resistor netlist and fills re_vs_oracle.
SimulationResult run_simulation(const RunConfig& cfg);

/// Solves the full netlist oracle for the same instance run_simulation
/// would solve, returning the oracle output and its worst KCL residual
/// relative to the branch-current scale.
struct OracleResult {
    Eigen::VectorXd output;
    double max_kcl_residual = 0.0;
    double current_scale = 0.0;
};
OracleResult run_oracle(const RunConfig& cfg);

struct SweepConfig {
    std::vector<Eigen::Index> sizes = {4, 8, 16, 32, 64};
    std::vector<std::string> presets = {"baseline", "32nm", "22nm", "16nm"};
    std::vector<CircuitKind> circuits = {CircuitKind::inv, CircuitKind::egv, CircuitKind::mvm};
    int trials = 3;
    std::uint64_t seed = 0;
    bool with_oracle = false;

    void validate() const;
};

/// Cross-product sweep: one row per (circuit, size, preset, trial), in that
/// nesting order. Every row draws a fresh diagonally dominant matrix (and
/// input where the circuit takes one) from seeds derived from the row index,
/// so results are deterministic yet rows are independent; cells run on a
/// worker pool. A row that fails to solve is marked failed and the sweep
/// continues.
std::vector<BenchRecord> run_sweep(const SweepConfig& cfg);

struct BenchConfig {
    CircuitKind circuit = CircuitKind::inv;
    std::vector<Eigen::Index> sizes = {128, 256, 512, 1024};
    int repetitions = 3;
    double r_wire = 1.0;
    std::uint64_t seed = 0;
    /// A size whose first repetition exceeds this budget is marked skipped
    /// and excluded from the slope fit.
    double timeout_seconds = 600.0;

    void validate() const;
};

struct BenchSizePoint {
    Eigen::Index n = 0;
    int repetitions = 0;
    double assemble_ms = 0.0;  // medians over repetitions
    double factor_ms = 0.0;
    double solve_ms = 0.0;
    double total_ms = 0.0;
    Eigen::Index nnz = 0;
    double nnz_per_n2 = 0.0;
    bool skipped = false;
    std::string note;
};

struct BenchReport {
    std::vector<BenchSizePoint> sizes;
    /// Least-squares slope of log(total_ms) vs log(n) over the largest half
    /// of the timed (non-skipped) sizes; NaN with fewer than two points.
    double slope = 0.0;
};

/// Runtime-scaling benchmark: per size, the median over cfg.repetitions
/// solves of one generated instance. Runs single-stream so timings stay
/// clean.
BenchReport run_bench(const BenchConfig& cfg);

/// Least-squares slope of log(y) vs log(x). Requires at least two points
/// with positive coordinates; returns NaN otherwise.
double loglog_slope(const std::vector<std::pair<double, double>>& xy);

}  // namespace amc

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amc/types.hpp"

namespace amc {

enum class CircuitKind { inv, egv, mvm };

const char* circuit_name(CircuitKind kind);
CircuitKind circuit_from_name(const std::string& name);

/// Relative Euclidean error ||x - x_ideal|| / ||x_ideal||.
/// Throws InvalidInput when sizes differ or x_ideal is the zero vector.
double re_inv(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ideal);

/// Direction error between eigenvector estimates: both sides are normalized
/// to unit length and sign-aligned (x flipped when dot(x, x_ideal) < 0)
/// before taking the Euclidean distance. Scale-invariant in both arguments.
/// Throws InvalidInput on size mismatch or a zero vector on either side.
double re_egv(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ideal);

/// Relative reduction (baseline - minimum) / baseline.
/// Throws InvalidInput unless baseline > 0.
double delta_re(double baseline, double minimum);

struct BiasSearchConfig {
    /// Step before the first per-round division by 10 (the first round scans
    /// at initial_step / 10).
    double initial_step = 0.02;
    int refinement_rounds = 3;
    int grid_points = 20;
    /// Grid cell whose bias ratio equals the running offset; the first-round
    /// value at this cell is the zero-bias baseline.
    int grid_center_index = 15;
    int trials_per_candidate = 50;
    std::uint64_t seed = 0;

    void validate() const;
};

struct BiasCurvePoint {
    int round = 0;
    double ratio = 0.0;
    double mean_re = 0.0;
    int trials_used = 0;
};

struct BiasSearchResult {
    double optimal_bias_ratio = 0.0;
    double min_re = 0.0;
    double baseline_re = 0.0;
    /// (baseline_re - min_re) / baseline_re.
    double delta_re = 0.0;
    /// Every evaluated candidate, in evaluation order (round-major).
    std::vector<BiasCurvePoint> curve;
};

/// Coarse-to-fine search for the bias ratio minimizing the mean relative
/// error over randomized trials. Each round divides the step by 10, scans
/// grid_points candidates at offset + (i - grid_center_index) * step, and
/// recentres the offset on the best cell; the final offset is the optimum.
/// Trials use common random numbers: trial j always draws from the stream
/// seeded by mix_seed(cfg.seed, j) regardless of the candidate ratio, so the
/// zero-bias cell of the first round is the exact baseline and min_re can
/// never exceed it.
///
/// Trial randomization per circuit:
///  - inv: fresh current vector against the fixed model; ideal output is the
///    dense inverse applied to the unscaled vector; the bias scales the
///    injected vector.
///  - mvm: fresh voltage vector; ideal output is g^T v; the bias scales the
///    applied vector.
///  - egv: fresh diagonally dominant symmetric matrix per trial (the model
///    contributes size and wire resistance only); ideal is its dominant
///    eigenvector; the bias scales the feedback conductance away from the
///    dominant eigenvalue.
///
/// A trial that fails to solve is skipped; a candidate with no surviving
/// trials makes the search throw.
BiasSearchResult search_optimal_bias(CircuitKind circuit, const CrossbarModel& model,
                                     const BiasSearchConfig& cfg);

/// Evaluates the mean relative error at caller-chosen bias ratios using the
/// same trial streams as search_optimal_bias (curve entries carry round = 0).
std::vector<BiasCurvePoint> bias_sweep(CircuitKind circuit, const CrossbarModel& model,
                                       const std::vector<double>& ratios,
                                       const BiasSearchConfig& cfg);

}  // namespace amc

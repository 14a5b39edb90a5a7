#pragma once

#include <utility>

#include "amc/sparse.hpp"
#include "amc/types.hpp"

namespace amc {

/// Largest eigenvalue and the matching unit eigenvector of a symmetric
/// matrix. Throws InvalidInput when the matrix is not symmetric. The vector
/// sign is fixed so that its first component is non-negative.
std::pair<double, Eigen::VectorXd> dominant_eigenpair(const Eigen::MatrixXd& g);

/// KCL residual of the closed-loop eigenvector circuit at row-node voltages
/// `v`. `g_lambda` is the feedback conductance mapping the eigenvalue; `v0`
/// is the external drive voltage replacing the first feedback path. When
/// g_lambda matches an eigenvalue of the cell matrix and wires are ideal,
/// the circuit settles on the matching eigenvector.
Eigen::MatrixXd residual_egv(const CrossbarModel& model, const Eigen::MatrixXd& v,
                             double g_lambda, double v0);

/// Sparse Jacobian of vec(residual_egv) with respect to vec(v).
SparseMat jacobian_egv(const CrossbarModel& model, double g_lambda);

struct EgvOptions {
    double g_lambda = 0.0;  // <= 0 selects the dominant eigenvalue of the cell matrix
    double v0 = 0.1;        // drive voltage [V]
};

struct EgvSolution {
    Eigen::VectorXd x_hat;    // unit-norm eigenvector estimate, first component >= 0
    Eigen::VectorXd raw;      // unnormalized read-out (g1/g_lambda * last state column)
    Eigen::MatrixXd v_field;  // full row-node field
    double g_lambda = 0.0;    // feedback conductance actually used
    double rayleigh_defect = 0.0;  // ||G x_hat - (x_hat' G x_hat) x_hat||_2
    SolveStats stats;
};

/// Solves the eigenvector circuit. The raw read-out is the feedback-drive
/// vector (g1/g_lambda) * V[:, N-1]; x_hat is its normalized, sign-fixed
/// version. Throws SingularSystem when the read-out is identically zero.
EgvSolution solve_egv(const CrossbarModel& model, const EgvOptions& opt = {});

/// Read-out scaling applied to a solved state field.
Eigen::VectorXd egv_readout(const CrossbarModel& model, const Eigen::MatrixXd& state,
                            double g_lambda);

/// Reusable eigenvector-circuit solver. The Jacobian pattern depends only on
/// N, so the symbolic analysis is shared across models and feedback values;
/// only the numeric factorization is redone per solve.
class EgvSolver {
public:
    /// Returns the raw (unnormalized) read-out vector.
    Eigen::VectorXd solve_raw(const CrossbarModel& model, double g_lambda, double v0 = 0.1);

private:
    Factorization fact_;
};

}  // namespace amc

#pragma once

#include "amc/sparse.hpp"
#include "amc/types.hpp"

namespace amc {

/// KCL residual of the open-loop multiply circuit at column-node voltages
/// `u` (u(i, j) is the column-wire node of crossbar column j at row i; the
/// sources drive the rows from column side 0, the transimpedance stages sit
/// past row N-1). Zero residual means u solves the circuit.
Eigen::MatrixXd residual_mvm(const CrossbarModel& model, const Eigen::MatrixXd& u,
                             const Eigen::VectorXd& v_in);

/// Sparse Jacobian of vec(residual_mvm) with respect to vec(u).
SparseMat jacobian_mvm(const CrossbarModel& model);

/// Solves the multiply circuit for input voltages v_in. output(j) =
/// g2 * u(N-1, j), the current into transimpedance stage j, which tends to
/// (G^T v_in)(j) as wire resistance vanishes.
CircuitSolution solve_mvm(const CrossbarModel& model, const Eigen::VectorXd& v_in);

/// Caches the factorized Jacobian of one model for repeated inputs.
class MvmOperator {
public:
    explicit MvmOperator(const CrossbarModel& model);

    const CrossbarModel& model() const { return model_; }
    const SparseMat& jacobian() const { return jac_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v_in) const;

private:
    CrossbarModel model_;
    SparseMat jac_;
    Factorization fact_;
};

}  // namespace amc

#pragma once

#include "amc/sparse.hpp"
#include "amc/types.hpp"

namespace amc {

/// Injected-current field of the inversion circuit: the sources drive the
/// first grid column only, so column 0 carries i_in and the rest is zero.
Eigen::MatrixXd input_injection(const Eigen::VectorXd& i_in);

/// KCL residual of the closed-loop inversion circuit at row-node voltages
/// `theta` (theta(i, j) is the row-wire node of crossbar row i at column j;
/// column N-1 holds the op-amp outputs). `i0` is the injected-current field.
/// Zero residual means theta solves the circuit, and in the vanishing wire
/// resistance limit the last column of theta tends to -G^{-1} i_in.
Eigen::MatrixXd residual_inv(const CrossbarModel& model, const Eigen::MatrixXd& theta,
                             const Eigen::MatrixXd& i0);

/// Sparse Jacobian of vec(residual_inv) with respect to vec(theta). The
/// circuit is linear, so the Jacobian is constant in theta.
SparseMat jacobian_inv(const CrossbarModel& model);

/// Solves the inversion circuit. output = last column of the state (the
/// op-amp output voltages), which tends to -G^{-1} i_in as wire resistance
/// vanishes.
CircuitSolution solve_inv(const CrossbarModel& model, const Eigen::VectorXd& i_in);

/// Solves G x = b on the inversion circuit by injecting i_in = -b, so the
/// output approximates G^{-1} b directly.
CircuitSolution solve_linear_system(const CrossbarModel& model, const Eigen::VectorXd& b);

/// Caches the factorized Jacobian of one model for repeated inputs.
class InvOperator {
public:
    explicit InvOperator(const CrossbarModel& model);

    const CrossbarModel& model() const { return model_; }
    const SparseMat& jacobian() const { return jac_; }

    /// Raw circuit response to injected currents (last column of theta).
    Eigen::VectorXd apply(const Eigen::VectorXd& i_in) const;

    /// Sign-fixed solve of G x = b (injects -b).
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    CrossbarModel model_;
    SparseMat jac_;
    Factorization fact_;
};

}  // namespace amc

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace amc {

using SparseMat = Eigen::SparseMatrix<double>;

/// Row-major flattening of an n x n grid: cell (i, j) -> slot i*n + j.
inline Eigen::Index grid_index(Eigen::Index i, Eigen::Index j, Eigen::Index n) {
    return i * n + j;
}

/// KCL stencil of a resistive chain of n nodes that is open at node 0 and
/// terminated through one extra segment past node n-1. Tridiagonal with
/// off-diagonals -1 and diagonal (1, 2, ..., 2, 2); row sums equal e_{n-1}.
SparseMat chain_laplacian_last(Eigen::Index n);

/// Mirror image of chain_laplacian_last: terminated past node 0, open at
/// node n-1. Diagonal (2, 2, ..., 2, 1); row sums equal e_0.
SparseMat chain_laplacian_first(Eigen::Index n);

/// Diagonal mask keeping all slots but the last: diag(1, ..., 1, 0).
SparseMat mask_drop_last(Eigen::Index n);

/// Diagonal mask keeping all slots but the first: diag(0, 1, ..., 1).
SparseMat mask_drop_first(Eigen::Index n);

/// Diagonal mask keeping only the last slot: diag(0, ..., 0, 1).
SparseMat mask_keep_last(Eigen::Index n);

/// n x n matrix with a single unit entry at (i, j).
SparseMat unit_entry(Eigen::Index n, Eigen::Index i, Eigen::Index j);

/// Stacks the rows of a matrix into one vector (row-major order).
Eigen::VectorXd flatten_rows(const Eigen::MatrixXd& m);

/// Inverse of flatten_rows for a rows x cols matrix.
Eigen::MatrixXd unflatten_rows(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace amc

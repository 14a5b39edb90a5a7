#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "amc/operators.hpp"
#include "amc/types.hpp"

namespace amc {

/// Accumulates (row, col, value) entries; duplicate coordinates sum on build.
class TripletBuffer {
public:
    TripletBuffer(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}

    void reserve(std::size_t n) { entries_.reserve(n); }

    void add(Eigen::Index row, Eigen::Index col, double value) {
        entries_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
    }

    std::size_t size() const { return entries_.size(); }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    /// Compresses into CSC form, summing duplicates.
    SparseMat build() const;

private:
    Eigen::Index rows_;
    Eigen::Index cols_;
    std::vector<Eigen::Triplet<double>> entries_;
};

/// Pattern/size/fill statistics of a sparse matrix.
struct SparsityReport {
    Eigen::Index dim = 0;
    Eigen::Index nnz = 0;
    double density = 0.0;   // nnz / dim^2
    double sparsity = 0.0;  // 1 - density
};

SparsityReport sparsity_report(const SparseMat& m);

/// Infinity norm (max absolute row sum) of a sparse matrix.
double inf_norm(const SparseMat& m);

/// Sparse LU factorization with row/column equilibration.
///
/// The matrix is scaled to A' = R A C (R, C diagonal, infinity-norm
/// equilibration) before factorizing; solves undo the scaling. Equilibration
/// keeps pivots meaningful for the badly scaled systems that arise when the
/// wire conductance dwarfs the cell conductances.
///
/// The symbolic analysis is reused by refactor() for matrices with the same
/// sparsity pattern, which makes repeated solves over a fixed stencil cheap.
class Factorization {
public:
    Factorization();
    ~Factorization();
    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;
    Factorization(const Factorization&) = delete;
    Factorization& operator=(const Factorization&) = delete;

    explicit Factorization(const SparseMat& a);

    /// Analyzes and factorizes. Throws SingularSystem on failure.
    void compute(const SparseMat& a);

    /// Re-factorizes a matrix with the same pattern as the last compute().
    void refactor(const SparseMat& a);

    bool computed() const;
    Eigen::Index dim() const;

    /// Number of stored nonzeros in the L and U factors combined.
    Eigen::Index factor_nnz() const;

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

    /// Solve followed by `steps` rounds of iterative refinement against the
    /// unscaled matrix `a` (one extra correction is enough in practice).
    Eigen::VectorXd solve_refined(const SparseMat& a, const Eigen::VectorXd& b,
                                  int steps = 1) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace amc

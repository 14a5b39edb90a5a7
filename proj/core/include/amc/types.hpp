#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace amc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or out-of-range user input (bad matrix file, bad config, ...).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

/// A linear system that cannot be factorized or solved.
class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

/// Programmed crossbar array together with its interconnect conductances.
///
/// `g(i, j)` is the cell conductance at row i, column j in siemens. Every
/// wire segment between adjacent cells on a row has conductance `g1`, every
/// segment on a column has conductance `g2` (both in siemens).
struct CrossbarModel {
    Eigen::MatrixXd g;
    double g1 = 0.0;
    double g2 = 0.0;

    CrossbarModel() = default;

    /// Builds a model from cell conductances and per-segment wire resistances
    /// in ohms. Throws InvalidInput when a value violates the invariants
    /// (square matrix, N >= 2, strictly positive entries and resistances).
    CrossbarModel(Eigen::MatrixXd cell_conductance, double r_row, double r_col);

    /// Uniform wire resistance on rows and columns.
    CrossbarModel(Eigen::MatrixXd cell_conductance, double r_wire)
        : CrossbarModel(std::move(cell_conductance), r_wire, r_wire) {}

    Eigen::Index n() const { return g.rows(); }

    double r1() const { return 1.0 / g1; }
    double r2() const { return 1.0 / g2; }

    /// Validates the invariants; throws InvalidInput on violation.
    void validate() const;
};

/// Timing/size bookkeeping for one assemble-factor-solve pass.
struct SolveStats {
    double assemble_seconds = 0.0;
    double factor_seconds = 0.0;
    double solve_seconds = 0.0;
    Eigen::Index dim = 0;
    Eigen::Index nnz = 0;
    Eigen::Index factor_nnz = 0;
    int refinement_steps = 0;
    double residual_inf = 0.0;  // infinity norm of the KCL residual at the solution
};

/// Result of one circuit solve: the full grid field plus the read-out vector.
struct CircuitSolution {
    Eigen::MatrixXd state;
    Eigen::VectorXd output;
    SolveStats stats;
};

}  // namespace amc

#include "amc/inv.hpp"

#include <sstream>

#include "newton.hpp"
#include "stamping.hpp"
#include "wallclock.hpp"

namespace amc {

namespace {

void check_dimensions(const CrossbarModel& model, const Eigen::VectorXd& i_in) {
    if (i_in.size() != model.n()) {
        std::ostringstream msg;
        msg << "input current vector has size " << i_in.size() << ", expected " << model.n();
        throw InvalidInput(msg.str());
    }
}

}  // namespace

Eigen::MatrixXd input_injection(const Eigen::VectorXd& i_in) {
    const Eigen::Index n = i_in.size();
    Eigen::MatrixXd i0 = Eigen::MatrixXd::Zero(n, n);
    i0.col(0) = i_in;
    return i0;
}

Eigen::MatrixXd residual_inv(const CrossbarModel& model, const Eigen::MatrixXd& theta,
                             const Eigen::MatrixXd& i0) {
    const Eigen::Index n = model.n();
    if (theta.rows() != n || theta.cols() != n || i0.rows() != n || i0.cols() != n) {
        throw InvalidInput("residual_inv: state and injection must be N x N");
    }
    const SparseMat d = chain_laplacian_last(n);
    const SparseMat b = (mask_drop_last(n) * d).pruned();

    Eigen::MatrixXd theta_b = theta * b;
    Eigen::MatrixXd theta_m1 = theta;
    theta_m1.col(n - 1).setZero();

    // Coupling of the op-amp outputs (last state column) back into the last
    // grid row through the feedback wire.
    Eigen::MatrixXd out_coupling = Eigen::MatrixXd::Zero(n, n);
    out_coupling.row(n - 1) = theta.col(n - 1).transpose();

    Eigen::MatrixXd cell_drop = (model.g1 * theta_b - i0).cwiseQuotient(model.g);
    return i0 / model.g2 + out_coupling - (model.g1 / model.g2) * theta_b - d * theta_m1 -
           d * cell_drop;
}

SparseMat jacobian_inv(const CrossbarModel& model) {
    model.validate();
    const Eigen::Index n = model.n();
    const SparseMat d = chain_laplacian_last(n);
    SparseMat b = (mask_drop_last(n) * d).pruned();
    b.makeCompressed();

    TripletBuffer buf(n * n, n * n);
    buf.reserve(static_cast<std::size_t>(16 * n * n));
    for (Eigen::Index j = 0; j < n; ++j) {
        buf.add((n - 1) * n + j, j * n + (n - 1), 1.0);
    }
    detail::stamp_right(buf, b, -(model.g1 / model.g2), n);
    detail::stamp_left(buf, d, -1.0, n, n - 1);
    detail::stamp_weighted_outer(buf, d, model.g, b, -model.g1, n);
    return buf.build();
}

namespace {

CircuitSolution solve_with(const CrossbarModel& model, const SparseMat& jac,
                           const Factorization& fact, const Eigen::VectorXd& i_in,
                           SolveStats stats) {
    const Eigen::Index n = model.n();
    const Eigen::MatrixXd i0 = input_injection(i_in);
    const Eigen::MatrixXd f0 = residual_inv(model, Eigen::MatrixXd::Zero(n, n), i0);
    const double tol = 1e-9 * std::max(1.0, i0.lpNorm<Eigen::Infinity>() / model.g2);

    auto t0 = detail::WallClock::now();
    auto refined = detail::solve_with_refinement(
        fact, -flatten_rows(f0),
        [&](const Eigen::VectorXd& x) {
            return flatten_rows(residual_inv(model, unflatten_rows(x, n, n), i0));
        },
        tol);
    auto t1 = detail::WallClock::now();

    CircuitSolution sol;
    sol.state = unflatten_rows(refined.x, n, n);
    sol.output = sol.state.col(n - 1);
    sol.stats = stats;
    sol.stats.solve_seconds = detail::seconds_between(t0, t1);
    sol.stats.dim = jac.rows();
    sol.stats.nnz = jac.nonZeros();
    sol.stats.factor_nnz = fact.factor_nnz();
    sol.stats.refinement_steps = refined.steps;
    sol.stats.residual_inf = refined.residual_inf;
    return sol;
}

}  // namespace

CircuitSolution solve_inv(const CrossbarModel& model, const Eigen::VectorXd& i_in) {
    model.validate();
    check_dimensions(model, i_in);

    auto t0 = detail::WallClock::now();
    const SparseMat jac = jacobian_inv(model);
    auto t1 = detail::WallClock::now();
    Factorization fact(jac);
    auto t2 = detail::WallClock::now();

    SolveStats stats;
    stats.assemble_seconds = detail::seconds_between(t0, t1);
    stats.factor_seconds = detail::seconds_between(t1, t2);
    return solve_with(model, jac, fact, i_in, stats);
}

CircuitSolution solve_linear_system(const CrossbarModel& model, const Eigen::VectorXd& b) {
    return solve_inv(model, -b);
}

InvOperator::InvOperator(const CrossbarModel& model) : model_(model) {
    model_.validate();
    jac_ = jacobian_inv(model_);
    fact_.compute(jac_);
}

Eigen::VectorXd InvOperator::apply(const Eigen::VectorXd& i_in) const {
    check_dimensions(model_, i_in);
    return solve_with(model_, jac_, fact_, i_in, SolveStats{}).output;
}

Eigen::VectorXd InvOperator::solve(const Eigen::VectorXd& b) const { return apply(-b); }

}  // namespace amc

#include "amc/mvm.hpp"

#include <sstream>

#include "newton.hpp"
#include "stamping.hpp"
#include "wallclock.hpp"

namespace amc {

namespace {

void check_dimensions(const CrossbarModel& model, const Eigen::VectorXd& v_in) {
    if (v_in.size() != model.n()) {
        std::ostringstream msg;
        msg << "input voltage vector has size " << v_in.size() << ", expected " << model.n();
        throw InvalidInput(msg.str());
    }
}

}  // namespace

Eigen::MatrixXd residual_mvm(const CrossbarModel& model, const Eigen::MatrixXd& u,
                             const Eigen::VectorXd& v_in) {
    const Eigen::Index n = model.n();
    if (u.rows() != n || u.cols() != n) throw InvalidInput("residual_mvm: state must be N x N");
    check_dimensions(model, v_in);

    const SparseMat col_chain = chain_laplacian_last(n);   // column wires end at the TIAs
    const SparseMat row_chain = chain_laplacian_first(n);  // row wires start at the sources

    Eigen::MatrixXd cu = col_chain * u;
    Eigen::MatrixXd f = model.g2 * (cu.cwiseQuotient(model.g) * row_chain) +
                        (model.g2 / model.g1) * cu + u * row_chain;
    f.col(0) -= v_in;  // source drive enters the first row-wire segment
    return f;
}

SparseMat jacobian_mvm(const CrossbarModel& model) {
    model.validate();
    const Eigen::Index n = model.n();
    const SparseMat col_chain = chain_laplacian_last(n);
    const SparseMat row_chain = chain_laplacian_first(n);

    TripletBuffer buf(n * n, n * n);
    buf.reserve(static_cast<std::size_t>(16 * n * n));
    detail::stamp_weighted_inner(buf, col_chain, model.g, row_chain, model.g2, n);
    detail::stamp_left(buf, col_chain, model.g2 / model.g1, n, n);
    detail::stamp_right(buf, row_chain, 1.0, n);
    return buf.build();
}

namespace {

CircuitSolution solve_mvm_with(const CrossbarModel& model, const SparseMat& jac,
                               const Factorization& fact, const Eigen::VectorXd& v_in,
                               SolveStats stats) {
    const Eigen::Index n = model.n();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) rhs(i * n) = v_in(i);
    const double tol = 1e-9 * std::max(1.0, v_in.lpNorm<Eigen::Infinity>());

    auto t0 = detail::WallClock::now();
    auto refined = detail::solve_with_refinement(
        fact, rhs,
        [&](const Eigen::VectorXd& x) {
            return flatten_rows(residual_mvm(model, unflatten_rows(x, n, n), v_in));
        },
        tol);
    auto t1 = detail::WallClock::now();

    CircuitSolution sol;
    sol.state = unflatten_rows(refined.x, n, n);
    sol.output = model.g2 * sol.state.row(n - 1).transpose();
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

CircuitSolution solve_mvm(const CrossbarModel& model, const Eigen::VectorXd& v_in) {
    model.validate();
    check_dimensions(model, v_in);

    auto t0 = detail::WallClock::now();
    const SparseMat jac = jacobian_mvm(model);
    auto t1 = detail::WallClock::now();
    Factorization fact(jac);
    auto t2 = detail::WallClock::now();

    SolveStats stats;
    stats.assemble_seconds = detail::seconds_between(t0, t1);
    stats.factor_seconds = detail::seconds_between(t1, t2);
    return solve_mvm_with(model, jac, fact, v_in, stats);
}

MvmOperator::MvmOperator(const CrossbarModel& model) : model_(model) {
    model_.validate();
    jac_ = jacobian_mvm(model_);
    fact_.compute(jac_);
}

Eigen::VectorXd MvmOperator::apply(const Eigen::VectorXd& v_in) const {
    check_dimensions(model_, v_in);
    return solve_mvm_with(model_, jac_, fact_, v_in, SolveStats{}).output;
}

}  // namespace amc

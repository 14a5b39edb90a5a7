#include "amc/egv.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "newton.hpp"
#include "stamping.hpp"
#include "wallclock.hpp"

namespace amc {

namespace {

void check_egv_args(double g_lambda, double v0) {
    if (!(g_lambda > 0.0)) throw InvalidInput("g_lambda must be strictly positive");
    if (v0 == 0.0) throw InvalidInput("drive voltage v0 must be nonzero");
}

double resolve_g_lambda(const CrossbarModel& model, double g_lambda) {
    if (g_lambda > 0.0) return g_lambda;
    return dominant_eigenpair(model.g).first;
}

}  // namespace

std::pair<double, Eigen::VectorXd> dominant_eigenpair(const Eigen::MatrixXd& g) {
    if (g.rows() != g.cols()) throw InvalidInput("eigenpair requires a square matrix");
    const double scale = g.lpNorm<Eigen::Infinity>();
    if ((g - g.transpose()).lpNorm<Eigen::Infinity>() > 1e-9 * std::max(scale, 1.0)) {
        throw InvalidInput("eigenvector circuit expects a symmetric cell matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) throw SingularSystem("eigendecomposition failed");
    const Eigen::Index last = g.rows() - 1;  // eigenvalues sorted ascending
    Eigen::VectorXd u = es.eigenvectors().col(last);
    if (u(0) < 0.0) u = -u;
    return {es.eigenvalues()(last), u};
}

Eigen::MatrixXd residual_egv(const CrossbarModel& model, const Eigen::MatrixXd& v,
                             double g_lambda, double v0) {
    check_egv_args(g_lambda, v0);
    const Eigen::Index n = model.n();
    if (v.rows() != n || v.cols() != n) throw InvalidInput("residual_egv: state must be N x N");
    const SparseMat d = chain_laplacian_last(n);

    Eigen::MatrixXd vd = v * d;
    Eigen::MatrixXd f =
        model.g1 * (d * vd.cwiseQuotient(model.g)) + (model.g1 / model.g2) * vd + d * v;
    // The feedback inverters drive the columns from the last grid row; the
    // first column's feedback path is cut and driven externally at v0.
    for (Eigen::Index j = 1; j < n; ++j) {
        f(n - 1, j) -= (model.g1 / g_lambda) * v(j, n - 1);
    }
    f(n - 1, 0) -= v0;
    return f;
}

SparseMat jacobian_egv(const CrossbarModel& model, double g_lambda) {
    model.validate();
    if (!(g_lambda > 0.0)) throw InvalidInput("g_lambda must be strictly positive");
    const Eigen::Index n = model.n();
    const SparseMat d = chain_laplacian_last(n);

    TripletBuffer buf(n * n, n * n);
    buf.reserve(static_cast<std::size_t>(16 * n * n));
    detail::stamp_weighted_outer(buf, d, model.g, d, model.g1, n);
    detail::stamp_right(buf, d, model.g1 / model.g2, n);
    detail::stamp_left(buf, d, 1.0, n, n);
    for (Eigen::Index j = 1; j < n; ++j) {
        buf.add((n - 1) * n + j, j * n + (n - 1), -(model.g1 / g_lambda));
    }
    return buf.build();
}

Eigen::VectorXd egv_readout(const CrossbarModel& model, const Eigen::MatrixXd& state,
                            double g_lambda) {
    return (model.g1 / g_lambda) * state.col(state.cols() - 1);
}

namespace {

detail::RefineResult run_egv_solve(const CrossbarModel& model, const Factorization& fact,
                                   double g_lambda, double v0) {
    const Eigen::Index n = model.n();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n * n);
    rhs((n - 1) * n) = v0;  // external drive enters only the corner equation
    const double tol = 1e-9 * std::max(1.0, std::abs(v0));
    return detail::solve_with_refinement(
        fact, rhs,
        [&](const Eigen::VectorXd& x) {
            return flatten_rows(residual_egv(model, unflatten_rows(x, n, n), g_lambda, v0));
        },
        tol);
}

}  // namespace

EgvSolution solve_egv(const CrossbarModel& model, const EgvOptions& opt) {
    model.validate();
    const double g_lambda = resolve_g_lambda(model, opt.g_lambda);
    check_egv_args(g_lambda, opt.v0);
    const Eigen::Index n = model.n();

    auto t0 = detail::WallClock::now();
    const SparseMat jac = jacobian_egv(model, g_lambda);
    auto t1 = detail::WallClock::now();
    Factorization fact(jac);
    auto t2 = detail::WallClock::now();
    auto refined = run_egv_solve(model, fact, g_lambda, opt.v0);
    auto t3 = detail::WallClock::now();

    EgvSolution sol;
    sol.v_field = unflatten_rows(refined.x, n, n);
    sol.raw = egv_readout(model, sol.v_field, g_lambda);
    sol.g_lambda = g_lambda;
    const double raw_norm = sol.raw.norm();
    if (!(raw_norm > 0.0)) throw SingularSystem("eigenvector read-out is identically zero");
    sol.x_hat = sol.raw / raw_norm;
    if (sol.x_hat(0) < 0.0) sol.x_hat = -sol.x_hat;
    const double rayleigh = sol.x_hat.dot(model.g * sol.x_hat);
    sol.rayleigh_defect = (model.g * sol.x_hat - rayleigh * sol.x_hat).norm();

    sol.stats.assemble_seconds = detail::seconds_between(t0, t1);
    sol.stats.factor_seconds = detail::seconds_between(t1, t2);
    sol.stats.solve_seconds = detail::seconds_between(t2, t3);
    sol.stats.dim = jac.rows();
    sol.stats.nnz = jac.nonZeros();
    sol.stats.factor_nnz = fact.factor_nnz();
    sol.stats.refinement_steps = refined.steps;
    sol.stats.residual_inf = refined.residual_inf;
    return sol;
}

Eigen::VectorXd EgvSolver::solve_raw(const CrossbarModel& model, double g_lambda, double v0) {
    model.validate();
    const double gl = resolve_g_lambda(model, g_lambda);
    check_egv_args(gl, v0);
    const SparseMat jac = jacobian_egv(model, gl);
    fact_.refactor(jac);
    auto refined = run_egv_solve(model, fact_, gl, v0);
    return egv_readout(model, unflatten_rows(refined.x, model.n(), model.n()), gl);
}

}  // namespace amc

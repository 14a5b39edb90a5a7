#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "amc/compensation.hpp"
#include "amc/inv.hpp"
#include "amc/operators.hpp"
#include "amc/oracle.hpp"
#include "amc/sparse.hpp"
#include "amc/types.hpp"
#include "amc/workload.hpp"
#include "doctest.h"

using amc::CrossbarModel;
using amc::SparseMat;

namespace {

CrossbarModel random_model(Eigen::Index n, double r, std::uint64_t seed) {
    return CrossbarModel(amc::gen_matrix(amc::MatrixSpec::dd_feasible(n, seed)), r, r);
}

Eigen::VectorXd random_currents(Eigen::Index n, std::uint64_t seed) {
    return amc::gen_input(n, amc::InputKind::current, seed);
}

}  // namespace

TEST_CASE("inversion residual at zero state matches the injected-current stamp") {
    const Eigen::Index n = 4;
    const CrossbarModel model = random_model(n, 2.0, 11);
    const Eigen::VectorXd i_in = random_currents(n, 12);
    const Eigen::MatrixXd i0 = amc::input_injection(i_in);

    CHECK(i0.col(0) == i_in);
    CHECK(i0.rightCols(n - 1).isZero(0.0));

    const Eigen::MatrixXd f0 = amc::residual_inv(model, Eigen::MatrixXd::Zero(n, n), i0);
    const Eigen::MatrixXd d = Eigen::MatrixXd(amc::chain_laplacian_last(n));
    const Eigen::MatrixXd expected = i0 / model.g2 + d * i0.cwiseQuotient(model.g);
    CHECK((f0 - expected).lpNorm<Eigen::Infinity>() <= 1e-15);

    // No injection, no drive: the zero state solves the circuit exactly.
    const Eigen::MatrixXd quiet =
        amc::residual_inv(model, Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n));
    CHECK(quiet.isZero(0.0));
}

TEST_CASE("inversion jacobian matches the residual's linear part") {
    const Eigen::Index n = 4;
    const CrossbarModel model(Eigen::MatrixXd::Constant(n, n, 1.0), 1.0, 1.0);
    const SparseMat jac = amc::jacobian_inv(model);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
    const Eigen::VectorXd f0 = amc::flatten_rows(amc::residual_inv(model, zero, zero));
    CHECK(f0.isZero(0.0));

    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd theta(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) theta(i, j) = dist(rng);
        const Eigen::VectorXd lhs = amc::flatten_rows(amc::residual_inv(model, theta, zero));
        const Eigen::VectorXd rhs = jac * amc::flatten_rows(theta);
        const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
    }
}

TEST_CASE("inversion residual is affine in the state") {
    const Eigen::Index n = 5;
    const CrossbarModel model = random_model(n, 4.53, 21);
    const Eigen::MatrixXd i0 = amc::input_injection(random_currents(n, 22));
    std::mt19937_64 rng(23);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd a(n, n), b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = dist(rng);
            b(i, j) = dist(rng);
        }
    const Eigen::MatrixXd f0 = amc::residual_inv(model, Eigen::MatrixXd::Zero(n, n), i0);
    const Eigen::MatrixXd sum = amc::residual_inv(model, a + b, i0);
    const Eigen::MatrixXd parts =
        amc::residual_inv(model, a, i0) + amc::residual_inv(model, b, i0) - f0;
    CHECK((sum - parts).lpNorm<Eigen::Infinity>() <=
          1e-12 * std::max(1.0, sum.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("inversion jacobian stays within the structural sparsity budget") {
    for (const Eigen::Index n : {8, 32, 64}) {
        const CrossbarModel model = random_model(n, 1.0, 31 + std::uint64_t(n));
        const SparseMat jac = amc::jacobian_inv(model);
        CHECK(jac.rows() == n * n);
        CHECK(jac.nonZeros() <= 10 * n * n);
        const auto rep = amc::sparsity_report(jac);
        if (n >= 64) CHECK(rep.sparsity > 0.99);
    }
}

TEST_CASE("near-zero wire resistance recovers the ideal inverse solve") {
    for (const Eigen::Index n : {4, 8, 16}) {
        const CrossbarModel model = random_model(n, 1e-6, 41 + std::uint64_t(n));
        const Eigen::VectorXd b = random_currents(n, 42 + std::uint64_t(n));
        const auto sol = amc::solve_linear_system(model, b);
        const Eigen::VectorXd ideal = amc::ideal_inv(model.g, b);
        CHECK(amc::re_inv(sol.output, ideal) <= 1e-4);
        CHECK(std::isfinite(sol.stats.residual_inf));
        CHECK(sol.stats.refinement_steps <= 2);
    }
}

TEST_CASE("solver output matches the full-netlist oracle at realistic wire resistance") {
    for (const Eigen::Index n : {2, 4}) {
        const CrossbarModel model = random_model(n, 1.0, 51 + std::uint64_t(n));
        const Eigen::VectorXd i_in = random_currents(n, 52 + std::uint64_t(n));
        const auto sol = amc::solve_inv(model, i_in);
        const auto oracle = amc::solve_nodal(amc::build_inv_netlist(model, i_in));
        CHECK(amc::re_inv(sol.output, oracle.output) <= 1e-8);
        CHECK(oracle.max_kcl_residual <= 1e-10 * std::max(oracle.current_scale, 1e-30));
    }
}

TEST_CASE("reused factorization is homogeneous and superposes") {
    const Eigen::Index n = 8;
    const CrossbarModel model = random_model(n, 2.97, 61);
    const amc::InvOperator op(model);
    const Eigen::VectorXd a = random_currents(n, 62);
    const Eigen::VectorXd b = random_currents(n, 63);

    // Power-of-two input scaling passes through the linear solve exactly.
    const Eigen::VectorXd base = op.apply(a);
    CHECK(op.apply(2.0 * a) == 2.0 * base);

    const Eigen::VectorXd joint = op.apply(a + b);
    const Eigen::VectorXd split = op.apply(a) + op.apply(b);
    CHECK((joint - split).lpNorm<Eigen::Infinity>() <=
          1e-10 * std::max(1.0, joint.lpNorm<Eigen::Infinity>()));

    // solve() targets G x = b, so it equals apply on the negated injection.
    CHECK(op.solve(b) == op.apply(-b));
}

TEST_CASE("one factorization serves many input vectors") {
    const Eigen::Index n = 6;
    const CrossbarModel model = random_model(n, 1.55, 71);
    const amc::InvOperator op(model);
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd i_in = random_currents(n, 72 + std::uint64_t(k));
        const Eigen::VectorXd once = amc::solve_inv(model, i_in).output;
        CHECK((op.apply(i_in) - once).lpNorm<Eigen::Infinity>() <=
              1e-12 * std::max(1.0, once.lpNorm<Eigen::Infinity>()));
    }
}

TEST_CASE("conductance error grows with wire resistance") {
    const Eigen::Index n = 8;
    const int seeds = 10;
    std::vector<double> mean_re;
    for (const auto& node : amc::all_presets()) {
        double acc = 0.0;
        for (int s = 0; s < seeds; ++s) {
            const CrossbarModel model = random_model(n, node.r_wire, 81 + std::uint64_t(s));
            const Eigen::VectorXd b = random_currents(n, 181 + std::uint64_t(s));
            acc += amc::re_inv(amc::solve_linear_system(model, b).output,
                               amc::ideal_inv(model.g, b));
        }
        mean_re.push_back(acc / seeds);
    }
    REQUIRE(mean_re.size() == 4);
    for (std::size_t k = 1; k < mean_re.size(); ++k) CHECK(mean_re[k] > mean_re[k - 1]);
    CHECK(mean_re.front() > 0.0);
}

TEST_CASE("inversion rejects malformed inputs") {
    const CrossbarModel model = random_model(4, 1.0, 91);
    CHECK_THROWS_AS(amc::solve_inv(model, Eigen::VectorXd::Zero(3)), amc::InvalidInput);
    CHECK_THROWS_AS(
        amc::residual_inv(model, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(4, 4)),
        amc::InvalidInput);
    CHECK_THROWS_AS(CrossbarModel(Eigen::MatrixXd::Constant(4, 4, 1e-5), 0.0, 1.0),
                    amc::InvalidInput);
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(4, 4, 1e-5);
    g(2, 2) = -1e-5;
    CHECK_THROWS_AS(CrossbarModel(g, 1.0, 1.0), amc::InvalidInput);
}

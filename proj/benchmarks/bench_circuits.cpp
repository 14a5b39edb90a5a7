// Microbenchmarks for the hot paths: Jacobian assembly, factorization, and
// repeated solves for each circuit, plus the full-netlist oracle for scale.

#include <benchmark/benchmark.h>

#include "amc/egv.hpp"
#include "amc/inv.hpp"
#include "amc/mvm.hpp"
#include "amc/oracle.hpp"
#include "amc/sparse.hpp"
#include "amc/workload.hpp"

namespace {

amc::CrossbarModel make_model(Eigen::Index n, std::uint64_t seed = 7) {
    return amc::CrossbarModel(amc::gen_matrix(amc::MatrixSpec::dd_feasible(n, seed)), 1.0);
}

void BM_AssembleInv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(amc::jacobian_inv(model));
}
BENCHMARK(BM_AssembleInv)->Arg(32)->Arg(64)->Arg(128);

void BM_AssembleEgv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const double g_lambda = amc::dominant_eigenpair(model.g).first;
    for (auto _ : state) benchmark::DoNotOptimize(amc::jacobian_egv(model, g_lambda));
}
BENCHMARK(BM_AssembleEgv)->Arg(32)->Arg(64)->Arg(128);

void BM_AssembleMvm(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(amc::jacobian_mvm(model));
}
BENCHMARK(BM_AssembleMvm)->Arg(32)->Arg(64)->Arg(128);

void BM_FactorInv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const amc::SparseMat jac = amc::jacobian_inv(model);
    for (auto _ : state) {
        amc::Factorization fact;
        fact.compute(jac);
        benchmark::DoNotOptimize(fact.factor_nnz());
    }
}
BENCHMARK(BM_FactorInv)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveInv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const amc::InvOperator op(model);
    const Eigen::VectorXd b = amc::gen_input(model.n(), amc::InputKind::current, 11);
    for (auto _ : state) benchmark::DoNotOptimize(op.solve(b));
}
BENCHMARK(BM_SolveInv)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveMvm(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const amc::MvmOperator op(model);
    const Eigen::VectorXd v = amc::gen_input(model.n(), amc::InputKind::voltage, 11);
    for (auto _ : state) benchmark::DoNotOptimize(op.apply(v));
}
BENCHMARK(BM_SolveMvm)->Arg(32)->Arg(64)->Arg(128);

void BM_SolveEgv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const double g_lambda = amc::dominant_eigenpair(model.g).first;
    amc::EgvSolver solver;
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve_raw(model, g_lambda));
}
BENCHMARK(BM_SolveEgv)->Arg(32)->Arg(64);

void BM_OracleInv(benchmark::State& state) {
    const amc::CrossbarModel model = make_model(state.range(0));
    const Eigen::VectorXd b = amc::gen_input(model.n(), amc::InputKind::current, 11);
    const amc::NodalSystem system = amc::build_inv_netlist(model, -b);
    for (auto _ : state) benchmark::DoNotOptimize(amc::solve_nodal(system));
}
BENCHMARK(BM_OracleInv)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

// Acceptance gate: every numbered criterion prints exactly one PASS/FAIL
// line with the measured quantity next to its bound. Run all criteria or a
// subset via --only N [M ...]; the exit status is 0 only when every selected
// criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amc/compensation.hpp"
#include "amc/egv.hpp"
#include "amc/experiments.hpp"
#include "amc/inv.hpp"
#include "amc/mvm.hpp"
#include "amc/operators.hpp"
#include "amc/oracle.hpp"
#include "amc/sparse.hpp"
#include "amc/types.hpp"
#include "amc/workload.hpp"

namespace {

using amc::CircuitKind;
using amc::CrossbarModel;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

CrossbarModel dd_model(Eigen::Index n, double r, std::uint64_t seed) {
    return CrossbarModel(amc::gen_matrix(amc::MatrixSpec::dd_feasible(n, seed)), r, r);
}

std::uint64_t cell_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return amc::mix_seed(amc::mix_seed(a, b), c);
}

// --- criterion 1 & 2: fast solver vs full-netlist oracle ------------------

Outcome oracle_equivalence(CircuitKind circuit) {
    const std::vector<Eigen::Index> sizes = {2, 4, 8, 16, 32};
    const std::vector<double> wires = {1.0, 4.53};
    const int seeds = 10;
    const double start = now_seconds();

    double worst = 0.0;
    for (const Eigen::Index n : sizes) {
        for (const double r : wires) {
            for (int s = 0; s < seeds; ++s) {
                const CrossbarModel model = dd_model(n, r, cell_seed(1, std::uint64_t(n), s));
                double re = 0.0;
                if (circuit == CircuitKind::inv) {
                    const Eigen::VectorXd i_in = amc::gen_input(
                        n, amc::InputKind::current, cell_seed(2, std::uint64_t(n), s));
                    const auto sol = amc::solve_inv(model, i_in);
                    const auto oracle = amc::solve_nodal(amc::build_inv_netlist(model, i_in));
                    re = amc::re_inv(sol.output, oracle.output);
                } else {
                    const Eigen::VectorXd v_in = amc::gen_input(
                        n, amc::InputKind::voltage, cell_seed(3, std::uint64_t(n), s));
                    const auto sol = amc::solve_mvm(model, v_in);
                    const auto oracle = amc::solve_nodal(amc::build_mvm_netlist(model, v_in));
                    re = amc::re_inv(sol.output, oracle.output);
                }
                worst = std::max(worst, re);
            }
        }
    }
    const double elapsed = now_seconds() - start;

    Outcome out;
    out.pass = worst <= 1e-8 && elapsed < 120.0;
    std::ostringstream msg;
    msg << "max RE vs oracle = " << worst << " (bound 1e-8) over N in {2..32}, r in {1,4.53}, "
        << seeds << " seeds; " << elapsed << " s (bound 120)";
    out.detail = msg.str();
    return out;
}

// --- criterion 3: eigenvector anchor ---------------------------------------

Outcome egv_anchor() {
    const std::vector<Eigen::Index> sizes = {4, 8, 16};
    const int seeds = 10;
    double worst_ideal = 0.0;
    double worst_oracle = 0.0;
    for (const Eigen::Index n : sizes) {
        for (int s = 0; s < seeds; ++s) {
            {
                const CrossbarModel model = dd_model(n, 1e-6, cell_seed(4, std::uint64_t(n), s));
                const auto [lambda, ideal] = amc::dominant_eigenpair(model.g);
                amc::EgvOptions opt;
                opt.g_lambda = lambda;
                const auto sol = amc::solve_egv(model, opt);
                worst_ideal = std::max(worst_ideal, amc::re_egv(sol.x_hat, ideal));
            }
            {
                const CrossbarModel model = dd_model(n, 1.0, cell_seed(5, std::uint64_t(n), s));
                const double lambda = amc::dominant_eigenpair(model.g).first;
                amc::EgvOptions opt;
                opt.g_lambda = lambda;
                const auto sol = amc::solve_egv(model, opt);
                const auto oracle =
                    amc::solve_nodal(amc::build_egv_unreduced(model, lambda, opt.v0));
                worst_oracle = std::max(worst_oracle, amc::re_inv(sol.raw, oracle.output));
            }
        }
    }
    Outcome out;
    out.pass = worst_ideal <= 1e-4 && worst_oracle <= 1e-8;
    std::ostringstream msg;
    msg << "max RE_egv vs dense eigenvector at r=1e-6: " << worst_ideal
        << " (bound 1e-4); max RE vs unreduced oracle at r=1: " << worst_oracle
        << " (bound 1e-8); N in {4,8,16}, " << seeds << " seeds";
    out.detail = msg.str();
    return out;
}

// --- criterion 4: zero-wire inversion --------------------------------------

Outcome inv_zero_wire() {
    const std::vector<Eigen::Index> sizes = {4, 8, 16, 32, 64};
    const int seeds = 10;
    double worst = 0.0;
    for (const Eigen::Index n : sizes) {
        for (int s = 0; s < seeds; ++s) {
            const CrossbarModel model = dd_model(n, 1e-6, cell_seed(6, std::uint64_t(n), s));
            const Eigen::VectorXd b =
                amc::gen_input(n, amc::InputKind::current, cell_seed(7, std::uint64_t(n), s));
            const auto sol = amc::solve_linear_system(model, b);
            worst = std::max(worst, amc::re_inv(sol.output, amc::ideal_inv(model.g, b)));
        }
    }
    Outcome out;
    out.pass = worst <= 1e-4;
    std::ostringstream msg;
    msg << "max RE vs dense inverse = " << worst
        << " (bound 1e-4) at r=1e-6, N in {4..64}, " << seeds << " seeds";
    out.detail = msg.str();
    return out;
}

// --- criterion 5: sparsity budget -------------------------------------------

Outcome sparsity_budget() {
    const std::vector<Eigen::Index> sizes = {32, 64, 128};
    bool pass = true;
    double worst_ratio = 0.0;  // nnz / N^2
    double worst_sparsity = 1.0;
    for (const Eigen::Index n : sizes) {
        const CrossbarModel model = dd_model(n, 1.0, cell_seed(8, std::uint64_t(n), 0));
        const double lambda = amc::dominant_eigenpair(model.g).first;
        const amc::SparseMat jacs[3] = {amc::jacobian_inv(model),
                                        amc::jacobian_egv(model, lambda),
                                        amc::jacobian_mvm(model)};
        for (const auto& jac : jacs) {
            const auto rep = amc::sparsity_report(jac);
            const double ratio = double(rep.nnz) / (double(n) * double(n));
            worst_ratio = std::max(worst_ratio, ratio);
            worst_sparsity = std::min(worst_sparsity, rep.sparsity);
            if (rep.nnz > 10 * n * n || rep.sparsity <= 0.99) pass = false;
        }
    }
    Outcome out;
    out.pass = pass;
    std::ostringstream msg;
    msg << "max nnz/N^2 = " << worst_ratio << " (bound 10), min sparsity = " << worst_sparsity
        << " (bound > 0.99) over all circuits, N in {32,64,128}";
    out.detail = msg.str();
    return out;
}

// --- criterion 6: residual/Jacobian linearity identity ----------------------

Outcome linearity_identity() {
    const std::vector<Eigen::Index> sizes = {4, 8};
    double worst = 0.0;
    std::mt19937_64 rng(9001);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (const Eigen::Index n : sizes) {
        const CrossbarModel model = dd_model(n, 1.0, cell_seed(9, std::uint64_t(n), 0));
        const double lambda = amc::dominant_eigenpair(model.g).first;
        const Eigen::MatrixXd i0 = amc::input_injection(
            amc::gen_input(n, amc::InputKind::current, cell_seed(10, std::uint64_t(n), 0)));
        const Eigen::VectorXd v_in =
            amc::gen_input(n, amc::InputKind::voltage, cell_seed(11, std::uint64_t(n), 0));
        const double v0 = 0.1;

        const amc::SparseMat j_inv = amc::jacobian_inv(model);
        const amc::SparseMat j_egv = amc::jacobian_egv(model, lambda);
        const amc::SparseMat j_mvm = amc::jacobian_mvm(model);
        const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
        const Eigen::VectorXd f0_inv = amc::flatten_rows(amc::residual_inv(model, zero, i0));
        const Eigen::VectorXd f0_egv =
            amc::flatten_rows(amc::residual_egv(model, zero, lambda, v0));
        const Eigen::VectorXd f0_mvm = amc::flatten_rows(amc::residual_mvm(model, zero, v_in));

        for (int t = 0; t < 20; ++t) {
            Eigen::MatrixXd theta(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) theta(i, j) = dist(rng);
            const Eigen::VectorXd v = amc::flatten_rows(theta);

            const Eigen::VectorXd li =
                amc::flatten_rows(amc::residual_inv(model, theta, i0)) - f0_inv;
            const Eigen::VectorXd le =
                amc::flatten_rows(amc::residual_egv(model, theta, lambda, v0)) - f0_egv;
            const Eigen::VectorXd lm =
                amc::flatten_rows(amc::residual_mvm(model, theta, v_in)) - f0_mvm;
            worst = std::max(worst, (li - j_inv * v).norm() / (j_inv * v).norm());
            worst = std::max(worst, (le - j_egv * v).norm() / (j_egv * v).norm());
            worst = std::max(worst, (lm - j_mvm * v).norm() / (j_mvm * v).norm());
        }
    }
    Outcome out;
    out.pass = worst <= 1e-12;
    std::ostringstream msg;
    msg << "max ||vec(F(x)-F(0)) - J vec(x)|| / ||J vec(x)|| = " << worst
        << " (bound 1e-12) over all circuits, N in {4,8}, 20 states";
    out.detail = msg.str();
    return out;
}

// --- criterion 7: runtime scaling -------------------------------------------

Outcome runtime_scaling() {
    amc::BenchConfig cfg;
    cfg.circuit = CircuitKind::inv;
    cfg.sizes = {128, 256, 512, 1024};
    cfg.repetitions = 3;
    cfg.r_wire = 1.0;
    cfg.seed = 12;
    cfg.timeout_seconds = 600.0;
    const auto report = amc::run_bench(cfg);

    bool completed = report.sizes.size() == cfg.sizes.size();
    double total_1024 = -1.0;
    for (const auto& point : report.sizes) {
        if (point.skipped) completed = false;
        if (point.n == 1024) total_1024 = point.total_ms;
    }
    const bool slope_ok =
        std::isfinite(report.slope) && report.slope >= 2.0 && report.slope <= 3.5;
    Outcome out;
    out.pass = completed && total_1024 >= 0.0 && total_1024 <= 60000.0 && slope_ok;
    std::ostringstream msg;
    msg << "N=1024 median assemble+factor+solve = " << total_1024 / 1000.0
        << " s (bound 60); log-log slope = " << report.slope
        << " (bound [2.0, 3.5]); sizes completed = " << (completed ? "yes" : "no");
    out.detail = msg.str();
    return out;
}

// --- criteria 8 & 9: compensation improvement -------------------------------

struct SearchStats {
    double mean_delta = 0.0;
    double mean_ratio = 0.0;
    int at_target = 0;  // seeds with delta >= target
    int seeds = 0;
};

SearchStats run_searches(CircuitKind circuit, Eigen::Index n, double r, int seeds,
                         double target, std::uint64_t salt) {
    SearchStats st;
    st.seeds = seeds;
    for (int s = 0; s < seeds; ++s) {
        const CrossbarModel model = dd_model(n, r, cell_seed(salt, std::uint64_t(n), s));
        amc::BiasSearchConfig cfg;
        cfg.seed = cell_seed(salt + 1, std::uint64_t(n), s);
        const auto result = amc::search_optimal_bias(circuit, model, cfg);
        st.mean_delta += result.delta_re;
        st.mean_ratio += result.optimal_bias_ratio;
        if (result.delta_re >= target) ++st.at_target;
    }
    st.mean_delta /= seeds;
    st.mean_ratio /= seeds;
    return st;
}

Outcome compensation_gain(CircuitKind circuit, double target, double slack_mean) {
    const std::vector<Eigen::Index> sizes = {16, 32, 64};
    const int seeds = 10;
    bool pass = true;
    std::ostringstream msg;
    msg << "r=4.53, " << seeds << " seeds/size:";
    for (const Eigen::Index n : sizes) {
        const auto st = run_searches(circuit, n, 4.53, seeds, target, 13);
        const bool delta_ok =
            st.mean_delta >= target || (st.mean_delta >= slack_mean && 2 * st.at_target >= seeds);
        const bool ratio_ok = st.mean_ratio < 0.0;
        if (!(delta_ok && ratio_ok)) pass = false;
        msg << " [N=" << n << " mean dRE=" << st.mean_delta << " >=target " << st.at_target << "/"
            << seeds << " mean ratio=" << st.mean_ratio << "]";
    }
    msg << " (target " << target << ", slack mean " << slack_mean << ", ratio < 0)";
    Outcome out;
    out.pass = pass;
    out.detail = msg.str();
    return out;
}

// --- criterion 10: bias magnitude trend --------------------------------------

Outcome bias_trend() {
    const int seeds = 10;
    bool pass = true;
    std::ostringstream msg;

    for (const CircuitKind circuit : {CircuitKind::inv, CircuitKind::egv}) {
        msg << " [" << amc::circuit_name(circuit) << ":";
        std::vector<double> by_n;
        for (const Eigen::Index n : {Eigen::Index(8), Eigen::Index(16), Eigen::Index(32),
                                     Eigen::Index(64)}) {
            double acc = 0.0;
            for (int s = 0; s < seeds; ++s) {
                const CrossbarModel model = dd_model(n, 4.53, cell_seed(14, std::uint64_t(n), s));
                amc::BiasSearchConfig cfg;
                cfg.seed = cell_seed(15, std::uint64_t(n), s);
                acc += std::abs(
                    amc::search_optimal_bias(circuit, model, cfg).optimal_bias_ratio);
            }
            by_n.push_back(acc / seeds);
        }
        msg << " |ratio| vs N:";
        for (const double v : by_n) msg << " " << v;
        for (std::size_t k = 1; k < by_n.size(); ++k)
            if (by_n[k] < by_n[k - 1]) pass = false;

        std::vector<double> by_r;
        for (const double r : {1.55, 2.97, 4.53}) {
            double acc = 0.0;
            for (int s = 0; s < seeds; ++s) {
                const CrossbarModel model = dd_model(32, r, cell_seed(16, std::uint64_t(r * 100), s));
                amc::BiasSearchConfig cfg;
                cfg.seed = cell_seed(17, std::uint64_t(r * 100), s);
                acc += std::abs(
                    amc::search_optimal_bias(circuit, model, cfg).optimal_bias_ratio);
            }
            by_r.push_back(acc / seeds);
        }
        msg << "; |ratio| vs r:";
        for (const double v : by_r) msg << " " << v;
        for (std::size_t k = 1; k < by_r.size(); ++k)
            if (by_r[k] < by_r[k - 1]) pass = false;
        msg << "]";
    }

    Outcome out;
    out.pass = pass;
    out.detail = "mean |optimal ratio| non-decreasing in N {8..64} and r {1.55,2.97,4.53}:" +
                 msg.str();
    return out;
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only") continue;
        try {
            only.push_back(std::stoi(arg));
        } catch (const std::exception&) {
            std::cerr << "usage: " << argv[0] << " [--only N ...]\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence, inversion",
         [] { return oracle_equivalence(CircuitKind::inv); }},
        {2, "oracle equivalence, multiplication",
         [] { return oracle_equivalence(CircuitKind::mvm); }},
        {3, "eigenvector semantic anchor", egv_anchor},
        {4, "zero-wire inversion limit", inv_zero_wire},
        {5, "jacobian sparsity budget", sparsity_budget},
        {6, "residual/jacobian linearity identity", linearity_identity},
        {7, "runtime scaling", runtime_scaling},
        {8, "bias compensation, inversion",
         [] { return compensation_gain(CircuitKind::inv, 0.50, 0.45); }},
        {9, "bias compensation, eigenvector",
         [] { return compensation_gain(CircuitKind::egv, 0.70, 0.65); }},
        {10, "bias magnitude trend", bias_trend},
    };

    int failures = 0;
    int ran = 0;
    for (const auto& criterion : criteria) {
        if (!only.empty() &&
            std::find(only.begin(), only.end(), criterion.id) == only.end()) {
            continue;
        }
        ++ran;
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << criterion.id << " ("
                  << criterion.name << "): " << outcome.detail << std::endl;
        if (!outcome.pass) ++failures;
    }
    if (ran == 0) {
        std::cerr << "no criteria selected\n";
        return 2;
    }
    return failures == 0 ? 0 : 1;
}

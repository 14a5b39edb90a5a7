#include "amc/compensation.hpp"

#include <algorithm>
#include <cstddef>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "amc/egv.hpp"
#include "amc/inv.hpp"
#include "amc/mvm.hpp"
#include "amc/workload.hpp"
#include "parallel.hpp"

namespace amc {

const char* circuit_name(CircuitKind kind) {
    switch (kind) {
        case CircuitKind::inv: return "inv";
        case CircuitKind::egv: return "egv";
        case CircuitKind::mvm: return "mvm";
    }
    return "unknown";
}

CircuitKind circuit_from_name(const std::string& name) {
    if (name == "inv") return CircuitKind::inv;
    if (name == "egv") return CircuitKind::egv;
    if (name == "mvm") return CircuitKind::mvm;
    throw InvalidInput("unknown circuit '" + name + "' (expected inv, egv, or mvm)");
}

double re_inv(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ideal) {
    if (x.size() != x_ideal.size()) throw InvalidInput("relative error: size mismatch");
    const double scale = x_ideal.norm();
    if (scale == 0.0) throw InvalidInput("relative error: ideal vector is zero");
    return (x - x_ideal).norm() / scale;
}

double re_egv(const Eigen::VectorXd& x, const Eigen::VectorXd& x_ideal) {
    if (x.size() != x_ideal.size()) throw InvalidInput("eigenvector error: size mismatch");
    const double nx = x.norm();
    const double ni = x_ideal.norm();
    if (nx == 0.0 || ni == 0.0) throw InvalidInput("eigenvector error: zero vector");
    Eigen::VectorXd a = x / nx;
    const Eigen::VectorXd b = x_ideal / ni;
    if (a.dot(b) < 0.0) a = -a;
    return (a - b).norm();
}

double delta_re(double baseline, double minimum) {
    if (!(baseline > 0.0)) throw InvalidInput("relative reduction: baseline must be positive");
    return (baseline - minimum) / baseline;
}

void BiasSearchConfig::validate() const {
    if (!(initial_step > 0.0)) throw InvalidInput("bias search: step must be positive");
    if (refinement_rounds <= 0 || grid_points <= 0 || trials_per_candidate <= 0)
        throw InvalidInput("bias search: rounds, grid points and trials must be positive");
    if (grid_center_index < 0 || grid_center_index >= grid_points)
        throw InvalidInput("bias search: grid centre index outside the grid");
}

namespace {

/// Immutable per-trial draws shared by every candidate (common random
/// numbers): trial j is derived from mix_seed(cfg.seed, j) only, never from
/// the bias ratio. inv/mvm fill inputs+ideals; egv fills matrices, dominant
/// eigenvalues, and the eigenvectors as ideals.
struct TrialData {
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> ideals;
    std::vector<Eigen::MatrixXd> matrices;
    std::vector<double> lambdas;
};

TrialData build_trial_data(CircuitKind circuit, const CrossbarModel& model,
                           const BiasSearchConfig& cfg) {
    const Eigen::Index n = model.n();
    const int trials = cfg.trials_per_candidate;
    TrialData data;
    data.ideals.reserve(static_cast<std::size_t>(trials));
    switch (circuit) {
        case CircuitKind::inv: {
            Eigen::FullPivLU<Eigen::MatrixXd> lu(model.g);
            if (!lu.isInvertible())
                throw SingularSystem("bias search: cell matrix is not invertible");
            data.inputs.reserve(static_cast<std::size_t>(trials));
            for (int j = 0; j < trials; ++j) {
                data.inputs.push_back(
                    gen_input(n, InputKind::current, mix_seed(cfg.seed, static_cast<std::uint64_t>(j))));
                data.ideals.push_back(lu.solve(data.inputs.back()));
            }
            break;
        }
        case CircuitKind::mvm: {
            data.inputs.reserve(static_cast<std::size_t>(trials));
            for (int j = 0; j < trials; ++j) {
                data.inputs.push_back(
                    gen_input(n, InputKind::voltage, mix_seed(cfg.seed, static_cast<std::uint64_t>(j))));
                data.ideals.push_back(model.g.transpose() * data.inputs.back());
            }
            break;
        }
        case CircuitKind::egv: {
            data.matrices.reserve(static_cast<std::size_t>(trials));
            data.lambdas.reserve(static_cast<std::size_t>(trials));
            for (int j = 0; j < trials; ++j) {
                const MatrixSpec spec =
                    MatrixSpec::dd_feasible(n, mix_seed(cfg.seed, static_cast<std::uint64_t>(j)));
                data.matrices.push_back(gen_matrix(spec));
                auto [lambda, u] = dominant_eigenpair(data.matrices.back());
                data.lambdas.push_back(lambda);
                data.ideals.push_back(std::move(u));
            }
            break;
        }
    }
    return data;
}

/// Per-worker solver state: inv/mvm keep one factorized operator for the
/// whole search; egv refactors per trial (the cell matrix changes) but
/// shares the symbolic analysis through EgvSolver.
class CandidateEvaluator {
public:
    CandidateEvaluator(CircuitKind circuit, const CrossbarModel& model, const TrialData& data)
        : circuit_(circuit), model_(&model), data_(&data) {
        if (circuit == CircuitKind::inv) inv_.emplace(model);
        if (circuit == CircuitKind::mvm) mvm_.emplace(model);
    }

    BiasCurvePoint evaluate(double ratio) {
        const int trials = static_cast<int>(data_->ideals.size());
        double sum = 0.0;
        int used = 0;
        for (int j = 0; j < trials; ++j) {
            try {
                sum += trial_re(ratio, j);
                ++used;
            } catch (const Error& err) {
                std::cerr << "amc: skipping trial " << j << " at bias ratio " << ratio << ": "
                          << err.what() << '\n';
            }
        }
        if (used == 0)
            throw Error("bias search: every trial failed at ratio " + std::to_string(ratio));
        BiasCurvePoint point;
        point.ratio = ratio;
        point.mean_re = sum / used;
        point.trials_used = used;
        return point;
    }

private:
    double trial_re(double ratio, int j) {
        const std::size_t t = static_cast<std::size_t>(j);
        switch (circuit_) {
            case CircuitKind::inv:
                return re_inv(inv_->solve(data_->inputs[t] * (1.0 + ratio)), data_->ideals[t]);
            case CircuitKind::mvm:
                return re_inv(mvm_->apply(data_->inputs[t] * (1.0 + ratio)), data_->ideals[t]);
            case CircuitKind::egv: {
                const CrossbarModel trial_model(data_->matrices[t], model_->r1(), model_->r2());
                const double g_lambda = data_->lambdas[t] * (1.0 + ratio);
                return re_egv(egv_.solve_raw(trial_model, g_lambda), data_->ideals[t]);
            }
        }
        throw Error("bias search: unknown circuit kind");
    }

    CircuitKind circuit_;
    const CrossbarModel* model_;
    const TrialData* data_;
    std::optional<InvOperator> inv_;
    std::optional<MvmOperator> mvm_;
    EgvSolver egv_;
};

std::vector<BiasCurvePoint> evaluate_candidates(CircuitKind circuit, const CrossbarModel& model,
                                                const TrialData& data,
                                                const std::vector<double>& ratios, int round) {
    std::vector<BiasCurvePoint> points(ratios.size());
    detail::parallel_for_stateful(
        static_cast<int>(ratios.size()),
        [&] { return CandidateEvaluator(circuit, model, data); },
        [&](CandidateEvaluator& evaluator, int i) {
            points[static_cast<std::size_t>(i)] = evaluator.evaluate(ratios[static_cast<std::size_t>(i)]);
            points[static_cast<std::size_t>(i)].round = round;
        });
    return points;
}

}  // namespace

BiasSearchResult search_optimal_bias(CircuitKind circuit, const CrossbarModel& model,
                                     const BiasSearchConfig& cfg) {
    cfg.validate();
    model.validate();
    const TrialData data = build_trial_data(circuit, model, cfg);

    BiasSearchResult result;
    result.curve.reserve(static_cast<std::size_t>(cfg.refinement_rounds * cfg.grid_points));
    double step = cfg.initial_step;
    double offset = 0.0;
    double global_min = std::numeric_limits<double>::infinity();
    for (int round = 1; round <= cfg.refinement_rounds; ++round) {
        step /= 10.0;
        std::vector<double> ratios(static_cast<std::size_t>(cfg.grid_points));
        for (int i = 0; i < cfg.grid_points; ++i)
            ratios[static_cast<std::size_t>(i)] = offset + (i - cfg.grid_center_index) * step;
        const auto points = evaluate_candidates(circuit, model, data, ratios, round);

        int i_min = 0;
        for (int i = 1; i < cfg.grid_points; ++i)
            if (points[static_cast<std::size_t>(i)].mean_re <
                points[static_cast<std::size_t>(i_min)].mean_re)
                i_min = i;
        if (round == 1)
            result.baseline_re = points[static_cast<std::size_t>(cfg.grid_center_index)].mean_re;
        for (const auto& point : points) global_min = std::min(global_min, point.mean_re);
        result.curve.insert(result.curve.end(), points.begin(), points.end());
        offset += (i_min - cfg.grid_center_index) * step;
    }
    result.optimal_bias_ratio = offset;
    result.min_re = global_min;
    result.delta_re = delta_re(result.baseline_re, result.min_re);
    return result;
}

std::vector<BiasCurvePoint> bias_sweep(CircuitKind circuit, const CrossbarModel& model,
                                       const std::vector<double>& ratios,
                                       const BiasSearchConfig& cfg) {
    cfg.validate();
    model.validate();
    if (ratios.empty()) return {};
    const TrialData data = build_trial_data(circuit, model, cfg);
    return evaluate_candidates(circuit, model, data, ratios, 0);
}

}  // namespace amc

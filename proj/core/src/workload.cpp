#include "amc/workload.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace amc {

const std::vector<TechNodePreset>& all_presets() {
    static const std::vector<TechNodePreset> table = {
        {"baseline", 1.0},
        {"32nm", 1.55},
        {"22nm", 2.97},
        {"16nm", 4.53},
    };
    return table;
}

TechNodePreset preset(const std::string& label) {
    for (const auto& p : all_presets()) {
        if (p.label == label) return p;
    }
    throw InvalidInput("unknown technology node preset: " + label);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

MatrixSpec MatrixSpec::dd_feasible(Eigen::Index n, std::uint64_t seed) {
    MatrixSpec spec;
    spec.n = n;
    spec.kind = MatrixKind::diag_dominant_symmetric;
    spec.seed = seed;
    if (n >= 2) {
        spec.g_min = std::min(spec.g_min, 0.8 * spec.g_max / static_cast<double>(n - 1));
    }
    return spec;
}

namespace {

// Symmetric matrix with strict diagonal dominance and all entries inside
// [g_min, g_max]: off-diagonals stay low enough that every row sum leaves
// headroom for a dominant diagonal within the band.
Eigen::MatrixXd gen_dd_symmetric(const MatrixSpec& spec, std::mt19937_64& eng) {
    const Eigen::Index n = spec.n;
    const double row_budget = spec.g_max / static_cast<double>(n - 1);
    if (!(spec.g_min < row_budget)) {
        std::ostringstream msg;
        msg << "diagonal dominance infeasible: with off-diagonals >= " << spec.g_min
            << " S the row sum of " << n - 1 << " entries exceeds g_max = " << spec.g_max
            << " S; lower g_min (see MatrixSpec::dd_feasible)";
        throw InvalidInput(msg.str());
    }
    const double off_hi = spec.g_min + 0.5 * (row_budget - spec.g_min);
    std::uniform_real_distribution<double> off_dist(spec.g_min, off_hi);
    std::uniform_real_distribution<double> slack_dist(0.25, 1.0);

    Eigen::MatrixXd g(n, n);
    g.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = off_dist(eng);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row_sum = g.row(i).sum();
        const double headroom = spec.g_max - row_sum;  // > 0 by the off_hi bound
        g(i, i) = row_sum + slack_dist(eng) * headroom;
    }
    return g;
}

}  // namespace

Eigen::MatrixXd gen_matrix(const MatrixSpec& spec) {
    if (spec.n < 2) throw InvalidInput("matrix generation needs n >= 2");
    if (!(spec.g_min > 0.0) || !(spec.g_min < spec.g_max)) {
        throw InvalidInput("need 0 < g_min < g_max");
    }
    std::mt19937_64 eng(spec.seed);

    if (spec.kind == MatrixKind::diag_dominant_symmetric) {
        return gen_dd_symmetric(spec, eng);
    }

    // Positive definite: a dominance core (drawn in an internally feasible
    // band) shifted by a rank-one all-ones term. The shift keeps every entry
    // inside [g_min, g_max] and only adds a positive-semidefinite matrix, so
    // definiteness survives while dominance generally does not.
    MatrixSpec core = spec;
    core.kind = MatrixKind::diag_dominant_symmetric;
    core.g_min = std::min(spec.g_min, 0.8 * spec.g_max / static_cast<double>(spec.n - 1));
    Eigen::MatrixXd a = gen_dd_symmetric(core, eng);
    a /= a.maxCoeff();
    return Eigen::MatrixXd::Constant(spec.n, spec.n, spec.g_min) +
           (spec.g_max - spec.g_min) * a;
}

Eigen::VectorXd gen_input(Eigen::Index n, InputKind kind, std::uint64_t seed) {
    if (n < 1) throw InvalidInput("input generation needs n >= 1");
    std::mt19937_64 eng(seed);
    const double lo = kind == InputKind::current ? 1e-6 : 0.05;
    const double hi = kind == InputKind::current ? 10e-6 : 0.2;
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(eng);
    return v;
}

}  // namespace amc

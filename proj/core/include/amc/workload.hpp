#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amc/types.hpp"

namespace amc {

/// Interconnect resistance presets for the supported technology nodes.
struct TechNodePreset {
    std::string label;
    double r_wire = 0.0;  // per-segment wire resistance [ohm]
};

/// Lookup by label: baseline (1.0), 32nm (1.55), 22nm (2.97), 16nm (4.53).
/// Throws InvalidInput for unknown labels.
TechNodePreset preset(const std::string& label);
const std::vector<TechNodePreset>& all_presets();

enum class MatrixKind { positive_definite, diag_dominant_symmetric };

struct MatrixSpec {
    Eigen::Index n = 0;
    MatrixKind kind = MatrixKind::diag_dominant_symmetric;
    double g_min = 10e-6;   // siemens
    double g_max = 100e-6;  // siemens
    std::uint64_t seed = 0;

    /// Diagonally-dominant spec with the lower conductance bound relaxed when
    /// needed: strict dominance with every entry >= g_min requires
    /// (n-1) * g_min < g_max, which the default 10 uS floor violates for
    /// large n.
    static MatrixSpec dd_feasible(Eigen::Index n, std::uint64_t seed);
};

/// Draws a random conductance matrix. All entries land in [g_min, g_max];
/// kind selects strict diagonal dominance + symmetry or plain symmetric
/// positive definiteness. Deterministic per seed. Throws InvalidInput when
/// the spec is infeasible.
Eigen::MatrixXd gen_matrix(const MatrixSpec& spec);

enum class InputKind { current, voltage };

/// Random input vector: currents uniform in [1 uA, 10 uA], voltages uniform
/// in [0.05 V, 0.2 V]. Deterministic per seed.
Eigen::VectorXd gen_input(Eigen::Index n, InputKind kind, std::uint64_t seed);

/// Derives an independent 64-bit seed for a substream (splitmix64 mix).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace amc

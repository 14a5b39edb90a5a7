#pragma once

#include <string>
#include <utility>
#include <vector>

#include "amc/sparse.hpp"
#include "amc/types.hpp"

namespace amc {

/// Element-level circuit description assembled into a nodal system. Ground is
/// the implicit reference node (id kGround) and never appears as an unknown.
///
/// Row assignment: every node gets one equation. Plain nodes get their KCL
/// row; a node pinned by a voltage constraint gets the pin row instead; an
/// op-amp output node gets the nullator row of its op-amp (the norator
/// current replaces the output's KCL, which is the standard nullor stamp).
class Netlist {
public:
    static constexpr int kGround = -1;

    struct Conductance {
        int a, b;
        double siemens;
    };
    struct CurrentSource {
        int from, to;  // injects `amps` into `to` and out of `from`
        double amps;
    };
    struct Vccs {
        int into, ctrl;  // injects gain * v(ctrl) into `into`
        double gain;
    };
    struct OpAmp {
        int minus, out;  // non-inverting input tied to ground
    };
    struct Pin {
        int node;
        double volts;
    };

    int add_node(std::string label = {});
    void add_conductance(int a, int b, double siemens);
    void add_current_source(int from, int to, double amps);
    void add_vccs(int into, int ctrl, double gain);
    void add_opamp(int minus, int out);
    void add_voltage_pin(int node, double volts);

    int node_count() const { return static_cast<int>(labels_.size()); }
    const std::vector<OpAmp>& opamps() const { return opamps_; }

    /// Stamps the square nodal system (matrix and source vector).
    void assemble(SparseMat* matrix, Eigen::VectorXd* rhs) const;

    /// Recomputes per-node KCL sums from the element list at the given node
    /// voltages. Constraint rows (pins, op-amp outputs) report 0.
    Eigen::VectorXd kcl_residuals(const Eigen::VectorXd& voltages) const;

    /// Largest branch-current magnitude at the given voltages; the natural
    /// scale for judging KCL residuals.
    double current_scale(const Eigen::VectorXd& voltages) const;

    /// Human-readable element listing for debugging.
    std::string dump() const;

private:
    void check_node(int id, bool allow_ground) const;
    bool kcl_exempt(int node) const;

    std::vector<std::string> labels_;
    std::vector<Conductance> conductances_;
    std::vector<CurrentSource> sources_;
    std::vector<Vccs> vccs_;
    std::vector<OpAmp> opamps_;
    std::vector<Pin> pins_;
};

/// Assembled nodal system plus the read-out probes of the circuit it models.
struct NodalSystem {
    Netlist net;
    SparseMat matrix;
    Eigen::VectorXd rhs;
    // Read-out: output(k) = probes[k].second * v(probes[k].first).
    std::vector<std::pair<int, double>> probes;
};

struct OracleSolution {
    Eigen::VectorXd voltages;
    Eigen::VectorXd output;        // probed read-out (OA outputs / sensed currents)
    Eigen::VectorXd kcl_residual;  // per node, recomputed from elements
    double max_kcl_residual = 0.0;
    double current_scale = 0.0;
};

/// Full nodal model of the inversion circuit: row wires carry the injected
/// currents and end at op-amp inverting inputs; op-amp outputs drive the
/// column wires from the last row. Probes read the op-amp outputs.
NodalSystem build_inv_netlist(const CrossbarModel& model, const Eigen::VectorXd& i_in);

/// Full nodal model of the open-loop multiply circuit: pinned source nodes
/// drive the row wires, column wires end in grounded current sensing. Probes
/// read the sensed currents g2 * v(last column node).
NodalSystem build_mvm_netlist(const CrossbarModel& model, const Eigen::VectorXd& v_in);

/// Un-eliminated two-field (row-node + column-node) KCL system of the
/// eigenvector circuit, with the feedback drive stamped as controlled
/// sources. Probes read the feedback read-out (g1/g_lambda) * v(row end).
NodalSystem build_egv_unreduced(const CrossbarModel& model, double g_lambda, double v0);

/// Direct sparse solve of a nodal system with KCL-residual reporting.
OracleSolution solve_nodal(const NodalSystem& system);

/// Dense analytic references for the three circuits.
Eigen::VectorXd ideal_inv(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);
std::pair<double, Eigen::VectorXd> ideal_egv(const Eigen::MatrixXd& a);
Eigen::VectorXd ideal_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& v);

}  // namespace amc

#include "amc/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "amc/egv.hpp"

namespace amc {

int Netlist::add_node(std::string label) {
    labels_.push_back(std::move(label));
    return static_cast<int>(labels_.size()) - 1;
}

void Netlist::check_node(int id, bool allow_ground) const {
    if (id == kGround) {
        if (!allow_ground) throw InvalidInput("ground not allowed for this terminal");
        return;
    }
    if (id < 0 || id >= node_count()) {
        std::ostringstream msg;
        msg << "unknown node id " << id;
        throw InvalidInput(msg.str());
    }
}

void Netlist::add_conductance(int a, int b, double siemens) {
    check_node(a, true);
    check_node(b, true);
    if (!(siemens > 0.0)) throw InvalidInput("conductance must be strictly positive");
    if (a == b) throw InvalidInput("conductance terminals must differ");
    conductances_.push_back({a, b, siemens});
}

void Netlist::add_current_source(int from, int to, double amps) {
    check_node(from, true);
    check_node(to, true);
    sources_.push_back({from, to, amps});
}

void Netlist::add_vccs(int into, int ctrl, double gain) {
    check_node(into, false);
    check_node(ctrl, true);
    vccs_.push_back({into, ctrl, gain});
}

void Netlist::add_opamp(int minus, int out) {
    check_node(minus, false);
    check_node(out, false);
    opamps_.push_back({minus, out});
}

void Netlist::add_voltage_pin(int node, double volts) {
    check_node(node, false);
    pins_.push_back({node, volts});
}

bool Netlist::kcl_exempt(int node) const {
    for (const auto& p : pins_) {
        if (p.node == node) return true;
    }
    for (const auto& oa : opamps_) {
        if (oa.out == node) return true;
    }
    return false;
}

void Netlist::assemble(SparseMat* matrix, Eigen::VectorXd* rhs) const {
    const int n = node_count();
    enum class RowKind { kcl, pin, nullator };
    std::vector<RowKind> kind(n, RowKind::kcl);
    for (const auto& p : pins_) {
        if (kind[p.node] != RowKind::kcl) throw InvalidInput("node constrained twice");
        kind[p.node] = RowKind::pin;
    }
    for (const auto& oa : opamps_) {
        if (kind[oa.out] != RowKind::kcl) throw InvalidInput("op-amp output constrained twice");
        kind[oa.out] = RowKind::nullator;
    }

    TripletBuffer buf(n, n);
    buf.reserve(4 * conductances_.size() + pins_.size() + opamps_.size() + vccs_.size());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    auto stamp_kcl = [&](int row, int self, int other, double g) {
        if (row == kGround || kind[row] != RowKind::kcl) return;
        buf.add(row, self, g);
        if (other != kGround) buf.add(row, other, -g);
    };
    for (const auto& c : conductances_) {
        stamp_kcl(c.a, c.a, c.b, c.siemens);
        stamp_kcl(c.b, c.b, c.a, c.siemens);
    }
    for (const auto& s : sources_) {
        if (s.to != kGround && kind[s.to] == RowKind::kcl) b(s.to) += s.amps;
        if (s.from != kGround && kind[s.from] == RowKind::kcl) b(s.from) -= s.amps;
    }
    for (const auto& v : vccs_) {
        if (kind[v.into] == RowKind::kcl && v.ctrl != kGround) buf.add(v.into, v.ctrl, -v.gain);
    }
    for (const auto& p : pins_) {
        buf.add(p.node, p.node, 1.0);
        b(p.node) = p.volts;
    }
    for (const auto& oa : opamps_) {
        buf.add(oa.out, oa.minus, 1.0);  // nullator: v(minus) = v(plus) = 0
    }

    *matrix = buf.build();
    *rhs = std::move(b);
}

Eigen::VectorXd Netlist::kcl_residuals(const Eigen::VectorXd& voltages) const {
    const int n = node_count();
    if (voltages.size() != n) throw InvalidInput("voltage vector size mismatch");
    auto vol = [&](int id) { return id == kGround ? 0.0 : voltages(id); };

    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (const auto& c : conductances_) {
        const double current = c.siemens * (vol(c.a) - vol(c.b));  // current a -> b
        if (c.a != kGround) r(c.a) -= current;
        if (c.b != kGround) r(c.b) += current;
    }
    for (const auto& s : sources_) {
        if (s.to != kGround) r(s.to) += s.amps;
        if (s.from != kGround) r(s.from) -= s.amps;
    }
    for (const auto& v : vccs_) {
        r(v.into) += v.gain * vol(v.ctrl);
    }
    for (int i = 0; i < n; ++i) {
        if (kcl_exempt(i)) r(i) = 0.0;
    }
    return r;
}

double Netlist::current_scale(const Eigen::VectorXd& voltages) const {
    auto vol = [&](int id) { return id == kGround ? 0.0 : voltages(id); };
    double scale = 0.0;
    for (const auto& c : conductances_) {
        scale = std::max(scale, std::abs(c.siemens * (vol(c.a) - vol(c.b))));
    }
    for (const auto& s : sources_) scale = std::max(scale, std::abs(s.amps));
    for (const auto& v : vccs_) scale = std::max(scale, std::abs(v.gain * vol(v.ctrl)));
    return scale;
}

std::string Netlist::dump() const {
    std::ostringstream out;
    auto name = [&](int id) {
        if (id == kGround) return std::string("gnd");
        std::ostringstream n;
        n << "n" << id;
        if (!labels_[id].empty()) n << "[" << labels_[id] << "]";
        return n.str();
    };
    out << "nodes " << node_count() << "\n";
    for (const auto& c : conductances_) {
        out << "G " << name(c.a) << " " << name(c.b) << " " << c.siemens << "\n";
    }
    for (const auto& s : sources_) {
        out << "I " << name(s.from) << " -> " << name(s.to) << " " << s.amps << "\n";
    }
    for (const auto& v : vccs_) {
        out << "VCCS into " << name(v.into) << " ctrl " << name(v.ctrl) << " gain " << v.gain
            << "\n";
    }
    for (const auto& oa : opamps_) {
        out << "OA -" << name(oa.minus) << " out " << name(oa.out) << "\n";
    }
    for (const auto& p : pins_) {
        out << "PIN " << name(p.node) << " = " << p.volts << " V\n";
    }
    return out.str();
}

namespace {

std::string cell_label(const char* field, Eigen::Index i, Eigen::Index j) {
    std::ostringstream s;
    s << field << "(" << i << "," << j << ")";
    return s.str();
}

}  // namespace

NodalSystem build_inv_netlist(const CrossbarModel& model, const Eigen::VectorXd& i_in) {
    model.validate();
    const Eigen::Index n = model.n();
    if (i_in.size() != n) throw InvalidInput("input current vector size mismatch");

    NodalSystem sys;
    Netlist& net = sys.net;
    std::vector<int> row(n * n), col(n * n), oa(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) row[i * n + j] = net.add_node(cell_label("V", i, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) col[i * n + j] = net.add_node(cell_label("U", i, j));
    }
    for (Eigen::Index j = 0; j < n; ++j) oa[j] = net.add_node(cell_label("OA", j, 0));

    for (Eigen::Index i = 0; i < n; ++i) {
        // Row wire: injected current at the near end, op-amp input at the far
        // end (no segment past it; the input node is the wire end itself).
        net.add_current_source(Netlist::kGround, row[i * n], i_in(i));
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            net.add_conductance(row[i * n + j], row[i * n + j + 1], model.g1);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            net.add_conductance(row[i * n + j], col[i * n + j], model.g(i, j));
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        // Column wire: open at the first row, driven by the op-amp output
        // through one extra segment past the last row.
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            net.add_conductance(col[i * n + j], col[(i + 1) * n + j], model.g2);
        }
        net.add_conductance(col[(n - 1) * n + j], oa[j], model.g2);
        net.add_opamp(row[j * n + (n - 1)], oa[j]);
        sys.probes.emplace_back(oa[j], 1.0);
    }
    net.assemble(&sys.matrix, &sys.rhs);
    return sys;
}

NodalSystem build_mvm_netlist(const CrossbarModel& model, const Eigen::VectorXd& v_in) {
    model.validate();
    const Eigen::Index n = model.n();
    if (v_in.size() != n) throw InvalidInput("input voltage vector size mismatch");

    NodalSystem sys;
    Netlist& net = sys.net;
    std::vector<int> src(n), row(n * n), col(n * n);
    for (Eigen::Index i = 0; i < n; ++i) src[i] = net.add_node(cell_label("S", i, 0));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) row[i * n + j] = net.add_node(cell_label("V", i, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) col[i * n + j] = net.add_node(cell_label("U", i, j));
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        net.add_voltage_pin(src[i], v_in(i));
        net.add_conductance(src[i], row[i * n], model.g1);
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            net.add_conductance(row[i * n + j], row[i * n + j + 1], model.g1);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            net.add_conductance(row[i * n + j], col[i * n + j], model.g(i, j));
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            net.add_conductance(col[i * n + j], col[(i + 1) * n + j], model.g2);
        }
        // Grounded current sensing past the last row.
        net.add_conductance(col[(n - 1) * n + j], Netlist::kGround, model.g2);
        sys.probes.emplace_back(col[(n - 1) * n + j], model.g2);
    }
    net.assemble(&sys.matrix, &sys.rhs);
    return sys;
}

NodalSystem build_egv_unreduced(const CrossbarModel& model, double g_lambda, double v0) {
    model.validate();
    if (!(g_lambda > 0.0)) throw InvalidInput("g_lambda must be strictly positive");

    const Eigen::Index n = model.n();
    NodalSystem sys;
    Netlist& net = sys.net;
    std::vector<int> row(n * n), col(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) row[i * n + j] = net.add_node(cell_label("V", i, j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) col[i * n + j] = net.add_node(cell_label("U", i, j));
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        // Row wire: open at the near end, ending in the transimpedance
        // virtual ground through one extra segment past the far end.
        for (Eigen::Index j = 0; j + 1 < n; ++j) {
            net.add_conductance(row[i * n + j], row[i * n + j + 1], model.g1);
        }
        net.add_conductance(row[i * n + (n - 1)], Netlist::kGround, model.g1);
        for (Eigen::Index j = 0; j < n; ++j) {
            net.add_conductance(row[i * n + j], col[i * n + j], model.g(i, j));
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            net.add_conductance(col[i * n + j], col[(i + 1) * n + j], model.g2);
        }
        // Column driven past the last row by the feedback voltage: the
        // terminal segment splits into its grounded self-term plus the driven
        // end as an injected current. Column 0's feedback path is cut and
        // driven externally at v0.
        net.add_conductance(col[(n - 1) * n + j], Netlist::kGround, model.g2);
        if (j == 0) {
            net.add_current_source(Netlist::kGround, col[(n - 1) * n + j], model.g2 * v0);
        } else {
            net.add_vccs(col[(n - 1) * n + j], row[j * n + (n - 1)],
                         model.g2 * model.g1 / g_lambda);
        }
        sys.probes.emplace_back(row[j * n + (n - 1)], model.g1 / g_lambda);
    }
    net.assemble(&sys.matrix, &sys.rhs);
    return sys;
}

OracleSolution solve_nodal(const NodalSystem& system) {
    Factorization fact(system.matrix);
    OracleSolution sol;
    sol.voltages = fact.solve_refined(system.matrix, system.rhs, 1);
    sol.output.resize(static_cast<Eigen::Index>(system.probes.size()));
    for (std::size_t k = 0; k < system.probes.size(); ++k) {
        sol.output(static_cast<Eigen::Index>(k)) =
            system.probes[k].second * sol.voltages(system.probes[k].first);
    }
    sol.kcl_residual = system.net.kcl_residuals(sol.voltages);
    sol.max_kcl_residual = sol.kcl_residual.lpNorm<Eigen::Infinity>();
    sol.current_scale = system.net.current_scale(sol.voltages);
    return sol;
}

Eigen::VectorXd ideal_inv(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    if (a.rows() != a.cols()) throw InvalidInput("ideal_inv requires a square matrix");
    if (b.size() != a.rows()) throw InvalidInput("ideal_inv size mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw SingularSystem("ideal_inv: matrix is singular");
    return lu.solve(b);
}

std::pair<double, Eigen::VectorXd> ideal_egv(const Eigen::MatrixXd& a) {
    return dominant_eigenpair(a);
}

Eigen::VectorXd ideal_mvm(const Eigen::MatrixXd& a, const Eigen::VectorXd& v) {
    if (a.rows() != a.cols()) throw InvalidInput("ideal_mvm requires a square matrix");
    if (v.size() != a.rows()) throw InvalidInput("ideal_mvm size mismatch");
    return a.transpose() * v;
}

}  // namespace amc

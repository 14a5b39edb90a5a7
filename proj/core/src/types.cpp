#include "amc/types.hpp"

#include <sstream>

namespace amc {

CrossbarModel::CrossbarModel(Eigen::MatrixXd cell_conductance, double r_row, double r_col)
    : g(std::move(cell_conductance)) {
    if (r_row <= 0.0 || r_col <= 0.0) {
        throw InvalidInput("wire resistance must be strictly positive");
    }
    g1 = 1.0 / r_row;
    g2 = 1.0 / r_col;
    validate();
}

void CrossbarModel::validate() const {
    if (g.rows() != g.cols()) {
        std::ostringstream msg;
        msg << "conductance matrix must be square, got " << g.rows() << "x" << g.cols();
        throw InvalidInput(msg.str());
    }
    if (g.rows() < 2) {
        throw InvalidInput("crossbar needs at least 2 rows/columns");
    }
    if (!(g.array() > 0.0).all() || !g.allFinite()) {
        throw InvalidInput("all cell conductances must be finite and strictly positive");
    }
    if (!(g1 > 0.0) || !(g2 > 0.0)) {
        throw InvalidInput("wire conductances must be strictly positive");
    }
}

}  // namespace amc

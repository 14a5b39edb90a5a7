#pragma once

// Shared solve-with-refinement driver for the linear circuit systems. The
// circuits are linear, so a Newton step doubles as one round of iterative
// refinement; refinement matters because the Jacobians mix wire and cell
// conductances whose magnitudes differ by many orders.

#include <utility>

#include "amc/sparse.hpp"

namespace amc::detail {

struct RefineResult {
    Eigen::VectorXd x;
    int steps = 0;
    double residual_inf = 0.0;
};

/// Solves J x = rhs (rhs == -vec F(0)), then applies extra Newton steps while
/// ||F(x)||_inf exceeds `tol` (at most `max_refine` of them). `residual` maps
/// x to vec F(x). The tolerance can be unreachable at extreme wire
/// conductances where the residual's roundoff floor is large; the last
/// iterate is still returned with its residual norm reported.
template <typename ResidualFn>
RefineResult solve_with_refinement(const Factorization& fact, const Eigen::VectorXd& rhs,
                                   ResidualFn&& residual, double tol, int max_refine = 2) {
    RefineResult out;
    out.x = fact.solve(rhs);
    Eigen::VectorXd f = residual(out.x);
    out.residual_inf = f.lpNorm<Eigen::Infinity>();
    while (out.residual_inf > tol && out.steps < max_refine) {
        out.x -= fact.solve(f);
        f = residual(out.x);
        out.residual_inf = f.lpNorm<Eigen::Infinity>();
        ++out.steps;
    }
    return out;
}

}  // namespace amc::detail

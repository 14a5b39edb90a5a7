#pragma once

// Index-level stamping of structured grid operators into a flattened
// Jacobian. A field X over the n x n grid is flattened row-major
// (slot i*n + j); each helper adds the partial derivatives of one matrix
// product with respect to the entries of X. Stamping entry-by-entry keeps the
// Jacobian assembly O(nnz) instead of forming dense Kronecker products.

#include "amc/operators.hpp"
#include "amc/sparse.hpp"

namespace amc::detail {

/// d/dX of coeff * (L X): J[(i,j),(k,j)] += coeff * L(i,k).
/// Grid columns are restricted to j < col_end (col_end == n for no mask).
inline void stamp_left(TripletBuffer& buf, const SparseMat& l, double coeff, Eigen::Index n,
                       Eigen::Index col_end) {
    for (int outer = 0; outer < l.outerSize(); ++outer) {
        for (SparseMat::InnerIterator it(l, outer); it; ++it) {
            const double v = coeff * it.value();
            for (Eigen::Index j = 0; j < col_end; ++j) {
                buf.add(it.row() * n + j, it.col() * n + j, v);
            }
        }
    }
}

/// d/dX of coeff * (X R): J[(i,j),(i,l)] += coeff * R(l,j).
inline void stamp_right(TripletBuffer& buf, const SparseMat& r, double coeff, Eigen::Index n) {
    for (int outer = 0; outer < r.outerSize(); ++outer) {
        for (SparseMat::InnerIterator it(r, outer); it; ++it) {
            const double v = coeff * it.value();
            for (Eigen::Index i = 0; i < n; ++i) {
                buf.add(i * n + it.col(), i * n + it.row(), v);
            }
        }
    }
}

/// d/dX of coeff * L [(1/W) o (X R)]: J[(i,j),(k,l)] += coeff * L(i,k) * R(l,j) / W(k,j).
inline void stamp_weighted_outer(TripletBuffer& buf, const SparseMat& l,
                                 const Eigen::MatrixXd& w, const SparseMat& r, double coeff,
                                 Eigen::Index n) {
    for (int lo = 0; lo < l.outerSize(); ++lo) {
        for (SparseMat::InnerIterator lit(l, lo); lit; ++lit) {
            const Eigen::Index i = lit.row();
            const Eigen::Index k = lit.col();
            const double lv = coeff * lit.value();
            for (int ro = 0; ro < r.outerSize(); ++ro) {
                for (SparseMat::InnerIterator rit(r, ro); rit; ++rit) {
                    const Eigen::Index ll = rit.row();
                    const Eigen::Index j = rit.col();
                    buf.add(i * n + j, k * n + ll, lv * rit.value() / w(k, j));
                }
            }
        }
    }
}

/// d/dX of coeff * [(1/W) o (L X)] R: J[(i,j),(k,l)] += coeff * L(i,k) * R(l,j) / W(i,l).
inline void stamp_weighted_inner(TripletBuffer& buf, const SparseMat& l,
                                 const Eigen::MatrixXd& w, const SparseMat& r, double coeff,
                                 Eigen::Index n) {
    for (int lo = 0; lo < l.outerSize(); ++lo) {
        for (SparseMat::InnerIterator lit(l, lo); lit; ++lit) {
            const Eigen::Index i = lit.row();
            const Eigen::Index k = lit.col();
            const double lv = coeff * lit.value();
            for (int ro = 0; ro < r.outerSize(); ++ro) {
                for (SparseMat::InnerIterator rit(r, ro); rit; ++rit) {
                    const Eigen::Index ll = rit.row();
                    const Eigen::Index j = rit.col();
                    buf.add(i * n + j, k * n + ll, lv * rit.value() / w(i, ll));
                }
            }
        }
    }
}

}  // namespace amc::detail

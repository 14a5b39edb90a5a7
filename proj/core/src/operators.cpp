#include "amc/operators.hpp"

#include <cassert>
#include <vector>

namespace amc {

namespace {

SparseMat chain_laplacian(Eigen::Index n, bool terminated_last) {
    assert(n >= 1);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(3 * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double diag = 2.0;
        if (!terminated_last && i == n - 1) diag = 1.0;
        if (terminated_last && i == 0) diag = 1.0;
        trip.emplace_back(i, i, diag);
        if (i > 0) trip.emplace_back(i, i - 1, -1.0);
        if (i < n - 1) trip.emplace_back(i, i + 1, -1.0);
    }
    SparseMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
}

}  // namespace

SparseMat chain_laplacian_last(Eigen::Index n) { return chain_laplacian(n, true); }

SparseMat chain_laplacian_first(Eigen::Index n) { return chain_laplacian(n, false); }

SparseMat mask_drop_last(Eigen::Index n) {
    SparseMat m(n, n);
    m.reserve(Eigen::VectorXi::Constant(static_cast<int>(n), 1));
    for (Eigen::Index i = 0; i + 1 < n; ++i) m.insert(i, i) = 1.0;
    m.makeCompressed();
    return m;
}

SparseMat mask_drop_first(Eigen::Index n) {
    SparseMat m(n, n);
    m.reserve(Eigen::VectorXi::Constant(static_cast<int>(n), 1));
    for (Eigen::Index i = 1; i < n; ++i) m.insert(i, i) = 1.0;
    m.makeCompressed();
    return m;
}

SparseMat mask_keep_last(Eigen::Index n) { return unit_entry(n, n - 1, n - 1); }

SparseMat unit_entry(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    assert(i >= 0 && i < n && j >= 0 && j < n);
    SparseMat m(n, n);
    m.insert(i, j) = 1.0;
    m.makeCompressed();
    return m;
}

Eigen::VectorXd flatten_rows(const Eigen::MatrixXd& m) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    RowMajor rm = m;
    return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

Eigen::MatrixXd unflatten_rows(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
    assert(v.size() == rows * cols);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> rm(v.data(), rows, cols);
    return Eigen::MatrixXd(rm);
}

}  // namespace amc

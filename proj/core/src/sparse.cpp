#include "amc/sparse.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <mutex>
#include <sstream>

namespace amc {

SparseMat TripletBuffer::build() const {
    SparseMat m(rows_, cols_);
    m.setFromTriplets(entries_.begin(), entries_.end());
    // Entries that cancel to zero are dropped so nnz counts structural
    // nonzeros only.
    m.prune([](Eigen::Index, Eigen::Index, double value) { return value != 0.0; });
    m.makeCompressed();
    return m;
}

SparsityReport sparsity_report(const SparseMat& m) {
    SparsityReport rep;
    rep.dim = m.rows();
    rep.nnz = m.nonZeros();
    const double total = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
    rep.density = total > 0 ? static_cast<double>(rep.nnz) / total : 0.0;
    rep.sparsity = 1.0 - rep.density;
    return rep;
}

double inf_norm(const SparseMat& m) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(m, k); it; ++it) {
            row_sums(it.row()) += std::abs(it.value());
        }
    }
    return m.rows() > 0 ? row_sums.maxCoeff() : 0.0;
}

struct Factorization::Impl {
    Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
    Eigen::VectorXd row_scale;
    Eigen::VectorXd col_scale;
    Eigen::Index dim = 0;
    bool analyzed = false;
    bool computed = false;
    // Serializes backsubstitutions: the backing solver does not document
    // concurrent solve() as safe, and solves against one factorization must
    // be shareable across threads.
    mutable std::mutex solve_mutex;

    // Infinity-norm equilibration: S = R A C with R, C diagonal. Throws when
    // a row or column is identically zero (the system is exactly singular).
    SparseMat equilibrate(const SparseMat& a) {
        const Eigen::Index n = a.rows();
        row_scale = Eigen::VectorXd::Zero(n);
        col_scale = Eigen::VectorXd::Zero(a.cols());
        for (int k = 0; k < a.outerSize(); ++k) {
            for (SparseMat::InnerIterator it(a, k); it; ++it) {
                const double v = std::abs(it.value());
                if (v > row_scale(it.row())) row_scale(it.row()) = v;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (row_scale(i) == 0.0) throw SingularSystem("matrix has an empty row");
            row_scale(i) = 1.0 / row_scale(i);
        }
        for (int k = 0; k < a.outerSize(); ++k) {
            for (SparseMat::InnerIterator it(a, k); it; ++it) {
                const double v = std::abs(it.value()) * row_scale(it.row());
                if (v > col_scale(it.col())) col_scale(it.col()) = v;
            }
        }
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (col_scale(j) == 0.0) throw SingularSystem("matrix has an empty column");
            col_scale(j) = 1.0 / col_scale(j);
        }
        SparseMat s = a;
        for (int k = 0; k < s.outerSize(); ++k) {
            for (SparseMat::InnerIterator it(s, k); it; ++it) {
                it.valueRef() *= row_scale(it.row()) * col_scale(it.col());
            }
        }
        return s;
    }
};

Factorization::Factorization() : impl_(std::make_unique<Impl>()) {}
Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

Factorization::Factorization(const SparseMat& a) : Factorization() { compute(a); }

void Factorization::compute(const SparseMat& a) {
    if (a.rows() != a.cols()) throw InvalidInput("factorization requires a square matrix");
    SparseMat s = impl_->equilibrate(a);
    if (!impl_->analyzed || impl_->dim != a.rows()) {
        impl_->lu.analyzePattern(s);
        impl_->analyzed = true;
    }
    impl_->lu.factorize(s);
    if (impl_->lu.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "sparse LU failed (dim " << a.rows() << "): " << impl_->lu.lastErrorMessage();
        impl_->computed = false;
        throw SingularSystem(msg.str());
    }
    impl_->dim = a.rows();
    impl_->computed = true;
}

void Factorization::refactor(const SparseMat& a) {
    if (!impl_->analyzed || impl_->dim != a.rows()) {
        compute(a);
        return;
    }
    SparseMat s = impl_->equilibrate(a);
    impl_->lu.factorize(s);
    if (impl_->lu.info() != Eigen::Success) {
        impl_->computed = false;
        throw SingularSystem(std::string("sparse LU refactorization failed: ") +
                             impl_->lu.lastErrorMessage());
    }
    impl_->computed = true;
}

bool Factorization::computed() const { return impl_->computed; }

Eigen::Index Factorization::dim() const { return impl_->dim; }

Eigen::Index Factorization::factor_nnz() const {
    if (!impl_->computed) return 0;
    return static_cast<Eigen::Index>(impl_->lu.nnzL()) +
           static_cast<Eigen::Index>(impl_->lu.nnzU());
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
    if (!impl_->computed) throw Error("solve called before a successful factorization");
    if (b.size() != impl_->dim) throw InvalidInput("right-hand side has wrong dimension");
    Eigen::VectorXd scaled = impl_->row_scale.cwiseProduct(b);
    std::lock_guard<std::mutex> lock(impl_->solve_mutex);
    Eigen::VectorXd y = impl_->lu.solve(scaled);
    if (impl_->lu.info() != Eigen::Success) throw SingularSystem("sparse LU solve failed");
    return impl_->col_scale.cwiseProduct(y);
}

Eigen::VectorXd Factorization::solve_refined(const SparseMat& a, const Eigen::VectorXd& b,
                                             int steps) const {
    Eigen::VectorXd x = solve(b);
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXd residual = b - a * x;
        x += solve(residual);
    }
    return x;
}

}  // namespace amc

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "amc/sparse.hpp"
#include "amc/types.hpp"
#include "doctest.h"

using amc::SparseMat;

TEST_CASE("triplet build sums duplicates and drops exact zeros") {
    amc::TripletBuffer buf(2, 2);
    buf.add(0, 0, 1.0);
    buf.add(0, 0, 2.0);
    SparseMat m = buf.build();
    CHECK(m.nonZeros() == 1);
    CHECK(m.coeff(0, 0) == 3.0);

    amc::TripletBuffer cancel(2, 2);
    cancel.add(1, 1, 5.0);
    cancel.add(1, 1, -5.0);
    cancel.add(0, 1, 5.0);
    cancel.add(1, 0, -5.0);
    SparseMat c = cancel.build();
    CHECK(c.nonZeros() == 2);  // the cancelled (1,1) entry is structurally removed

    amc::TripletBuffer empty(3, 3);
    CHECK(empty.build().nonZeros() == 0);
}

TEST_CASE("triplet build is insertion-order independent") {
    std::vector<std::array<double, 3>> entries = {
        {0, 0, 2.0}, {1, 2, -1.0}, {2, 1, 4.0}, {1, 1, 0.5}, {0, 0, 1.0}, {2, 2, 3.0}};
    amc::TripletBuffer fwd(3, 3), rev(3, 3);
    for (const auto& e : entries) fwd.add(Eigen::Index(e[0]), Eigen::Index(e[1]), e[2]);
    std::reverse(entries.begin(), entries.end());
    for (const auto& e : entries) rev.add(Eigen::Index(e[0]), Eigen::Index(e[1]), e[2]);
    const Eigen::MatrixXd a = Eigen::MatrixXd(fwd.build());
    const Eigen::MatrixXd b = Eigen::MatrixXd(rev.build());
    CHECK(a == b);
    CHECK(fwd.build().nonZeros() == rev.build().nonZeros());
}

TEST_CASE("sparsity_report counts exactly") {
    amc::TripletBuffer buf(4, 4);
    buf.add(0, 0, 1.0);
    buf.add(1, 1, 1.0);
    buf.add(2, 2, 1.0);
    buf.add(3, 3, 1.0);
    const auto rep = amc::sparsity_report(buf.build());
    CHECK(rep.dim == 4);
    CHECK(rep.nnz == 4);
    CHECK(rep.density == doctest::Approx(0.25));
    CHECK(rep.sparsity == doctest::Approx(0.75));
}

TEST_CASE("factorization solves identity and scaled systems exactly") {
    amc::TripletBuffer id(16, 16);
    for (int i = 0; i < 16; ++i) id.add(i, i, 1.0);
    amc::Factorization f(id.build());
    Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(16, 1.0, 16.0);
    CHECK(f.solve(b).isApprox(b, 1e-15));

    amc::TripletBuffer two(4, 4);
    for (int i = 0; i < 4; ++i) two.add(i, i, 2.0);
    amc::Factorization g(two.build());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(g.solve(ones).isApprox(Eigen::VectorXd::Constant(4, 0.5), 1e-15));
}

TEST_CASE("factorization solves a permutation by permuting") {
    amc::TripletBuffer buf(4, 4);
    buf.add(0, 2, 1.0);
    buf.add(1, 0, 1.0);
    buf.add(2, 3, 1.0);
    buf.add(3, 1, 1.0);
    amc::Factorization f(buf.build());
    Eigen::VectorXd b(4);
    b << 10, 20, 30, 40;
    // Row i of A reads x(p(i)); solving recovers x with x(p(i)) = b(i).
    Eigen::VectorXd x = f.solve(b);
    CHECK(x(2) == doctest::Approx(10));
    CHECK(x(0) == doctest::Approx(20));
    CHECK(x(3) == doctest::Approx(30));
    CHECK(x(1) == doctest::Approx(40));
}

TEST_CASE("random sparse SPD system recovers a known solution") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    const int dim = 300;
    amc::TripletBuffer buf(dim, dim);
    // Strictly diagonally dominant tridiagonal-ish SPD system.
    for (int i = 0; i < dim; ++i) {
        buf.add(i, i, 4.0 + unif(rng));
        if (i + 1 < dim) {
            const double off = -unif(rng);
            buf.add(i, i + 1, off);
            buf.add(i + 1, i, off);
        }
    }
    SparseMat a = buf.build();
    Eigen::VectorXd x_star(dim);
    for (int i = 0; i < dim; ++i) x_star(i) = unif(rng) - 0.5;
    const Eigen::VectorXd rhs = a * x_star;
    amc::Factorization f(a);
    const Eigen::VectorXd x = f.solve(rhs);
    CHECK((x - x_star).norm() / x_star.norm() <= 1e-9);

    // Backward-error bound for the well-conditioned case.
    const double backward = (a * x - rhs).norm() /
                            (amc::inf_norm(a) * x.norm() + rhs.norm());
    CHECK(backward <= 1e-10);

    // solve then refine matches plain solve here (already at roundoff).
    const Eigen::VectorXd xr = f.solve_refined(a, rhs, 1);
    CHECK((a * xr - rhs).norm() / rhs.norm() <= 1e-12);
}

TEST_CASE("singular systems are reported as SingularSystem") {
    amc::TripletBuffer buf(3, 3);
    buf.add(0, 0, 1.0);
    buf.add(1, 1, 1.0);
    // Row and column 2 empty.
    amc::Factorization f;
    CHECK_THROWS_AS(f.compute(buf.build()), amc::SingularSystem);

    // Structurally full but numerically singular (two equal rows).
    amc::TripletBuffer sing(2, 2);
    sing.add(0, 0, 1.0);
    sing.add(0, 1, 2.0);
    sing.add(1, 0, 1.0);
    sing.add(1, 1, 2.0);
    amc::Factorization g;
    CHECK_THROWS_AS(g.compute(sing.build()), amc::SingularSystem);
}

TEST_CASE("refactor reuses the pattern and tracks new values") {
    amc::TripletBuffer buf(5, 5);
    for (int i = 0; i < 5; ++i) buf.add(i, i, 2.0);
    for (int i = 0; i + 1 < 5; ++i) buf.add(i, i + 1, -0.5);
    SparseMat a = buf.build();
    amc::Factorization f(a);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(5);
    const Eigen::VectorXd x1 = f.solve(ones);

    SparseMat b = a;
    for (int k = 0; k < b.outerSize(); ++k)
        for (SparseMat::InnerIterator it(b, k); it; ++it) it.valueRef() *= 3.0;
    f.refactor(b);
    const Eigen::VectorXd x2 = f.solve(ones);
    CHECK(x2.isApprox(x1 / 3.0, 1e-12));
}

TEST_CASE("inf_norm is the max absolute row sum") {
    amc::TripletBuffer buf(2, 3);
    buf.add(0, 0, -1.0);
    buf.add(0, 2, 2.0);
    buf.add(1, 1, -4.0);
    CHECK(amc::inf_norm(buf.build()) == doctest::Approx(4.0));
}

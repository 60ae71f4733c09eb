#include <doctest.h>

#include <cmath>
#include <random>

#include "opquot/numkernel.hpp"
#include "opquot/oracle.hpp"
#include "support.hpp"

using namespace opquot;
using namespace opquot::testing;

TEST_CASE("adjoint conjugates and transposes") {
    CHECK(max_abs_diff(adjoint(real_matrix({{0, 1}, {0, 0}})), real_matrix({{0, 0}, {1, 0}})) == 0.0);

    Matrix i1(1, 1);
    i1(0, 0) = Scalar(0, 1);
    CHECK(adjoint(i1)(0, 0) == Scalar(0, -1));

    std::mt19937_64 rng(7);
    const Matrix m = oracle::random_gaussian(5, 3, rng);
    CHECK(adjoint(m).rows() == 3);
    CHECK(max_abs_diff(adjoint(adjoint(m)), m) == 0.0);
}

TEST_CASE("svd of small fixed inputs") {
    const SvdFactorization d = svd(diag({3, 1}));
    CHECK(d.sigma(0) == doctest::Approx(3.0));
    CHECK(d.sigma(1) == doctest::Approx(1.0));
    CHECK(d.rank == 2);

    // BB^* = [[2,0],[0,0]] has characteristic roots 2 and 0.
    const SvdFactorization s = svd(real_matrix({{1, 1}, {0, 0}}));
    CHECK(s.sigma(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(s.sigma(1)) < 1e-15);
    CHECK(s.rank == 1);

    const SvdFactorization z = svd(Matrix::Zero(3, 4));
    CHECK(z.rank == 0);
    CHECK(z.sigma.size() == 3);
}

TEST_CASE("svd reconstructs and has unitary factors") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 9);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 9);
        const Matrix a = oracle::random_gaussian(m, n, rng);
        const SvdFactorization f = svd(a);
        Matrix sigma = Matrix::Zero(m, n);
        for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
            sigma(i, i) = f.sigma(i);
            if (i > 0) {
                CHECK(f.sigma(i) <= f.sigma(i - 1));
            }
        }
        CHECK(norm2(f.u * sigma * f.v.adjoint() - a) < 1e-12);
        CHECK(norm2(f.u.adjoint() * f.u - identity(m)) < 1e-12);
        CHECK(norm2(f.v.adjoint() * f.v - identity(n)) < 1e-12);
    }
}

TEST_CASE("svd rejects non-finite input") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(m), Error);
}

TEST_CASE("pseudoinverse of fixed inputs") {
    // Columnwise minimum-norm least squares: e1 -> (1/2, 1/2), e2 -> 0.
    CHECK(max_abs_diff(pseudoinverse(real_matrix({{1, 1}, {0, 0}})), real_matrix({{0.5, 0}, {0.5, 0}})) < 1e-15);
    CHECK(max_abs_diff(pseudoinverse(identity(4)), identity(4)) < 1e-15);
    CHECK(max_abs_diff(pseudoinverse(example2_b()), real_matrix({{0, 0, 0}, {0, 1, 0}, {1, 0, 0}})) < 1e-15);
    CHECK(max_abs_diff(pseudoinverse(Matrix::Zero(2, 3)), Matrix::Zero(3, 2)) == 0.0);
    CHECK(max_abs_diff(pseudoinverse(real_matrix({{2, 0, 0}})), real_matrix({{0.5}, {0}, {0}})) < 1e-15);
}

TEST_CASE("Penrose identities and rank consistency on random complex matrices") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 32);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 32);
        const Eigen::Index r = static_cast<Eigen::Index>(rng() % (std::min(m, n) + 1));
        const Matrix a = oracle::random_with_rank(m, n, r, rng);
        const Matrix ap = pseudoinverse(a);
        const double scale = 1e-10 * (1.0 + norm2(a));
        CHECK(norm2(a * ap * a - a) <= scale * (1.0 + norm2(a)));
        CHECK(norm2(ap * a * ap - ap) <= scale * (1.0 + norm2(ap)));
        const Matrix left = a * ap;
        const Matrix right = ap * a;
        CHECK(norm2(left - left.adjoint()) <= scale);
        CHECK(norm2(right - right.adjoint()) <= scale);

        const Eigen::Index rank = numerical_rank(a);
        CHECK(rank == r);
        CHECK(numerical_rank(ap) == rank);
        CHECK(numerical_rank(left) == rank);
        CHECK(numerical_rank(right) == rank);
    }
}

TEST_CASE("projectors") {
    const Matrix m = real_matrix({{1, 1}, {0, 0}});
    CHECK(max_abs_diff(projector_onto_range(m), real_matrix({{1, 0}, {0, 0}})) < 1e-15);
    CHECK(max_abs_diff(projector_onto_corange(m), real_matrix({{0.5, 0.5}, {0.5, 0.5}})) < 1e-15);
    CHECK(max_abs_diff(projector_onto_range(identity(3)), identity(3)) < 1e-15);
    CHECK(max_abs_diff(projector_onto_corange(identity(3)), identity(3)) < 1e-15);
    CHECK(max_abs_diff(projector_onto_range(Matrix::Zero(3, 2)), Matrix::Zero(3, 3)) == 0.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::random_with_rank(6, 4, static_cast<Eigen::Index>(trial % 5), rng);
        for (const Matrix& p : {projector_onto_range(a), projector_onto_corange(a)}) {
            CHECK(norm2(p * p - p) < 1e-12);
            CHECK(norm2(p - p.adjoint()) < 1e-12);
        }
        CHECK(norm2(projector_onto_range(a) * a - a) < 1e-12);
        CHECK(projector_distance(projector_onto_corange(a), projector_onto_range(adjoint(a))) < 1e-12);
        CHECK(numerical_rank(projector_onto_range(a)) == numerical_rank(a));
    }
}

TEST_CASE("Hermitian PSD square root") {
    CHECK(max_abs_diff(hermitian_psd_sqrt(diag({4, 9})), diag({2, 3})) < 1e-14);
    CHECK(max_abs_diff(hermitian_psd_sqrt(Matrix::Zero(3, 3)), Matrix::Zero(3, 3)) == 0.0);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix g = oracle::random_gaussian(5, 5, rng);
        const Matrix p = g.adjoint() * g;
        const Matrix root = hermitian_psd_sqrt(p);
        CHECK(norm2(root * root - p) <= 1e-10 * (1.0 + norm2(p)));
        CHECK(norm2(root * p - p * root) <= 1e-10 * (1.0 + norm2(p)));
        CHECK(norm2(root - root.adjoint()) < 1e-12);
        CHECK(min_eigenvalue(root) >= -1e-12);
    }

    // Rank is preserved for a rank-deficient square.
    const Matrix low = oracle::random_with_rank(6, 3, 2, rng);
    CHECK(numerical_rank(hermitian_psd_sqrt(low * low.adjoint())) == 2);

    CHECK_THROWS_AS(hermitian_psd_sqrt(real_matrix({{0, 1}, {0, 0}})), Error);
    try {
        hermitian_psd_sqrt(diag({1, -1}));
        FAIL("expected NotPositiveSemidefinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPositiveSemidefinite);
    }
    // Within the floor: clamped, not rejected.
    CHECK(max_abs_diff(hermitian_psd_sqrt(diag({1, -1e-13})), diag({1, 0})) < 1e-15);
}

TEST_CASE("Loewner order") {
    const Matrix a = example2_a();
    const Matrix b = example2_b();
    CHECK(loewner_leq(a * a.adjoint(), b * b.adjoint()));
    CHECK(loewner_leq(diag({1, 2}), diag({1, 2})));
    CHECK_FALSE(loewner_leq(diag({2, 0}), diag({1, 0})));
    CHECK_THROWS_AS(loewner_leq(diag({1, 2}), diag({1, 2, 3})), Error);
    CHECK_THROWS_AS(loewner_leq(real_matrix({{0, 1}, {0, 0}}), diag({1, 1})), Error);
}

TEST_CASE("range and kernel inclusion predicates") {
    CHECK(range_included(example1_a(), example1_b()));
    CHECK(range_included(example2_a(), example2_b()));
    CHECK_FALSE(range_included(example2_b(), example2_a()));

    std::mt19937_64 rng(3);
    const Matrix any = oracle::random_gaussian(4, 3, rng);
    CHECK(range_included(any, identity(4)));
    CHECK_FALSE(range_included(unit_column(2, 1), unit_column(2, 0)));

    // kernel_included(b, a): N(b) inside N(a).
    CHECK(kernel_included(identity(3), any));
    CHECK(kernel_included(any, diag({0, 0, 0})));
    CHECK_FALSE(kernel_included(real_matrix({{0, 1}}), real_matrix({{1, 0}})));
    CHECK_FALSE(kernel_included(diag({1, 0}), identity(2)));

    CHECK(subspace_equal_ranges(example1_a(), example1_b()));
    CHECK_FALSE(subspace_equal_ranges(example2_a(), example2_b()));
    CHECK(subspace_equal_ranges(any, any));

    CHECK_THROWS_AS(range_included(identity(2), identity(3)), Error);
    CHECK_THROWS_AS(kernel_included(identity(2), identity(3)), Error);
}

TEST_CASE("range/kernel duality and majorization equivalence on generated pairs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 5);
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 5);
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 5);
        const Matrix b = oracle::random_with_rank(m, p, 1 + static_cast<Eigen::Index>(rng() % std::min(m, p)), rng);
        // Half of the numerators are drawn inside R(B), half freely.
        const Matrix a = trial % 2 == 0 ? Matrix(b * oracle::random_gaussian(p, n, rng))
                                        : oracle::random_gaussian(m, n, rng);
        const bool inclusion = range_included(a, b);
        CHECK(inclusion == kernel_included(adjoint(b), adjoint(a)));
        CHECK(inclusion == std::isfinite(oracle::mu_bisection(a, b)));
        if (trial % 2 == 0) {
            CHECK(inclusion);
        }
    }
}

TEST_CASE("tolerance configuration") {
    ToleranceConfig tol;
    CHECK(tol.rank_cutoff(3, 7) == doctest::Approx(7 * std::numeric_limits<double>::epsilon()));
    tol.rank_rel = 1e-6;
    CHECK(tol.rank_cutoff(3, 7) == 1e-6);
    tol.residual_rel = -1.0;
    CHECK_THROWS_AS(tol.validate(), Error);
}

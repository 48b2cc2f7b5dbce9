#include <gtest/gtest.h>

#include <cmath>

#include "levykf/errors.hpp"
#include "levykf/linalg.hpp"
#include "support/oracles.hpp"

namespace levykf {
namespace {

using testing::Gen;

Matrix triple_loop(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.entries()) m = std::max(m, std::abs(v));
    return m;
}

TEST(MatMul, IdentityIsNeutral) {
    const Matrix a{{1.5, -2.0}, {3.25, 4.0}};
    EXPECT_EQ(mat_mul(Matrix::identity(2), a), a);
}

TEST(MatMul, HandArithmetic) {
    const Matrix a{{1, 1}, {0, 1}};
    const Matrix b{{1}, {2}};
    EXPECT_EQ(mat_mul(a, b), (Matrix{{3}, {2}}));
}

TEST(MatMul, MatchesTripleLoopOracle) {
    Gen gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = gen.matrix(4, 4, 10.0);
        const Matrix b = gen.matrix(4, 4, 10.0);
        EXPECT_LE(max_abs_diff(mat_mul(a, b), triple_loop(a, b)), 1e-12);
    }
}

TEST(MatMul, ShapeMismatchNamesBothShapes) {
    try {
        mat_mul(Matrix(2, 3), Matrix(4, 5));
        FAIL() << "expected DimensionError";
    } catch (const DimensionError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("2x3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("4x5"), std::string::npos) << msg;
    }
}

TEST(Transpose, Examples) {
    EXPECT_EQ(transpose(Matrix::identity(3)), Matrix::identity(3));
    EXPECT_EQ(transpose(Matrix{{1, 2}, {3, 4}}), (Matrix{{1, 3}, {2, 4}}));
    Gen gen(3);
    const Matrix a = gen.matrix(3, 5);
    const Matrix t = transpose(a);
    EXPECT_EQ(t.rows(), 5u);
    EXPECT_EQ(t.cols(), 3u);
    EXPECT_EQ(transpose(t), a);
}

TEST(Trace, Examples) {
    EXPECT_EQ(trace(Matrix::identity(4)), 4.0);
    EXPECT_EQ(trace(Matrix{{2, 9}, {9, 3}}), 5.0);
    Gen gen(5);
    const Matrix a = gen.matrix(4, 4);
    double diag = 0.0;
    for (std::size_t i = 0; i < 4; ++i) diag += a(i, i);
    EXPECT_EQ(trace(a), diag);
    EXPECT_THROW(trace(Matrix(2, 3)), DimensionError);
}

TEST(SolveSpd, Examples) {
    const Matrix b{{1.0}, {-2.0}, {0.5}};
    EXPECT_EQ(solve_spd(Matrix::identity(3), b), b);
    EXPECT_EQ(solve_spd(scalar_mul(2.0, Matrix::identity(2)), Matrix::identity(2)),
              scalar_mul(0.5, Matrix::identity(2)));
}

TEST(SolveSpd, ResidualBelowTolerance) {
    Gen gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = gen.index(1, 8);
        const Matrix a = gen.spd(n);
        const Matrix b = gen.matrix(n, gen.index(1, 3), 5.0);
        const Matrix x = solve_spd(a, b);
        EXPECT_LE(max_abs_diff(mat_mul(a, x), b), 1e-8 * (1.0 + max_abs(b)));
    }
}

TEST(SolveSpd, NonPositivePivotReportsIndex) {
    // Rank one: the second pivot vanishes.
    const Matrix a{{1, 1}, {1, 1}};
    try {
        solve_spd(a, Matrix::identity(2));
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.pivot(), 1u);
    }
    try {
        solve_spd(Matrix{{-1, 0}, {0, 1}}, Matrix::identity(2));
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.pivot(), 0u);
    }
}

TEST(SolveSpd, RejectsBadInputs) {
    EXPECT_THROW(solve_spd(Matrix{{1, 0.5}, {0, 1}}, Matrix::identity(2)), SpecificationError);
    EXPECT_THROW(solve_spd(Matrix(2, 3), Matrix(2, 1)), DimensionError);
    EXPECT_THROW(solve_spd(Matrix::identity(2), Matrix(3, 1)), DimensionError);
}

TEST(Symmetrize, Examples) {
    const Matrix s{{2, 0.25}, {0.25, 7}};
    EXPECT_EQ(symmetrize(s), s);
    EXPECT_EQ(symmetrize(Matrix{{0, 1}, {0, 0}}), (Matrix{{0, 0.5}, {0.5, 0}}));
    Gen gen(23);
    const Matrix r = symmetrize(gen.matrix(5, 5));
    EXPECT_EQ(mat_sub(r, transpose(r)), Matrix::zeros(5, 5));
    EXPECT_THROW(symmetrize(Matrix(1, 2)), DimensionError);
}

TEST(Plumbing, ShapeChecked) {
    EXPECT_THROW(mat_add(Matrix(2, 2), Matrix(2, 3)), DimensionError);
    EXPECT_THROW(mat_sub(Matrix(3, 2), Matrix(2, 2)), DimensionError);
    EXPECT_THROW(mat_vec(Matrix(2, 3), Vector(2)), DimensionError);
    EXPECT_THROW(vec_add(Vector(2), Vector(3)), DimensionError);
    EXPECT_EQ(mat_vec(Matrix{{1, 2}, {3, 4}}, Vector{1, 1}), (Vector{3, 7}));
    EXPECT_EQ(scalar_mul(3.0, Matrix{{1, -2}}), (Matrix{{3, -6}}));
}

TEST(Matrix, RejectsNonFiniteAndBadCounts) {
    EXPECT_THROW(Matrix(1, 2, {1.0, std::nan("")}), SpecificationError);
    EXPECT_THROW(Matrix(1, 2, {1.0, INFINITY}), SpecificationError);
    EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    EXPECT_THROW(mat_mul(Matrix{{1e200}}, Matrix{{1e200}}), SpecificationError);
}

TEST(PsdFactor, HandlesSemidefiniteAndRejectsIndefinite) {
    EXPECT_EQ(psd_factor(Matrix::zeros(3, 3)), Matrix::zeros(3, 3));
    const Matrix rank_one = outer(Vector{1, 2, 3}, Vector{1, 2, 3});
    const Matrix l = psd_factor(rank_one);
    EXPECT_LE(max_abs_diff(mat_mul(l, transpose(l)), rank_one), 1e-12);
    EXPECT_TRUE(is_psd(Matrix::identity(2)));
    EXPECT_FALSE(is_psd(Matrix{{1, 0}, {0, -1}}));
    EXPECT_FALSE(is_psd(Matrix{{0, 1}, {1, 0}}));
    EXPECT_THROW(psd_factor(Matrix{{-1}}), SpecificationError);
}

// ---------------------------------------------------------------------------
// Properties

TEST(LinalgProperties, ProductIsAssociative) {
    Gen gen(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = gen.index(1, 6), q = gen.index(1, 6), r = gen.index(1, 6),
                          s = gen.index(1, 6);
        const Matrix a = gen.matrix(p, q, 1e3), b = gen.matrix(q, r, 1e3), c = gen.matrix(r, s, 1e3);
        const Matrix lhs = mat_mul(mat_mul(a, b), c);
        const Matrix rhs = mat_mul(a, mat_mul(b, c));
        const double scale = std::max(1.0, max_abs(lhs));
        EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10 * scale);
    }
}

TEST(LinalgProperties, TransposeOfProduct) {
    Gen gen(102);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = gen.index(1, 6), q = gen.index(1, 6), r = gen.index(1, 6);
        const Matrix a = gen.matrix(p, q), b = gen.matrix(q, r);
        EXPECT_LE(max_abs_diff(transpose(mat_mul(a, b)), mat_mul(transpose(b), transpose(a))),
                  1e-12);
    }
}

TEST(LinalgProperties, SolveRecoversSolution) {
    Gen gen(103);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = gen.index(1, 8);
        // Eigenvalues spread over [1, 1e6] via a random orthogonal basis.
        Eigen::MatrixXd m = testing::to_eigen(gen.matrix(n, n));
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        const Eigen::MatrixXd orth = qr.householderQ();
        Eigen::VectorXd eig(n);
        for (std::size_t i = 0; i < n; ++i) eig(i) = std::pow(10.0, gen.uniform(0.0, 6.0));
        Eigen::MatrixXd a_e = orth * eig.asDiagonal() * orth.transpose();
        a_e = 0.5 * (a_e + a_e.transpose()).eval();
        const Matrix a = testing::from_eigen(a_e);
        const Matrix x = gen.matrix(n, 1, 10.0);
        const Matrix recovered = solve_spd(a, mat_mul(a, x));
        EXPECT_LE(max_abs_diff(recovered, x), 1e-8 * std::max(1.0, max_abs(x)));
    }
}

TEST(LinalgProperties, TraceIsAdditive) {
    Gen gen(104);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = gen.index(1, 10);
        const Matrix a = gen.matrix(n, n, 10.0), b = gen.matrix(n, n, 10.0);
        EXPECT_NEAR(trace(mat_add(a, b)), trace(a) + trace(b), 1e-12 * (1.0 + n * 20.0));
    }
}

}  // namespace
}  // namespace levykf

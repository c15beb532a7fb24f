#include <gtest/gtest.h>

#include <random>

#include "wfax/numerics.hpp"

using namespace wfax;

TEST(Svd, IdentityAndDiagonal) {
  EXPECT_TRUE(svd(Matrix::Identity(2, 2)).singular_values.isApprox(Vector::Ones(2)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  const auto s = svd(d).singular_values;
  EXPECT_DOUBLE_EQ(s[0], 3.0);
  EXPECT_NEAR(s[1], 0.0, 1e-15);
}

TEST(Svd, TwoByTwoSingularValues) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  const auto s = svd(m).singular_values;
  // sqrt(15 +- sqrt(221))
  EXPECT_NEAR(s[0], 5.464985704219043, 1e-12);
  EXPECT_NEAR(s[1], 0.3659661906262571, 1e-12);
}

TEST(Svd, RandomReconstructionAndOrdering) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 50; ++rep) {
    Matrix m(5, 7);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    const auto d = svd(m);
    const Matrix back = d.u * d.singular_values.asDiagonal() * d.vt;
    EXPECT_LT((back - m).norm() / m.norm(), 1e-8);
    for (Eigen::Index i = 1; i < d.singular_values.size(); ++i)
      EXPECT_GE(d.singular_values[i - 1], d.singular_values[i]);
  }
}

TEST(Svd, RejectsNonFinite) {
  Matrix m = Matrix::Ones(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(m), NumericError);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(lstsq_cutoff(m, Matrix::Ones(2, 1), 1e-6), NumericError);
}

TEST(NumericRank, Examples) {
  Vector s(2);
  s << 1, 1;
  EXPECT_EQ(numeric_rank(s, 1e-6), 2u);
  s << 1, 1e-9;
  EXPECT_EQ(numeric_rank(s, 1e-6), 1u);
  s << 5.4650, 0.3660;  // ratio 0.067
  EXPECT_EQ(numeric_rank(s, 0.1), 1u);
  EXPECT_EQ(numeric_rank(s, 0.05), 2u);
}

TEST(NumericRank, ZeroMatrixHasRankZero) {
  for (double tau : {1e-12, 1e-3, 0.5, 2.0}) EXPECT_EQ(matrix_rank(Matrix::Zero(3, 4), tau), 0u);
}

TEST(NumericRank, NonPositiveToleranceThrows) {
  EXPECT_THROW(numeric_rank(Vector::Ones(2), 0.0), NumericError);
  EXPECT_THROW(numeric_rank(Vector::Ones(2), -1.0), NumericError);
}

TEST(NumericRank, RelativeToLargestValue) {
  Vector s(3);
  s << 1.0, 0.3, 0.01;
  const Vector scaled = 1e6 * s;
  for (double tau : {1e-3, 0.05, 0.5}) EXPECT_EQ(numeric_rank(s, tau), numeric_rank(scaled, tau));
}

TEST(NumericRank, NonincreasingInTolerance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 100; ++rep) {
    Vector s(6);
    for (auto& x : s) x = std::pow(10.0, -8.0 * u(rng));
    std::size_t prev = 7;
    for (double tau = 1e-10; tau < 2; tau *= 3) {
      const auto r = numeric_rank(s, tau);
      EXPECT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(Lstsq, IdentitySystem) {
  Matrix b(2, 1);
  b << 1, 2;
  for (double tau : {1e-12, 1e-3, 0.9}) {
    const auto r = lstsq_cutoff(Matrix::Identity(2, 2), b, tau);
    EXPECT_TRUE(r.x.isApprox(b));
    EXPECT_NEAR(r.residual, 0.0, 1e-15);
  }
}

TEST(Lstsq, OverdeterminedColumn) {
  Matrix a(2, 1), b(2, 1);
  a << 1, 1;
  b << 1, 3;
  const auto r = lstsq_cutoff(a, b, 1e-6);
  EXPECT_NEAR(r.x(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(r.residual, std::sqrt(2.0), 1e-14);
}

TEST(Lstsq, RankDeficientGivesMinimumNorm) {
  Matrix a = Matrix::Ones(2, 2), b(2, 1);
  b << 2, 2;
  const auto r = lstsq_cutoff(a, b, 1e-6);
  EXPECT_NEAR(r.x(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(r.x(1, 0), 1.0, 1e-14);
  EXPECT_EQ(r.rank, 1u);
}

TEST(Lstsq, RowMismatchThrows) {
  EXPECT_THROW(lstsq_cutoff(Matrix::Ones(3, 2), Matrix::Ones(2, 1), 1e-6), DimensionError);
}

TEST(Lstsq, MatchesDirectSolveOnFullRank) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 30; ++rep) {
    Matrix a(4, 4), b(4, 2);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g(rng);
    a += 4.0 * Matrix::Identity(4, 4);
    const Matrix direct = a.partialPivLu().solve(b);
    EXPECT_LT((lstsq_cutoff(a, b, 1e-15).x - direct).cwiseAbs().maxCoeff(), 1e-8);
  }
}

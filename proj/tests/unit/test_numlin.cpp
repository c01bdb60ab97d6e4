#include <gtest/gtest.h>

#include <algorithm>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"

using namespace vsx;

namespace {

const TolerancePolicy kTol{};

Matrix random_rank(Rng& rng, Index rows, Index cols, Index rank) {
  return rng.matrix(rows, rank, Field::Complex) * rng.matrix(rank, cols, Field::Complex);
}

}  // namespace

TEST(NumericalRank, Basics) {
  EXPECT_EQ(numlin::numerical_rank<cplx>(Matrix::Identity(3, 3), kTol), 3);
  EXPECT_EQ(numlin::numerical_rank<cplx>(Matrix::Zero(4, 2), kTol), 0);
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, 1e-3, 1e-12;
  EXPECT_EQ(numlin::numerical_rank<cplx>(d, kTol), 2);
}

TEST(NumericalRank, RealScalarsAgree) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 2, 4, 6;
  EXPECT_EQ(numlin::numerical_rank<double>(m, kTol), 1);
}

TEST(KernelBasis, Examples) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const Matrix k = numlin::kernel_basis<cplx>(m, kTol);
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(k(0, 0)), 0.0, 1e-14);

  Matrix inv(2, 2);
  inv << 1.0, 2.0, 3.0, 4.0;
  EXPECT_EQ(numlin::kernel_basis<cplx>(inv, kTol).cols(), 0);
}

TEST(KernelBasis, RankPlusNullityEqualsColumns) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = 2 + static_cast<Index>(rng.uniform_index(6));
    const Index cols = 2 + static_cast<Index>(rng.uniform_index(6));
    const Index rank = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(std::min(rows, cols))));
    const Matrix m = random_rank(rng, rows, cols, rank);
    const Matrix k = numlin::kernel_basis<cplx>(m, kTol);
    EXPECT_EQ(numlin::numerical_rank<cplx>(m, kTol) + k.cols(), cols);
    EXPECT_EQ(numlin::numerical_rank<cplx>(m, kTol), rank);
    if (k.cols() > 0) {
      EXPECT_LE((m * k).norm(), 1e-10 * m.norm());
      EXPECT_LE((k.adjoint() * k - Matrix::Identity(k.cols(), k.cols())).norm(), 1e-10);
    }
  }
}

TEST(KernelBasis, FullRowRankWide) {
  Rng rng(5);
  const Matrix m = random_rank(rng, 5, 8, 5);
  const Matrix k = numlin::kernel_basis<cplx>(m, kTol);
  EXPECT_EQ(k.cols(), 3);
  EXPECT_LE((m * k).norm(), 1e-10);
}

TEST(Pseudoinverse, Examples) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  const Matrix p = numlin::pseudoinverse<cplx>(d, kTol);
  EXPECT_NEAR(std::abs(p(0, 0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(p.norm(), 0.5, 1e-15);

  Rng rng(3);
  const Eigen::HouseholderQR<Matrix> qr(rng.matrix(4, 4, Field::Complex));
  const Matrix q = qr.householderQ();
  EXPECT_LE((numlin::pseudoinverse<cplx>(q, kTol) - q.adjoint()).norm(), 1e-12);
}

TEST(Pseudoinverse, PenroseIdentities) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Index rows = 2 + static_cast<Index>(rng.uniform_index(6));
    const Index cols = 2 + static_cast<Index>(rng.uniform_index(6));
    const Index rank = 1 + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(std::min(rows, cols))));
    const Matrix a = random_rank(rng, rows, cols, rank);
    const Matrix p = numlin::pseudoinverse<cplx>(a, kTol);
    const double scale = a.norm() * p.norm();
    EXPECT_LE((a * p * a - a).norm(), 1e-10 * a.norm() * scale);
    EXPECT_LE((p * a * p - p).norm(), 1e-10 * p.norm() * scale);
    EXPECT_LE((Matrix(a * p).adjoint() - a * p).norm(), 1e-10 * scale);
    EXPECT_LE((Matrix(p * a).adjoint() - p * a).norm(), 1e-10 * scale);
  }
}

TEST(EigPairs, Diagonal) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, 2.0, 3.0;
  auto pairs = numlin::eig_pairs(d);
  ASSERT_EQ(pairs.size(), 3u);
  for (const auto& p : pairs) {
    const double lambda = p.value.real();
    const Index k = static_cast<Index>(std::lround(lambda)) - 1;
    ASSERT_GE(k, 0);
    EXPECT_NEAR(std::abs(p.vector(k)), 1.0, 1e-12);
  }
}

TEST(EigPairs, RotationHasImaginaryPair) {
  Matrix r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  auto pairs = numlin::eig_pairs(r);
  ASSERT_EQ(pairs.size(), 2u);
  std::vector<double> ims{pairs[0].value.imag(), pairs[1].value.imag()};
  std::sort(ims.begin(), ims.end());
  EXPECT_NEAR(ims[0], -1.0, 1e-12);
  EXPECT_NEAR(ims[1], 1.0, 1e-12);
}

TEST(EigPairs, CompanionMatrixRoots) {
  // x^2 - 3x + 2 = (x - 1)(x - 2)
  Matrix c(2, 2);
  c << 0.0, -2.0, 1.0, 3.0;
  auto pairs = numlin::eig_pairs(c);
  std::vector<double> roots;
  for (const auto& p : pairs) {
    roots.push_back(p.value.real());
    EXPECT_LE((c * p.vector - p.value * p.vector).norm(), 1e-12);
  }
  std::sort(roots.begin(), roots.end());
  EXPECT_NEAR(roots[0], 1.0, 1e-12);
  EXPECT_NEAR(roots[1], 2.0, 1e-12);
}

TEST(EigPairs, ResidualOnRandomMatrices) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = rng.matrix(6, 6, Field::Complex);
    for (const auto& p : numlin::eig_pairs(m)) {
      EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
      EXPECT_LE((m * p.vector - p.value * p.vector).norm(), 1e-10 * m.norm());
    }
  }
}

TEST(ColumnSpace, Examples) {
  Matrix m = Matrix::Zero(3, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  const Matrix b = numlin::column_space_basis<cplx>(m, kTol);
  ASSERT_EQ(b.cols(), 1);
  EXPECT_NEAR(std::abs(b(0, 0)), 1.0, 1e-14);
  EXPECT_EQ(numlin::column_space_basis<cplx>(Matrix::Zero(3, 3), kTol).cols(), 0);

  Rng rng(4);
  const Matrix g = rng.matrix(7, 4, Field::Complex);
  EXPECT_GT(std::abs((g.adjoint() * g).determinant()), 0.0);
  EXPECT_EQ(numlin::column_space_basis<cplx>(g, kTol).cols(), 4);
}

TEST(ColumnSpace, GramRouteMatchesSvdRoute) {
  Rng rng(12);
  const Matrix m = random_rank(rng, 9, 30, 4);
  const Matrix a = numlin::column_space_basis<cplx>(m, kTol);
  const Matrix b = numlin::column_space_basis_gram(m, kTol);
  ASSERT_EQ(a.cols(), 4);
  ASSERT_EQ(b.cols(), 4);
  // equal projectors
  EXPECT_LE((a * a.adjoint() - b * b.adjoint()).norm(), 1e-8);
}

TEST(NormalizePhase, FirstSignificantEntryBecomesPositiveReal) {
  Vector v(3);
  v << cplx(0.0, 0.0), cplx(0.0, -2.0), cplx(1.0, 1.0);
  const Vector before = v;
  const cplx phase = numlin::normalize_phase(v);
  EXPECT_NEAR(v(1).imag(), 0.0, 1e-15);
  EXPECT_GT(v(1).real(), 0.0);
  EXPECT_LE((phase * v - before).norm(), 1e-14);
}

TEST(LineDistance, ScaleInvariant) {
  Rng rng(1);
  const Vector a = rng.vector(5, Field::Complex);
  EXPECT_NEAR(numlin::line_distance(a, cplx(0.0, 3.0) * a), 0.0, 1e-12);
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  EXPECT_NEAR(numlin::line_distance(e1, e2), 1.0, 1e-15);
}

#include <gtest/gtest.h>

#include "vsx/decompose.hpp"
#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"

using namespace vsx;

namespace {

const TolerancePolicy kTol{};

Vector unit(Index n, Index k) {
  Vector e = Vector::Zero(n);
  e(k) = 1.0;
  return e;
}

// Row-major outer product of the given factors.
Vector outer(const std::vector<Vector>& factors) {
  Vector out = Vector::Ones(1);
  for (const auto& f : factors) {
    Vector next(out.size() * f.size());
    for (Index i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = std::move(next);
  }
  return out;
}

struct PlantedCp {
  DenseTensor t;
  std::vector<std::vector<Vector>> terms;
};

PlantedCp planted_cp(std::uint64_t seed, std::vector<Index> dims, int rank, Field field = Field::Complex) {
  Rng rng(seed);
  PlantedCp p;
  Index total = 1;
  for (Index d : dims) total *= d;
  p.t = DenseTensor{dims, Vector::Zero(total), field};
  for (int a = 0; a < rank; ++a) {
    std::vector<Vector> factors;
    for (Index d : dims) factors.push_back(rng.vector(d, field));
    p.t.entries += outer(factors);
    p.terms.push_back(std::move(factors));
  }
  return p;
}

// Each planted term has a recovered term with the same lines in every mode.
bool same_lines(const std::vector<std::vector<Vector>>& planted, const TensorDecomposition& d, double tol) {
  if (planted.size() != d.terms.size()) return false;
  for (const auto& p : planted) {
    bool hit = false;
    for (const auto& term : d.terms) {
      if (term.factors.size() != p.size()) continue;
      bool all = true;
      for (std::size_t k = 0; k < p.size(); ++k) all = all && numlin::line_distance(p[k], term.factors[k]) < tol;
      hit = hit || all;
    }
    if (!hit) return false;
  }
  return true;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vsx::Error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(XW, SingleTerm) {
  Matrix t = Matrix::Zero(4, 1);
  t(0, 0) = 1.0;
  const auto d = xw_decompose(t, {Determinantal{2, 2, 1}}, 0, kTol);
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_LE((d.terms[0].v - unit(4, 0)).norm(), 1e-12);
  EXPECT_NEAR(std::abs(d.terms[0].w(0) - 1.0), 0.0, 1e-12);
  EXPECT_LE(d.residual, 1e-12);
}

TEST(XW, PlantedRankOneMatricesWithGaussianW) {
  Rng rng(3);
  std::vector<Vector> vs, ws;
  Matrix t = Matrix::Zero(25, 4);
  for (int a = 0; a < 4; ++a) {
    vs.push_back(outer({rng.vector(5, Field::Complex), rng.vector(5, Field::Complex)}));
    ws.push_back(rng.vector(4, Field::Complex));
    t += vs.back() * ws.back().transpose();
  }
  const auto d = xw_decompose(t, {Determinantal{5, 5, 1}}, 1, kTol);
  ASSERT_EQ(d.terms.size(), 4u);
  EXPECT_LE(d.residual, 1e-8);
  for (int a = 0; a < 4; ++a) {
    const Matrix planted = vs[static_cast<std::size_t>(a)] * ws[static_cast<std::size_t>(a)].transpose();
    double best = 1e300;
    for (const auto& term : d.terms) best = std::min(best, (term.v * term.w.transpose() - planted).norm() / planted.norm());
    EXPECT_LE(best, 1e-8);
  }
  for (std::size_t k = 1; k < d.terms.size(); ++k)
    EXPECT_GE(d.terms[k - 1].v.norm() * d.terms[k - 1].w.norm(), d.terms[k].v.norm() * d.terms[k].w.norm());
}

TEST(XW, RankTwoSlab) {
  Rng rng(4);
  const Matrix m = rng.matrix(5, 2, Field::Complex) * rng.matrix(2, 5, Field::Complex);
  Matrix t(25, 1);
  for (Index i = 0; i < 5; ++i) t.block(i * 5, 0, 5, 1) = m.row(i).transpose();
  const auto d = xw_decompose(t, {Determinantal{5, 5, 2}}, 0, kTol);
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_LE(numlin::line_distance(d.terms[0].v, t.col(0)), 1e-8);
}

TEST(XW, RejectsReducibleAndMismatchedSpecs) {
  const Matrix t = Matrix::Identity(8, 1);
  EXPECT_EQ(code_of([&] { xw_decompose(t, {Biseparable{{2, 2, 2}}}, 0, kTol); }), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of([&] { xw_decompose(t, {Determinantal{2, 2, 1}}, 0, kTol); }), ErrorCode::DimensionMismatch);
}

TEST(Tensor3, Diagonal) {
  DenseTensor t{{2, 2, 2}, Vector::Zero(8), Field::Real};
  t.entries(0) = 1.0;
  t.entries(7) = 1.0;
  const auto d = tensor3_decompose(t, 0, kTol);
  ASSERT_EQ(d.terms.size(), 2u);
  EXPECT_LE(d.residual, 1e-12);
  EXPECT_TRUE(same_lines({{unit(2, 0), unit(2, 0), unit(2, 0)}, {unit(2, 1), unit(2, 1), unit(2, 1)}}, d, 1e-12));
  for (const auto& term : d.terms) EXPECT_NEAR(std::abs(term.scale - 1.0), 0.0, 1e-12);
  EXPECT_LE((reconstruct(d) - t.entries).norm(), 1e-12);
}

TEST(Tensor3, AtTheBound) {
  // R = 9 = (7 - 1)(7 - 1) / 4 = n3
  const PlantedCp p = planted_cp(8, {7, 7, 9}, 9);
  const auto d = tensor3_decompose(p.t, 2, kTol);
  EXPECT_LE(d.residual, 1e-8);
  EXPECT_TRUE(same_lines(p.terms, d, 1e-6));
}

TEST(Tensor3, AboveTheBoundNeverAnswersWrongly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PlantedCp p = planted_cp(40 + seed, {7, 7, 9}, 12);
    try {
      const auto d = tensor3_decompose(p.t, seed, kTol);
      EXPECT_TRUE(same_lines(p.terms, d, 1e-6));
    } catch (const Error& e) {
      EXPECT_TRUE(e.algorithmic()) << e.what();
    }
  }
}

TEST(Tensorm, FourWaySmall) {
  const PlantedCp p = planted_cp(9, {3, 3, 3, 3}, 2);
  const auto d = tensorm_decompose(p.t, GroupedShape::balanced(4), 0, kTol);
  ASSERT_EQ(d.factor_modes.size(), 4u);
  EXPECT_LE(d.residual, 1e-8);
  EXPECT_TRUE(same_lines(p.terms, d, 1e-6));
}

TEST(Tensorm, FourWayAtTheBound) {
  // R = 9 = (7 - 1)^2 / 4
  const PlantedCp p = planted_cp(10, {7, 7, 7, 7}, 9);
  const auto d = tensorm_decompose(p.t, GroupedShape::balanced(4), 1, kTol);
  EXPECT_LE(d.residual, 1e-8);
  EXPECT_TRUE(same_lines(p.terms, d, 1e-6));
}

TEST(Tensorm, GroupingsAgreeOnOrderThree) {
  const PlantedCp p = planted_cp(11, {4, 4, 4}, 3);
  const auto a = tensorm_decompose(p.t, {{0, 1}, {2}}, 0, kTol);
  const auto b = tensorm_decompose(p.t, {{1, 2}, {0}}, 0, kTol);
  const auto c = tensor3_decompose(p.t, 0, kTol);
  std::vector<std::vector<Vector>> found;
  for (const auto& term : a.terms) found.push_back(term.factors);
  EXPECT_TRUE(same_lines(found, b, 1e-8));
  EXPECT_TRUE(same_lines(found, c, 1e-8));
}

TEST(Tensorm, NonProductWSide) {
  // w-side legs are generic 2 x 2 matrices, not products
  Rng rng(12);
  DenseTensor t{{3, 3, 2, 2}, Vector::Zero(36), Field::Complex};
  for (int a = 0; a < 2; ++a) t.entries += outer({rng.vector(3, Field::Complex), rng.vector(3, Field::Complex), rng.vector(4, Field::Complex)});
  EXPECT_EQ(code_of([&] { tensorm_decompose(t, {{0, 1}, {2, 3}}, 0, kTol); }), ErrorCode::NonProductW);
  const auto d = tensorm_decompose(t, {{0, 1}, {2, 3}}, 0, kTol, false);
  ASSERT_EQ(d.factor_modes.size(), 3u);
  EXPECT_EQ(d.factor_modes.back(), (std::vector<int>{2, 3}));
  EXPECT_LE(d.residual, 1e-8);
}

TEST(Tensorm, InvalidGrouping) {
  const PlantedCp p = planted_cp(13, {3, 3, 3}, 1);
  EXPECT_THROW(tensorm_decompose(p.t, {{0}, {1, 2}}, 0, kTol), Error);
  EXPECT_THROW(tensorm_decompose(p.t, {{0, 1}, {1}}, 0, kTol), Error);
}

TEST(Waring, TwoCoordinatePowers) {
  DenseTensor t{{2, 2, 2, 2}, Vector::Zero(16), Field::Real};
  t.entries(0) = 1.0;
  t.entries(15) = 1.0;
  const auto d = waring_decompose(t, 0, kTol);
  EXPECT_EQ(d.power, 4);
  ASSERT_EQ(d.terms.size(), 2u);
  EXPECT_TRUE(same_lines({{unit(2, 0)}, {unit(2, 1)}}, d, 1e-10));
  for (const auto& term : d.terms) EXPECT_NEAR(std::abs(term.scale - 1.0), 0.0, 1e-10);
}

TEST(Waring, NegationFlipsCoefficients) {
  Rng rng(14);
  DenseTensor t{{4, 4, 4, 4}, Vector::Zero(256), Field::Real};
  for (int a = 0; a < 2; ++a) t.entries += (1.0 + a) * kron_power(rng.vector(4, Field::Real), 4);
  const auto d = waring_decompose(t, 0, kTol);
  DenseTensor neg = t;
  neg.entries = -t.entries;
  const auto e = waring_decompose(neg, 0, kTol);
  ASSERT_EQ(d.terms.size(), e.terms.size());
  for (std::size_t k = 0; k < d.terms.size(); ++k) {
    EXPECT_LE(numlin::line_distance(d.terms[k].factors[0], e.terms[k].factors[0]), 1e-10);
    EXPECT_NEAR(std::abs(d.terms[k].scale + e.terms[k].scale), 0.0, 1e-8);
  }
}

TEST(Waring, RejectsAsymmetricTensor) {
  DenseTensor t{{2, 2, 2}, Vector::Zero(8), Field::Real};
  t.entries(1) = 1.0;  // position (0,0,1) only
  EXPECT_EQ(code_of([&] { waring_decompose(t, 0, kTol); }), ErrorCode::NotSymmetric);
}

TEST(Decompositions, DeterministicAndSorted) {
  const PlantedCp p = planted_cp(15, {5, 5, 4}, 4);
  const auto a = tensor3_decompose(p.t, 3, kTol);
  const auto b = tensor3_decompose(p.t, 3, kTol);
  ASSERT_EQ(a.terms.size(), b.terms.size());
  for (std::size_t k = 0; k < a.terms.size(); ++k) {
    EXPECT_EQ(a.terms[k].scale, b.terms[k].scale);
    for (std::size_t f = 0; f < a.terms[k].factors.size(); ++f) EXPECT_TRUE(a.terms[k].factors[f] == b.terms[k].factors[f]);
  }
  for (std::size_t k = 1; k < a.terms.size(); ++k) EXPECT_GE(std::abs(a.terms[k - 1].scale), std::abs(a.terms[k].scale));
  for (const auto& term : a.terms)
    for (const auto& f : term.factors) EXPECT_NEAR(f.norm(), 1.0, 1e-12);
}

TEST(Aided, SingleRankTwoSlab) {
  Rng rng(16);
  const Matrix m = rng.matrix(3, 2, Field::Complex) * rng.matrix(2, 3, Field::Complex);
  const Vector w = rng.vector(2, Field::Complex);
  DenseTensor t{{3, 3, 2}, Vector::Zero(18), Field::Complex};
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) t.entries.segment((i * 3 + j) * 2, 2) = m(i, j) * w;
  const auto d = aided_decompose(t, 2, 0, kTol);
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_NEAR(d.terms[0].slab.norm(), 1.0, 1e-12);
  Vector flat_found(9), flat_planted(9);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      flat_found(i * 3 + j) = d.terms[0].slab(i, j);
      flat_planted(i * 3 + j) = m(i, j);
    }
  EXPECT_LE(numlin::line_distance(flat_found, flat_planted), 1e-8);
  EXPECT_LE(d.residual, 1e-8);
}

TEST(DenseTensor, Validation) {
  DenseTensor bad{{2, 2}, Vector::Zero(3), Field::Complex};
  EXPECT_THROW(bad.validate(), Error);
}

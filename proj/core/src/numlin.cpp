#include "vsx/numlin.hpp"

#include <algorithm>
#include <cmath>

#include "vsx/error.hpp"

namespace vsx::numlin {

namespace {

template <class Scalar>
Index count_above(const Eigen::VectorXd& sv, double rel) {
  if (sv.size() == 0 || !(sv(0) > 0.0)) return 0;
  const double cut = rel * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

template <class Scalar>
void require_finite(const Mat<Scalar>& m) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

}  // namespace

template <class Scalar>
Eigen::VectorXd singular_values(const Mat<Scalar>& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  require_finite(m);
  Eigen::BDCSVD<Mat<Scalar>> svd(m);
  return svd.singularValues();
}

template <class Scalar>
Index numerical_rank(const Mat<Scalar>& m, const TolerancePolicy& tol) {
  return count_above<Scalar>(singular_values(m), tol.rank_rel_tol);
}

template <class Scalar>
Mat<Scalar> kernel_basis(const Mat<Scalar>& m, const TolerancePolicy& tol) {
  const Index cols = m.cols();
  if (cols == 0) return Mat<Scalar>(0, 0);
  if (m.rows() == 0) return Mat<Scalar>::Identity(cols, cols);
  require_finite(m);
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullV);
  const Index r = count_above<Scalar>(svd.singularValues(), tol.rank_rel_tol);
  return svd.matrixV().rightCols(cols - r);
}

template <class Scalar>
Mat<Scalar> pseudoinverse(const Mat<Scalar>& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return Mat<Scalar>::Zero(m.cols(), m.rows());
  require_finite(m);
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const Index r = count_above<Scalar>(sv, tol.rank_rel_tol);
  Mat<Scalar> v = svd.matrixV().leftCols(r);
  for (Index i = 0; i < r; ++i) v.col(i) /= sv(i);
  return v * svd.matrixU().leftCols(r).adjoint();
}

template <class Scalar>
Mat<Scalar> column_space_basis(const Mat<Scalar>& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return Mat<Scalar>(m.rows(), 0);
  require_finite(m);
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeThinU);
  const Index r = count_above<Scalar>(svd.singularValues(), tol.rank_rel_tol);
  return svd.matrixU().leftCols(r);
}

Matrix column_space_basis_gram(const Matrix& m, const TolerancePolicy& tol) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  require_finite(m);
  if (m.rows() > m.cols()) {
    // Tall: the column space is m times the row-space basis of the small Gram.
    Matrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const double top = lam.maxCoeff();
    if (!(top > 0.0)) return Matrix(m.rows(), 0);
    std::vector<Index> keep;
    for (Index i = 0; i < lam.size(); ++i)
      if (lam(i) > 1e-12 * top) keep.push_back(i);
    Matrix q(m.cols(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Index>(k)) = eig.eigenvectors().col(keep[k]);
    Matrix projected = m * q;
    return column_space_basis<cplx>(projected, tol);
  }
  Matrix gram = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double top = lam.maxCoeff();
  if (!(top > 0.0)) return Matrix(m.rows(), 0);
  std::vector<Index> keep;
  for (Index i = lam.size() - 1; i >= 0; --i)
    if (lam(i) > 1e-12 * top) keep.push_back(i);
  Matrix q(m.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) q.col(static_cast<Index>(k)) = eig.eigenvectors().col(keep[k]);
  // Settle the rank on the (small) projected matrix with a proper SVD.
  Matrix projected = q.adjoint() * m;
  Matrix inner = column_space_basis<cplx>(projected, tol);
  return q * inner;
}

std::vector<EigPair> eig_pairs(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "eig_pairs needs a square matrix");
  require_finite(m);
  std::vector<EigPair> out;
  if (m.size() == 0) return out;
  Eigen::ComplexEigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigFailure, "eigensolver did not converge");
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    Vector v = solver.eigenvectors().col(i);
    const double nv = v.norm();
    if (nv > 0.0) v /= nv;
    out.push_back({solver.eigenvalues()(i), std::move(v)});
  }
  return out;
}

cplx normalize_phase(Vector& v, double rel) {
  const double nv = v.norm();
  if (!(nv > 0.0)) return cplx(0.0, 0.0);
  Index pivot = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > rel * nv) {
      pivot = i;
      break;
    }
  }
  const cplx phase = v(pivot) / std::abs(v(pivot));
  const cplx c = nv * phase;
  v /= c;
  v(pivot) = cplx(v(pivot).real(), 0.0);
  return c;
}

double line_distance(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) return 1.0;
  const double c = std::min(1.0, std::abs(a.dot(b)) / (na * nb));
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

#define VSX_NUMLIN_INSTANTIATE(S)                                                   \
  template Eigen::VectorXd singular_values<S>(const Mat<S>&);                      \
  template Index numerical_rank<S>(const Mat<S>&, const TolerancePolicy&);         \
  template Mat<S> kernel_basis<S>(const Mat<S>&, const TolerancePolicy&);          \
  template Mat<S> pseudoinverse<S>(const Mat<S>&, const TolerancePolicy&);         \
  template Mat<S> column_space_basis<S>(const Mat<S>&, const TolerancePolicy&);

VSX_NUMLIN_INSTANTIATE(double)
VSX_NUMLIN_INSTANTIATE(cplx)

#undef VSX_NUMLIN_INSTANTIATE

}  // namespace vsx::numlin

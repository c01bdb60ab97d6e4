#pragma once

#include <vector>

#include "vsx/types.hpp"

/// Dense linear-algebra kernel shared by every module. All routines are pure
/// functions of their arguments and are instantiated for real and complex
/// scalars.
namespace vsx::numlin {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Singular values in non-increasing order.
template <class Scalar>
Eigen::VectorXd singular_values(const Mat<Scalar>& m);

/// #{i : sigma_i > rank_rel_tol * sigma_1}; zero for the zero matrix.
template <class Scalar>
Index numerical_rank(const Mat<Scalar>& m, const TolerancePolicy& tol);

/// Orthonormal basis (as columns) of the numerical null space of `m`.
template <class Scalar>
Mat<Scalar> kernel_basis(const Mat<Scalar>& m, const TolerancePolicy& tol);

/// Moore-Penrose pseudoinverse with sub-threshold singular values dropped.
template <class Scalar>
Mat<Scalar> pseudoinverse(const Mat<Scalar>& m, const TolerancePolicy& tol);

/// Orthonormal basis (as columns) of the numerical column space of `m`.
template <class Scalar>
Mat<Scalar> column_space_basis(const Mat<Scalar>& m, const TolerancePolicy& tol);

/// Column space of a very wide or very tall matrix through its Gram matrix,
/// followed by an SVD of the projected matrix to settle the rank. Directions
/// with sigma_i / sigma_1 below ~1e-6 may be dropped by the Gram stage.
Matrix column_space_basis_gram(const Matrix& m, const TolerancePolicy& tol);

struct EigPair {
  cplx value;
  Vector vector;  ///< unit 2-norm
};

/// Eigenpairs over C (regardless of the data's field), order unspecified.
/// Throws Error(EigFailure) when the backend does not converge.
std::vector<EigPair> eig_pairs(const Matrix& m);

/// Scales `v` to unit 2-norm and rotates its phase so that the first entry
/// with |v_i| > rel * ||v|| is positive real. Returns the factor `c` with
/// v_original = c * v_normalized; zero vectors are returned unchanged, c = 0.
cplx normalize_phase(Vector& v, double rel = 1e-6);

/// sin of the angle between the lines spanned by a and b (0 when parallel).
double line_distance(const Vector& a, const Vector& b);

}  // namespace vsx::numlin

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vsx/types.hpp"

namespace vsx {

/// Exact binomial coefficient; throws Error(Overflow) past int64.
std::int64_t binomial(std::int64_t n, std::int64_t k);

/// Non-decreasing multi-indices (a_1 <= ... <= a_d) over {0..n-1}, enumerated
/// lexicographically. Positions are computed in O(d) from a prefix table.
class MultiIndexSpace {
 public:
  MultiIndexSpace(Index n, int degree);

  Index n() const noexcept { return n_; }
  int degree() const noexcept { return degree_; }
  Index size() const noexcept { return size_; }

  /// Position of a sorted multi-index.
  Index position(std::span<const int> sorted) const;
  /// Position of an arbitrary tuple (sorted internally).
  Index position_unsorted(std::span<const int> tuple) const;

  std::vector<int> at(Index pos) const;
  std::vector<int> first() const { return std::vector<int>(static_cast<std::size_t>(degree_), 0); }
  /// Advances to the lexicographic successor; returns false past the end.
  bool next(std::vector<int>& idx) const;

  /// d! / prod(mult_k!) for a sorted multi-index.
  static double multiplicity(std::span<const int> sorted);

 private:
  Index n_;
  int degree_;
  Index size_;
  // prefix_[len][v] = sum over start < v of C(n - start + len - 1, len)
  std::vector<std::vector<Index>> prefix_;
};

/// All multi-indices of S^d(F^n) in enumeration order.
std::vector<std::vector<int>> enumerate_multi_indices(Index n, int degree);

/// Element of S^d(F^n). `coeffs[pos]` is the value of the full tensor at every
/// position whose sorted index is `space.at(pos)`.
class SymTensor {
 public:
  SymTensor(Index n, int degree);
  SymTensor(Index n, int degree, Vector coeffs);

  Index n() const noexcept { return space_.n(); }
  int degree() const noexcept { return space_.degree(); }
  const MultiIndexSpace& space() const noexcept { return space_; }
  const Vector& coeffs() const noexcept { return coeffs_; }
  Vector& coeffs() noexcept { return coeffs_; }

  cplx at(std::span<const int> tuple) const { return coeffs_(space_.position_unsorted(tuple)); }

  SymTensor& operator+=(const SymTensor& other);
  SymTensor& operator*=(cplx c);

 private:
  MultiIndexSpace space_;
  Vector coeffs_;
};

/// Hermitian inner product of the embedded full tensors.
cplx inner(const SymTensor& x, const SymTensor& y);

/// Symmetric projection of v_1 (x) ... (x) v_d.
SymTensor vee(std::span<const Vector> vectors);
/// v^{(x)d}: coefficient at a is prod_k v[a_k].
SymTensor power(const Vector& v, int degree);

/// Coefficients of every u_{a_1} v ... v u_{a_d}, a in [R]^{vd}, as columns
/// (in enumerate_multi_indices(R, d) order). Throws Error(DegenerateBasis)
/// when the basis columns are numerically dependent.
Matrix lift_subspace(const Matrix& basis, int degree, const TolerancePolicy& tol);

/// Contraction of the first `ell` factors with v^{(x)ell} under the bilinear
/// pairing sum_k v_k w_k.
SymTensor hook(const SymTensor& u, const Vector& v, int ell);

/// n x n^{d-1} flattening: first factor against the rest (row-major).
Matrix as_mode_matrix(const SymTensor& u);

/// Dense full tensor (row-major, length n^d). Intended for small cases.
Vector to_full(const SymTensor& u);

/// Weights sqrt(m(a)) that make compressed coordinates isometric.
Eigen::VectorXd isometric_weights(const MultiIndexSpace& space);

/// Row-major Kronecker power v (x) ... (x) v (`count` factors).
Vector kron_power(const Vector& v, int count);

}  // namespace vsx

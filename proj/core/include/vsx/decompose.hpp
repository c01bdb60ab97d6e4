#pragma once

#include <cstdint>
#include <vector>

#include "vsx/intersect.hpp"
#include "vsx/varieties.hpp"

namespace vsx {

/// Dense order-m tensor, entries row-major over `dims`.
struct DenseTensor {
  std::vector<Index> dims;
  Vector entries;
  Field field = Field::Complex;

  Index order() const noexcept { return static_cast<Index>(dims.size()); }
  /// Throws Error(DimensionMismatch) when entries.size() != prod(dims).
  void validate() const;
};

struct XWTerm {
  Vector v;  ///< point of X, unit norm
  Vector w;
};

struct XWDecomposition {
  std::vector<XWTerm> terms;  ///< sorted by ||v|| ||w|| descending
  double residual = 0.0;
  UniquenessCertificate certificate;
};

/// T viewed as an element of V (x) W (an n x m matrix), decomposed as
/// sum v_i w_i^T with v_i in the (irreducible) variety `spec` on V.
XWDecomposition xw_decompose(const Matrix& t, const VarietySpec& spec, std::uint64_t seed, const TolerancePolicy& tol);

struct RankOneTerm {
  std::vector<Vector> factors;  ///< unit norm, first significant entry positive real
  cplx scale = 1.0;
};

struct TensorDecomposition {
  std::vector<Index> dims;
  /// Modes covered by each factor of a term (a single group of several modes
  /// when a w-side vector is returned unfactored).
  std::vector<std::vector<int>> factor_modes;
  /// For Waring decompositions: each term is scale * factors[0]^{(x)power}.
  int power = 0;
  std::vector<RankOneTerm> terms;  ///< sorted by |scale| descending
  double residual = 0.0;
  UniquenessCertificate certificate;
};

/// Rebuilds the dense row-major tensor described by `d`.
Vector reconstruct(const TensorDecomposition& d);

TensorDecomposition tensor3_decompose(const DenseTensor& t, std::uint64_t seed, const TolerancePolicy& tol);

/// Bipartition of the modes of an order-m tensor (0-based). The v side is
/// handled by the Segre variety of its modes and needs at least two of them.
struct GroupedShape {
  std::vector<int> v_modes;
  std::vector<int> w_modes;

  /// First ceil(m/2) modes against the last floor(m/2).
  static GroupedShape balanced(std::size_t order);
  void validate(std::size_t order) const;
};

TensorDecomposition tensorm_decompose(const DenseTensor& t, const GroupedShape& grouping, std::uint64_t seed,
                                      const TolerancePolicy& tol, bool require_product_w = true);

/// T = sum alpha_a v_a^{(x)m} for a symmetric order-m (m >= 3) tensor.
TensorDecomposition waring_decompose(const DenseTensor& t, std::uint64_t seed, const TolerancePolicy& tol);

struct AidedTerm {
  Matrix slab;  ///< n1 x n2, unit Frobenius norm, rank <= r
  Vector w;
};

struct AidedDecomposition {
  std::vector<AidedTerm> terms;
  double residual = 0.0;
  UniquenessCertificate certificate;
};

/// T = sum slab_i (x) w_i with rank(slab_i) <= r.
AidedDecomposition aided_decompose(const DenseTensor& t, Index r, std::uint64_t seed, const TolerancePolicy& tol);

}  // namespace vsx

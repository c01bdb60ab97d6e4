#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/SparseCore>

#include "vsx/symtensor.hpp"
#include "vsx/types.hpp"

namespace vsx {

using SparseRows = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// p homogeneous degree-d forms on F^n. Row j holds the monomial coefficients
/// of f_j over the compressed S^d(F^n) basis, so Phi(v^{(x)d})_j = f_j(v).
struct PolySystem {
  Index n = 0;
  int degree = 0;
  SparseRows coeffs;

  Index count() const noexcept { return coeffs.rows(); }
};

struct Determinantal {
  Index rows = 0;
  Index cols = 0;
  Index rank = 0;
};
struct Segre {
  std::vector<Index> dims;
};
struct Biseparable {
  std::vector<Index> dims;
};
struct SliceRank1 {
  std::vector<Index> dims;
};
/// {alpha v^{(x)m}} in S^m(F^n), coordinates sqrt(m(a)) * prod v[a].
struct Veronese {
  Index n = 0;
  int m = 0;
};
struct Custom {
  PolySystem system;
};

struct VarietySpec {
  std::variant<Determinantal, Segre, Biseparable, SliceRank1, Veronese, Custom> kind;
  Field field = Field::Complex;

  /// Dimension of the ambient space V.
  Index ambient() const;
  bool reducible() const;
  /// Throws Error(InvalidSpec) on malformed parameters.
  void validate() const;
};

/// One system per irreducible component.
using ComponentList = std::vector<PolySystem>;

ComponentList generators(const VarietySpec& spec);

/// Closed-form generator count of each component.
std::vector<std::int64_t> expected_generator_counts(const VarietySpec& spec);

Vector apply_phi(const PolySystem& sys, const SymTensor& u);
/// Phi applied to every column of a matrix of compressed coefficients.
Matrix apply_phi(const PolySystem& sys, const Matrix& coeff_columns);
/// f_j(v) for all j.
Vector evaluate(const PolySystem& sys, const Vector& v);

/// max_j |f_j(v)| / ||v||^d (0 for v = 0).
double membership_residual(const PolySystem& sys, const Vector& v);
/// Any-component membership at residual_tol.
bool membership(const VarietySpec& spec, const Vector& v, const TolerancePolicy& tol);
bool membership(const ComponentList& comps, const Vector& v, const TolerancePolicy& tol);

/// Seeded point on the variety (random component for reducible kinds).
Vector sample_point(const VarietySpec& spec, std::uint64_t seed);
/// Seeded point on a chosen component.
Vector sample_component_point(const VarietySpec& spec, std::size_t component, std::uint64_t seed);

Index numerical_rank(const PolySystem& sys, const TolerancePolicy& tol);

/// floor(p / ((d-1)! C(n+d-2, d-1))), evaluated exactly.
std::int64_t rank_bound(const PolySystem& sys);
std::int64_t rank_bound(Index n, int degree, std::int64_t p);

/// Weighted Veronese coordinates of v^{(x)m} and the inverse (up to scale).
Vector veronese_embed(const Vector& v, int m);
Vector veronese_unembed(const Vector& point, Index n, int m);

/// Bipartitions used by Biseparable, ordered by size then lexicographically;
/// mode lists are 0-based.
std::vector<std::vector<int>> biseparable_parts(std::size_t modes);

}  // namespace vsx

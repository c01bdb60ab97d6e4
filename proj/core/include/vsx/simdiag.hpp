#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "vsx/types.hpp"

namespace vsx {

/// Order-3 tensor stored as n1 frontal slices of size n2 x n3:
/// T = sum_k e_k (x) slices[k].
struct Tensor3 {
  Index n1 = 0;
  Index n2 = 0;
  Index n3 = 0;
  std::vector<Matrix> slices;

  Tensor3() = default;
  Tensor3(Index a, Index b, Index c);
  /// Row-major entries, index (i * n2 + j) * n3 + l.
  static Tensor3 from_entries(Index a, Index b, Index c, const Vector& entries);
  Vector entries() const;
  double norm() const;
};

struct TriTerm {
  Vector u;
  Vector v;  ///< unit norm, first significant entry positive real
  Vector w;  ///< unit norm, first significant entry positive real
};

struct TriDecomp {
  std::vector<TriTerm> terms;
  double residual = 0.0;
  int attempts = 1;
};

enum class SimDiagFailure {
  RepeatedEigenvalues,
  ReciprocalMismatch,
  ParallelFirstFactors,
  EigFailure,
  ResidualTooLarge,
};

std::string_view to_string(SimDiagFailure reason);

struct SimDiagFail {
  SimDiagFailure reason;
  int attempts = 0;
};

using SimDiagOutcome = std::variant<TriDecomp, SimDiagFail>;

/// Simultaneous diagonalization with seeded Gaussian functionals f, g over
/// `field`. Transient failures redraw f, g up to tol.max_retries attempts.
SimDiagOutcome simultaneous_diagonalize(const Tensor3& t, std::uint64_t seed, const TolerancePolicy& tol,
                                        Field field = Field::Complex);

/// ||T - sum u (x) v (x) w|| / ||T|| (0 when T = 0).
double reconstruction_residual(const Tensor3& t, const std::vector<TriTerm>& terms);

}  // namespace vsx

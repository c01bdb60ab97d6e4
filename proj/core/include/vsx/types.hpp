#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace vsx {

using cplx = std::complex<double>;
using Index = Eigen::Index;

/// Dense complex matrix/vector used on every module boundary. Real-field data
/// is carried with zero imaginary parts.
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Field { Real, Complex };

std::string_view to_string(Field field);
Field field_from_string(std::string_view tag);

/// Shared numerical thresholds. Rank decisions are relative to the largest
/// singular value; residual checks are relative to the relevant norm.
struct TolerancePolicy {
  double rank_rel_tol = 1e-9;
  double residual_tol = 1e-8;
  double eig_gap_rel_tol = 1e-7;
  int max_retries = 5;

  /// Throws vsx::Error(InvalidArgument) unless every tolerance is in (0,1)
  /// and max_retries >= 1.
  void validate() const;

  /// Same policy with residual tolerances loosened by `factor` (used by
  /// independent re-verification).
  TolerancePolicy relaxed(double factor) const;
};

}  // namespace vsx

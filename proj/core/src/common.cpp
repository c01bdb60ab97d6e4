#include <string>

#include "vsx/error.hpp"
#include "vsx/types.hpp"

namespace vsx {

std::string_view to_string(Field field) { return field == Field::Real ? "R" : "C"; }

Field field_from_string(std::string_view tag) {
  if (tag == "R" || tag == "r" || tag == "real") return Field::Real;
  if (tag == "C" || tag == "c" || tag == "complex") return Field::Complex;
  throw Error(ErrorCode::Parse, "unknown field tag '" + std::string(tag) + "' (expected R or C)");
}

void TolerancePolicy::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0))
      throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
  };
  check(rank_rel_tol, "rank_rel_tol");
  check(residual_tol, "residual_tol");
  check(eig_gap_rel_tol, "eig_gap_rel_tol");
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 1");
}

TolerancePolicy TolerancePolicy::relaxed(double factor) const {
  TolerancePolicy out = *this;
  out.residual_tol = std::min(0.5, residual_tol * factor);
  out.eig_gap_rel_tol = std::min(0.5, eig_gap_rel_tol * factor);
  return out;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::EigFailure: return "EigFailure";
    case ErrorCode::NotUnique: return "NotUnique";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NonProductW: return "NonProductW";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

bool Error::algorithmic() const noexcept {
  switch (code_) {
    case ErrorCode::EigFailure:
    case ErrorCode::NotUnique:
    case ErrorCode::RankMismatch:
    case ErrorCode::NonProductW:
    case ErrorCode::DegenerateDraw:
      return true;
    default:
      return false;
  }
}

}  // namespace vsx

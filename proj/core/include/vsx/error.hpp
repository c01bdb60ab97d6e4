#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vsx {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  Overflow,
  DegenerateBasis,
  InvalidSpec,
  DegreeMismatch,
  EigFailure,
  NotUnique,
  RankMismatch,
  NonProductW,
  NotSymmetric,
  DegenerateDraw,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  /// True for "the algorithm declined to answer" outcomes, as opposed to bad
  /// input. The CLI maps these to exit status 2.
  bool algorithmic() const noexcept;

 private:
  ErrorCode code_;
};

}  // namespace vsx

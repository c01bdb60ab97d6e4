#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vsx/types.hpp"

namespace vsx::cli {

/// Exit statuses shared by every subcommand.
enum Exit : int { kOk = 0, kInputError = 1, kAlgorithmic = 2 };

struct RunConfig {
  std::optional<Field> field;  ///< overrides the field tag of input files
  TolerancePolicy tol;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;  ///< empty: standard output
};

/// Applies the keys of a JSON config object (field, seed, tol, rank_tol,
/// eig_gap, retries, threads, out) on top of `cfg`.
void apply_config(RunConfig& cfg, const nlohmann::json& j);

/// Entry point of the `vsx` tool. Reads VSX_CONFIG (if set) before flags.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vsx::cli

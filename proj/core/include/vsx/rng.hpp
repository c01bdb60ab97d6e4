#pragma once

#include <cstdint>
#include <random>

#include "vsx/types.hpp"

namespace vsx {

/// Child seed for stream `index` of `seed` (splitmix64 finalizer over both).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded Gaussian source. Real-field draws have zero imaginary part; complex
/// draws are standard circular Gaussians (real and imaginary parts N(0, 1/2)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal();
  cplx scalar(Field field);
  Vector vector(Index n, Field field);
  Matrix matrix(Index rows, Index cols, Field field);
  std::uint64_t uniform_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace vsx

#include "vsx/rng.hpp"

#include <cmath>

namespace vsx {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(splitmix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

double Rng::normal() { return normal_(engine_); }

cplx Rng::scalar(Field field) {
  if (field == Field::Real) return {normal(), 0.0};
  const double s = std::sqrt(0.5);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

Vector Rng::vector(Index n, Field field) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = scalar(field);
  return v;
}

Matrix Rng::matrix(Index rows, Index cols, Field field) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = scalar(field);
  return m;
}

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  return dist(engine_);
}

}  // namespace vsx

#include "vsx/symtensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"

namespace vsx {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::int64_t>::max())
      throw Error(ErrorCode::Overflow, "binomial coefficient exceeds int64");
  }
  return static_cast<std::int64_t>(acc);
}

MultiIndexSpace::MultiIndexSpace(Index n, int degree) : n_(n), degree_(degree) {
  if (n < 1 || degree < 0) throw Error(ErrorCode::InvalidArgument, "multi-index space needs n >= 1, d >= 0");
  size_ = binomial(n + degree - 1, degree);
  prefix_.assign(static_cast<std::size_t>(degree) + 1, std::vector<Index>(static_cast<std::size_t>(n) + 1, 0));
  for (int len = 0; len <= degree; ++len) {
    auto& row = prefix_[static_cast<std::size_t>(len)];
    for (Index v = 0; v < n; ++v) row[static_cast<std::size_t>(v) + 1] = row[static_cast<std::size_t>(v)] + binomial(n - v + len - 1, len);
  }
}

Index MultiIndexSpace::position(std::span<const int> sorted) const {
  Index pos = 0;
  int prev = 0;
  for (int k = 0; k < degree_; ++k) {
    const auto& row = prefix_[static_cast<std::size_t>(degree_ - k - 1)];
    const int a = sorted[static_cast<std::size_t>(k)];
    pos += row[static_cast<std::size_t>(a)] - row[static_cast<std::size_t>(prev)];
    prev = a;
  }
  return pos;
}

Index MultiIndexSpace::position_unsorted(std::span<const int> tuple) const {
  int buf[16];
  if (tuple.size() > 16) throw Error(ErrorCode::InvalidArgument, "degree too large");
  std::copy(tuple.begin(), tuple.end(), buf);
  std::sort(buf, buf + tuple.size());
  return position(std::span<const int>(buf, tuple.size()));
}

std::vector<int> MultiIndexSpace::at(Index pos) const {
  if (pos < 0 || pos >= size_) throw Error(ErrorCode::InvalidArgument, "multi-index position out of range");
  std::vector<int> out(static_cast<std::size_t>(degree_));
  int v = 0;
  for (int k = 0; k < degree_; ++k) {
    const int len = degree_ - k - 1;
    for (;;) {
      const Index block = binomial(n_ - v + len - 1, len);
      if (pos < block) break;
      pos -= block;
      ++v;
    }
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

bool MultiIndexSpace::next(std::vector<int>& idx) const {
  for (int k = degree_ - 1; k >= 0; --k) {
    if (idx[static_cast<std::size_t>(k)] < n_ - 1) {
      const int v = idx[static_cast<std::size_t>(k)] + 1;
      for (int j = k; j < degree_; ++j) idx[static_cast<std::size_t>(j)] = v;
      return true;
    }
  }
  return false;
}

double MultiIndexSpace::multiplicity(std::span<const int> sorted) {
  double m = std::tgamma(static_cast<double>(sorted.size()) + 1.0);
  std::size_t run = 1;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    if (k < sorted.size() && sorted[k] == sorted[k - 1]) {
      ++run;
    } else {
      m /= std::tgamma(static_cast<double>(run) + 1.0);
      run = 1;
    }
  }
  return std::round(m);
}

std::vector<std::vector<int>> enumerate_multi_indices(Index n, int degree) {
  MultiIndexSpace space(n, degree);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(space.size()));
  auto idx = space.first();
  do {
    out.push_back(idx);
  } while (space.next(idx));
  return out;
}

SymTensor::SymTensor(Index n, int degree) : space_(n, degree), coeffs_(Vector::Zero(space_.size())) {}

SymTensor::SymTensor(Index n, int degree, Vector coeffs) : space_(n, degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.size())
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector does not match C(n+d-1, d)");
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
  if (other.n() != n() || other.degree() != degree())
    throw Error(ErrorCode::DimensionMismatch, "adding symmetric tensors of different shape");
  coeffs_ += other.coeffs_;
  return *this;
}

SymTensor& SymTensor::operator*=(cplx c) {
  coeffs_ *= c;
  return *this;
}

Eigen::VectorXd isometric_weights(const MultiIndexSpace& space) {
  Eigen::VectorXd w(space.size());
  auto idx = space.first();
  Index pos = 0;
  do {
    w(pos++) = std::sqrt(MultiIndexSpace::multiplicity(idx));
  } while (space.next(idx));
  return w;
}

cplx inner(const SymTensor& x, const SymTensor& y) {
  if (x.n() != y.n() || x.degree() != y.degree())
    throw Error(ErrorCode::DimensionMismatch, "inner product of symmetric tensors of different shape");
  const auto& space = x.space();
  cplx acc = 0.0;
  auto idx = space.first();
  Index pos = 0;
  do {
    acc += MultiIndexSpace::multiplicity(idx) * std::conj(x.coeffs()(pos)) * y.coeffs()(pos);
    ++pos;
  } while (space.next(idx));
  return acc;
}

SymTensor vee(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidArgument, "vee needs at least one vector");
  const Index n = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "vee arguments differ in length");
  const int d = static_cast<int>(vectors.size());
  SymTensor out(n, d);
  std::vector<int> perm(static_cast<std::size_t>(d));
  const double inv_fact = 1.0 / std::tgamma(d + 1.0);
  const auto& space = out.space();
  auto idx = space.first();
  Index pos = 0;
  do {
    std::iota(perm.begin(), perm.end(), 0);
    cplx acc = 0.0;
    do {
      cplx term = 1.0;
      for (int k = 0; k < d; ++k)
        term *= vectors[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])](idx[static_cast<std::size_t>(k)]);
      acc += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.coeffs()(pos++) = acc * inv_fact;
  } while (space.next(idx));
  return out;
}

SymTensor power(const Vector& v, int degree) {
  SymTensor out(v.size(), degree);
  const auto& space = out.space();
  auto idx = space.first();
  Index pos = 0;
  do {
    cplx term = 1.0;
    for (int a : idx) term *= v(a);
    out.coeffs()(pos++) = term;
  } while (space.next(idx));
  return out;
}

Matrix lift_subspace(const Matrix& basis, int degree, const TolerancePolicy& tol) {
  const Index r = basis.cols();
  if (r == 0) return Matrix(binomial(basis.rows() + degree - 1, degree), 0);
  if (numlin::numerical_rank<cplx>(basis, tol) < r)
    throw Error(ErrorCode::DegenerateBasis, "subspace basis columns are numerically dependent");
  MultiIndexSpace coeff_space(r, degree);
  Matrix out(binomial(basis.rows() + degree - 1, degree), coeff_space.size());
  std::vector<Vector> factors(static_cast<std::size_t>(degree));
  auto idx = coeff_space.first();
  Index col = 0;
  do {
    for (int k = 0; k < degree; ++k) factors[static_cast<std::size_t>(k)] = basis.col(idx[static_cast<std::size_t>(k)]);
    out.col(col++) = vee(factors).coeffs();
  } while (coeff_space.next(idx));
  return out;
}

SymTensor hook(const SymTensor& u, const Vector& v, int ell) {
  const int d = u.degree();
  if (ell < 1 || ell > d - 1) throw Error(ErrorCode::InvalidArgument, "hook needs 1 <= ell <= d-1");
  if (v.size() != u.n()) throw Error(ErrorCode::DimensionMismatch, "hook vector length differs from n");
  const Index n = u.n();
  MultiIndexSpace contracted(n, ell);
  // Weighted powers m(c) * prod v[c] for every c in [n]^{v ell}.
  std::vector<std::vector<int>> cs;
  std::vector<cplx> weights;
  {
    auto c = contracted.first();
    do {
      cplx w = MultiIndexSpace::multiplicity(c);
      for (int a : c) w *= v(a);
      cs.push_back(c);
      weights.push_back(w);
    } while (contracted.next(c));
  }
  SymTensor out(n, d - ell);
  const auto& space = out.space();
  std::vector<int> merged(static_cast<std::size_t>(d));
  auto b = space.first();
  Index pos = 0;
  do {
    cplx acc = 0.0;
    for (std::size_t t = 0; t < cs.size(); ++t) {
      std::merge(cs[t].begin(), cs[t].end(), b.begin(), b.end(), merged.begin());
      acc += weights[t] * u.coeffs()(u.space().position(merged));
    }
    out.coeffs()(pos++) = acc;
  } while (space.next(b));
  return out;
}

namespace {

Index checked_pow(Index base, int exp) {
  __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > std::numeric_limits<std::int32_t>::max()) throw Error(ErrorCode::Overflow, "n^k exceeds index range");
  }
  return static_cast<Index>(acc);
}

}  // namespace

Matrix as_mode_matrix(const SymTensor& u) {
  const Index n = u.n();
  const int d = u.degree();
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "mode matrix needs degree >= 1");
  const Index cols = checked_pow(n, d - 1);
  Matrix out(n, cols);
  std::vector<int> tuple(static_cast<std::size_t>(d), 0);
  std::vector<int> sorted(static_cast<std::size_t>(d));
  for (Index col = 0; col < cols; ++col) {
    for (Index i = 0; i < n; ++i) {
      tuple[0] = static_cast<int>(i);
      std::copy(tuple.begin(), tuple.end(), sorted.begin());
      std::sort(sorted.begin(), sorted.end());
      out(i, col) = u.coeffs()(u.space().position(sorted));
    }
    // advance the trailing factors in row-major order
    for (int k = d - 1; k >= 1; --k) {
      if (++tuple[static_cast<std::size_t>(k)] < n) break;
      tuple[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

Vector to_full(const SymTensor& u) {
  const Index n = u.n();
  const int d = u.degree();
  const Index total = checked_pow(n, d);
  Vector out(total);
  std::vector<int> tuple(static_cast<std::size_t>(d), 0);
  for (Index pos = 0; pos < total; ++pos) {
    out(pos) = u.at(tuple);
    for (int k = d - 1; k >= 0; --k) {
      if (++tuple[static_cast<std::size_t>(k)] < n) break;
      tuple[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

Vector kron_power(const Vector& v, int count) {
  Vector out = Vector::Ones(1);
  for (int k = 0; k < count; ++k) {
    Vector next(out.size() * v.size());
    for (Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
    out = std::move(next);
  }
  return out;
}

}  // namespace vsx

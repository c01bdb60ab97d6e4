#include "vsx/simdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"

namespace vsx {

Tensor3::Tensor3(Index a, Index b, Index c) : n1(a), n2(b), n3(c), slices(static_cast<std::size_t>(a), Matrix::Zero(b, c)) {}

Tensor3 Tensor3::from_entries(Index a, Index b, Index c, const Vector& entries) {
  if (entries.size() != a * b * c) throw Error(ErrorCode::DimensionMismatch, "entry count does not match n1*n2*n3");
  Tensor3 t(a, b, c);
  for (Index i = 0; i < a; ++i)
    for (Index j = 0; j < b; ++j)
      for (Index l = 0; l < c; ++l) t.slices[static_cast<std::size_t>(i)](j, l) = entries((i * b + j) * c + l);
  return t;
}

Vector Tensor3::entries() const {
  Vector out(n1 * n2 * n3);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      for (Index l = 0; l < n3; ++l) out((i * n2 + j) * n3 + l) = slices[static_cast<std::size_t>(i)](j, l);
  return out;
}

double Tensor3::norm() const {
  double acc = 0.0;
  for (const auto& s : slices) acc += s.squaredNorm();
  return std::sqrt(acc);
}

std::string_view to_string(SimDiagFailure reason) {
  switch (reason) {
    case SimDiagFailure::RepeatedEigenvalues: return "RepeatedEigenvalues";
    case SimDiagFailure::ReciprocalMismatch: return "ReciprocalMismatch";
    case SimDiagFailure::ParallelFirstFactors: return "ParallelFirstFactors";
    case SimDiagFailure::EigFailure: return "EigFailure";
    case SimDiagFailure::ResidualTooLarge: return "ResidualTooLarge";
  }
  return "Unknown";
}

double reconstruction_residual(const Tensor3& t, const std::vector<TriTerm>& terms) {
  const double nt = t.norm();
  double acc = 0.0;
  for (Index k = 0; k < t.n1; ++k) {
    Matrix diff = t.slices[static_cast<std::size_t>(k)];
    for (const auto& term : terms) diff.noalias() -= term.u(k) * term.v * term.w.transpose();
    acc += diff.squaredNorm();
  }
  const double err = std::sqrt(acc);
  if (!(nt > 0.0)) return err;
  return err / nt;
}

namespace {

constexpr Index kDenseLimit = 4'000'000;

// Orthonormal basis of the mode-2 fibres, i.e. the column space of [T_1 ... T_n1].
Matrix mode2_basis(const Tensor3& t, const TolerancePolicy& tol) {
  if (t.n2 * t.n1 * t.n3 <= kDenseLimit) {
    Matrix wide(t.n2, t.n1 * t.n3);
    for (Index k = 0; k < t.n1; ++k) wide.middleCols(k * t.n3, t.n3) = t.slices[static_cast<std::size_t>(k)];
    return numlin::column_space_basis<cplx>(wide, tol);
  }
  Matrix gram = Matrix::Zero(t.n2, t.n2);
  for (const auto& s : t.slices) gram.noalias() += s * s.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const auto& lam = eig.eigenvalues();
  const double top = lam.maxCoeff();
  std::vector<Index> keep;
  for (Index i = lam.size() - 1; i >= 0; --i)
    if (top > 0.0 && lam(i) > 1e-12 * top) keep.push_back(i);
  Matrix q(t.n2, static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) q.col(static_cast<Index>(c)) = eig.eigenvectors().col(keep[c]);
  return q;
}

struct Core {
  Matrix q2;  // n2 x r2
  Matrix q3;  // n3 x r3
  std::vector<Matrix> slices;  // r2 x r3, T_k = q2 * C_k * q3^T
};

Core compress(const Tensor3& t, const TolerancePolicy& tol) {
  Core core;
  core.q2 = mode2_basis(t, tol);
  const Index r2 = core.q2.cols();
  Matrix stacked(t.n1 * r2, t.n3);
  for (Index k = 0; k < t.n1; ++k) stacked.middleRows(k * r2, r2) = core.q2.adjoint() * t.slices[static_cast<std::size_t>(k)];
  const Matrix stacked_t = stacked.transpose();
  core.q3 = stacked_t.size() <= kDenseLimit ? numlin::column_space_basis<cplx>(stacked_t, tol)
                                            : numlin::column_space_basis_gram(stacked_t, tol);
  const Matrix q3c = core.q3.conjugate();
  core.slices.reserve(static_cast<std::size_t>(t.n1));
  for (Index k = 0; k < t.n1; ++k) core.slices.push_back(stacked.middleRows(k * r2, r2) * q3c);
  return core;
}

Matrix contract(const std::vector<Matrix>& slices, const Vector& f) {
  Matrix out = Matrix::Zero(slices[0].rows(), slices[0].cols());
  for (std::size_t k = 0; k < slices.size(); ++k) out += f(static_cast<Index>(k)) * slices[k];
  return out;
}

void snap_real(Vector& v) {
  const double n = v.norm();
  if (n > 0.0 && v.imag().cwiseAbs().maxCoeff() <= 1e-6 * n) v = v.real().cast<cplx>();
}

struct Attempt {
  std::variant<TriDecomp, SimDiagFailure> result;
};

Attempt attempt_once(const Tensor3& t, const Core& core, std::uint64_t seed, const TolerancePolicy& tol, Field field) {
  Rng rng(seed);
  const Vector f = rng.vector(t.n1, field);
  const Vector g = rng.vector(t.n1, field);
  const Matrix cf = contract(core.slices, f);
  const Matrix cg = contract(core.slices, g);

  // Step 2: eigenvectors of C_f C_g^+ give the second-mode factors.
  const Matrix pencil = cf * numlin::pseudoinverse<cplx>(cg, tol);
  const Index rank = numlin::numerical_rank<cplx>(pencil, tol);
  std::vector<numlin::EigPair> left;
  try {
    left = numlin::eig_pairs(pencil);
  } catch (const Error&) {
    return {SimDiagFailure::EigFailure};
  }
  std::sort(left.begin(), left.end(), [](const auto& a, const auto& b) { return std::abs(a.value) > std::abs(b.value); });
  left.resize(static_cast<std::size_t>(rank));
  if (rank == 0) return {SimDiagFailure::ResidualTooLarge};
  const double lmax = std::abs(left.front().value);
  for (std::size_t a = 0; a < left.size(); ++a)
    for (std::size_t b = a + 1; b < left.size(); ++b)
      if (std::abs(left[a].value - left[b].value) < tol.eig_gap_rel_tol * lmax) return {SimDiagFailure::RepeatedEigenvalues};

  // Step 3: eigenvectors of C_g^T (C_f^T)^+ with eigenvalues 1/lambda give the third-mode factors.
  const Matrix dual = cg.transpose() * numlin::pseudoinverse<cplx>(Matrix(cf.transpose()), tol);
  std::vector<numlin::EigPair> right;
  try {
    right = numlin::eig_pairs(dual);
  } catch (const Error&) {
    return {SimDiagFailure::EigFailure};
  }
  double inv_max = 0.0;
  for (const auto& p : left) inv_max = std::max(inv_max, 1.0 / std::abs(p.value));
  std::vector<bool> used(right.size(), false);
  std::vector<Vector> vs;
  std::vector<Vector> ws;
  for (const auto& p : left) {
    const cplx target = 1.0 / p.value;
    std::size_t best = right.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(right[j].value - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best == right.size() || best_dist > tol.eig_gap_rel_tol * inv_max) return {SimDiagFailure::ReciprocalMismatch};
    used[best] = true;
    vs.push_back(p.vector);
    ws.push_back(right[best].vector);
  }

  // Step 4: dual functionals to {v_a (x) w_a} recover the first-mode factors.
  const Index r2 = core.q2.cols();
  const Index r3 = core.q3.cols();
  Matrix z(r2 * r3, rank);
  for (Index a = 0; a < rank; ++a) {
    const auto& v = vs[static_cast<std::size_t>(a)];
    const auto& w = ws[static_cast<std::size_t>(a)];
    for (Index j = 0; j < r2; ++j) z.col(a).segment(j * r3, r3) = v(j) * w;
  }
  const Matrix h = numlin::pseudoinverse<cplx>(z, tol);
  Matrix us(t.n1, rank);
  for (Index k = 0; k < t.n1; ++k) {
    const Matrix& c = core.slices[static_cast<std::size_t>(k)];
    for (Index a = 0; a < rank; ++a) {
      cplx acc = 0.0;
      for (Index j = 0; j < r2; ++j) acc += (h.row(a).segment(j * r3, r3).transpose().array() * c.row(j).transpose().array()).sum();
      us(k, a) = acc;
    }
  }
  for (Index a = 0; a < rank; ++a)
    for (Index b = a + 1; b < rank; ++b) {
      Matrix pair(t.n1, 2);
      pair << us.col(a), us.col(b);
      if (numlin::numerical_rank<cplx>(pair, tol) < 2) return {SimDiagFailure::ParallelFirstFactors};
    }

  TriDecomp out;
  for (Index a = 0; a < rank; ++a) {
    TriTerm term;
    term.v = core.q2 * vs[static_cast<std::size_t>(a)];
    term.w = core.q3 * ws[static_cast<std::size_t>(a)];
    const cplx cv = numlin::normalize_phase(term.v);
    const cplx cw = numlin::normalize_phase(term.w);
    term.u = us.col(a) * cv * cw;
    if (field == Field::Real) {
      snap_real(term.u);
      snap_real(term.v);
      snap_real(term.w);
    }
    out.terms.push_back(std::move(term));
  }
  out.residual = reconstruction_residual(t, out.terms);
  if (!(out.residual <= tol.residual_tol)) return {SimDiagFailure::ResidualTooLarge};
  return {std::move(out)};
}

bool transient(SimDiagFailure f) {
  return f == SimDiagFailure::RepeatedEigenvalues || f == SimDiagFailure::ReciprocalMismatch ||
         f == SimDiagFailure::ResidualTooLarge || f == SimDiagFailure::EigFailure;
}

}  // namespace

SimDiagOutcome simultaneous_diagonalize(const Tensor3& t, std::uint64_t seed, const TolerancePolicy& tol, Field field) {
  tol.validate();
  if (t.n1 < 1) throw Error(ErrorCode::DimensionMismatch, "tensor needs n1 >= 1");
  if (static_cast<Index>(t.slices.size()) != t.n1) throw Error(ErrorCode::DimensionMismatch, "slice count differs from n1");
  for (const auto& s : t.slices)
    if (s.rows() != t.n2 || s.cols() != t.n3) throw Error(ErrorCode::DimensionMismatch, "slice shape differs from n2 x n3");
    else if (!s.allFinite()) throw Error(ErrorCode::InvalidArgument, "tensor has non-finite entries");
  if (!(t.norm() > 0.0)) return TriDecomp{};

  const Core core = compress(t, tol);
  SimDiagFailure last = SimDiagFailure::EigFailure;
  for (int attempt = 0; attempt < tol.max_retries; ++attempt) {
    Attempt result = attempt_once(t, core, derive_seed(seed, static_cast<std::uint64_t>(attempt)), tol, field);
    if (auto* ok = std::get_if<TriDecomp>(&result.result)) {
      ok->attempts = attempt + 1;
      return std::move(*ok);
    }
    last = std::get<SimDiagFailure>(result.result);
    if (!transient(last)) return SimDiagFail{last, attempt + 1};
  }
  return SimDiagFail{last, tol.max_retries};
}

}  // namespace vsx

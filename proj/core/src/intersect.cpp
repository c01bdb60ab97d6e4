#include "vsx/intersect.hpp"

#include <cmath>
#include <exception>
#include <thread>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"
#include "vsx/simdiag.hpp"
#include "vsx/symtensor.hpp"

namespace vsx {

std::string_view to_string(Aggregate a) {
  switch (a) {
    case Aggregate::TrivialAll: return "TrivialAll";
    case Aggregate::FoundElements: return "FoundElements";
    case Aggregate::Fail: return "Fail";
  }
  return "Unknown";
}

namespace {

void check_inputs(const Subspace& u, const PolySystem& sys) {
  if (sys.n != u.ambient())
    throw Error(ErrorCode::DimensionMismatch, "subspace ambient dimension " + std::to_string(u.ambient()) +
                                                  " differs from variety ambient " + std::to_string(sys.n));
  if (!u.basis.allFinite()) throw Error(ErrorCode::InvalidArgument, "subspace basis has non-finite entries");
}

// Coefficients of v^{(x)d} over the lifted basis {u_{a_1} v ... v u_{a_d}}.
Vector power_coordinates(const Vector& y, int degree) {
  MultiIndexSpace space(y.size(), degree);
  Vector c(space.size());
  auto a = space.first();
  Index pos = 0;
  do {
    cplx term = MultiIndexSpace::multiplicity(a);
    for (int k : a) term *= y(k);
    c(pos++) = term;
  } while (space.next(a));
  return c;
}

struct ElementChecks {
  double membership = 0.0;
  double subspace = 0.0;
  double span = 0.0;
};

ElementChecks check_elements(const std::vector<Vector>& elements, const Subspace& u, const PolySystem& sys,
                             const Matrix& kernel, const TolerancePolicy& tol) {
  ElementChecks out;
  const Matrix q = numlin::column_space_basis<cplx>(u.basis, tol);
  const Matrix coords = numlin::pseudoinverse<cplx>(u.basis, tol);
  for (const auto& v : elements) {
    out.membership = std::max(out.membership, membership_residual(sys, v));
    out.subspace = std::max(out.subspace, (v - q * (q.adjoint() * v)).norm() / v.norm());
    const Vector c = power_coordinates(coords * v, sys.degree);
    const double nc = c.norm();
    const double span = nc > 0.0 ? (c - kernel * (kernel.adjoint() * c)).norm() / nc : 1.0;
    out.span = std::max(out.span, span);
  }
  return out;
}

// Largest singular value of the sparse generator matrix, by power iteration
// from a fixed start so results stay reproducible.
double generator_norm(const PolySystem& sys) {
  if (sys.coeffs.nonZeros() == 0) return 0.0;
  Vector x = Vector::Ones(sys.coeffs.cols());
  for (Index k = 0; k < x.size(); ++k) x(k) += 0.5 * std::sin(1.0 + static_cast<double>(k));
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 60; ++it) {
    const Vector y = sys.coeffs * x;
    Vector z = sys.coeffs.adjoint() * y;
    const double next = std::sqrt(z.norm());
    if (!(z.norm() > 0.0)) break;
    x = z / z.norm();
    if (std::abs(next - sigma) <= 1e-6 * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

// Kernel of M = Phi L. Singular values are judged against ||Phi|| ||L|| as
// well as sigma_max(M): with few columns M may be uniformly tiny, which is
// a kernel and not a well-conditioned matrix.
struct KernelSplit {
  Eigen::VectorXd sv;
  Matrix kernel;
  double reference = 0.0;
};

KernelSplit split_kernel(const PolySystem& sys, const Matrix& lifted, const Matrix& coeff, const TolerancePolicy& tol) {
  KernelSplit out;
  const Index cols = coeff.cols();
  Eigen::BDCSVD<Matrix> svd(coeff, Eigen::ComputeFullV);
  out.sv = svd.singularValues();
  const double lift_norm = numlin::singular_values<cplx>(lifted)(0);
  out.reference = std::max(out.sv.size() > 0 ? out.sv(0) : 0.0, generator_norm(sys) * lift_norm);
  Index rank = 0;
  while (rank < out.sv.size() && out.sv(rank) > tol.rank_rel_tol * out.reference) ++rank;
  out.kernel = svd.matrixV().rightCols(cols - rank);
  return out;
}

Matrix as_columns(const std::vector<Vector>& vs, Index rows) {
  Matrix m(rows, static_cast<Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Index>(i)) = vs[i];
  return m;
}

}  // namespace

IntersectionResult algorithm1(const Subspace& u, const PolySystem& sys, std::uint64_t seed, const TolerancePolicy& tol) {
  tol.validate();
  check_inputs(u, sys);
  const Index r = u.dim();
  const int d = sys.degree;

  const Matrix lifted = lift_subspace(u.basis, d, tol);
  const Matrix coeff = apply_phi(sys, lifted);
  const KernelSplit split = split_kernel(sys, lifted, coeff, tol);
  const Eigen::VectorXd& sv = split.sv;
  const Matrix& kernel = split.kernel;
  const Index s = kernel.cols();

  if (s == 0) {
    KernelCertificate cert;
    cert.rows = coeff.rows();
    cert.cols = coeff.cols();
    cert.frobenius = coeff.norm();
    cert.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    cert.sigma_min = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
    cert.field = u.field;
    cert.sharp = u.field == Field::Complex;
    return TrivialResult{cert};
  }
  if (s > r) return FailResult{"kernel", "TooManyKernelElements"};

  const Index n = u.ambient();
  Tensor3 t;
  t.n1 = s;
  t.n2 = n;
  for (Index i = 0; i < s; ++i)
    t.slices.push_back(as_mode_matrix(SymTensor(n, d, lifted * kernel.col(i))));
  t.n3 = t.slices.front().cols();

  const SimDiagOutcome diag = simultaneous_diagonalize(t, derive_seed(seed, 1), tol, u.field);
  if (const auto* fail = std::get_if<SimDiagFail>(&diag)) return FailResult{"simdiag", std::string(to_string(fail->reason))};
  const auto& terms = std::get<TriDecomp>(diag).terms;
  if (static_cast<Index>(terms.size()) != s) return FailResult{"structure", "RankMismatch"};

  UniquenessCertificate cert;
  cert.s = s;
  std::vector<Vector> elements;
  Matrix zs(s, s);
  for (Index i = 0; i < s; ++i) {
    const auto& term = terms[static_cast<std::size_t>(i)];
    const Vector tail = kron_power(term.v, d - 1);
    const double align = std::abs(term.w.dot(tail)) / (term.w.norm() * tail.norm());
    cert.alignment.push_back(align);
    if (!(align >= 1.0 - tol.residual_tol)) return FailResult{"structure", "NotSymmetricPower"};
    zs.col(i) = term.u;
    elements.push_back(term.v);
  }
  const Matrix vs = as_columns(elements, n);
  if (numlin::numerical_rank<cplx>(zs, tol) < s || numlin::numerical_rank<cplx>(vs, tol) < s)
    return FailResult{"structure", "DependentFactors"};
  const Eigen::VectorXd vsv = numlin::singular_values<cplx>(vs);
  cert.independence_sigma_min = vsv(vsv.size() - 1);

  const ElementChecks checks = check_elements(elements, u, sys, kernel, tol);
  cert.membership_residual = checks.membership;
  cert.subspace_residual = checks.subspace;
  cert.span_residual = checks.span;
  if (!(checks.membership <= tol.residual_tol)) return FailResult{"membership", "NotOnVariety"};
  if (!(checks.subspace <= tol.residual_tol)) return FailResult{"subspace", "NotInSubspace"};
  if (!(checks.span <= tol.residual_tol)) return FailResult{"span", "SpanMismatch"};
  return ElementsResult{std::move(elements), std::move(cert)};
}

ComponentsResult algorithm2(const Subspace& u, const ComponentList& comps, std::uint64_t seed,
                            const TolerancePolicy& tol, int threads) {
  if (comps.empty()) throw Error(ErrorCode::InvalidSpec, "component list is empty");
  for (const auto& c : comps)
    if (c.n != comps.front().n) throw Error(ErrorCode::DimensionMismatch, "components differ in ambient dimension");

  const std::size_t count = comps.size();
  std::vector<IntersectionResult> results(count, FailResult{"pending", "NotRun"});
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      results[i] = algorithm1(u, comps[i], derive_seed(seed, i), tol);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) run(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ComponentsResult out;
  out.per_component = std::move(results);
  bool all_trivial = true;
  bool any_elements = false;
  for (const auto& r : out.per_component) {
    if (!std::holds_alternative<TrivialResult>(r)) all_trivial = false;
    if (const auto* el = std::get_if<ElementsResult>(&r)) {
      any_elements = true;
      for (const auto& v : el->elements) {
        const bool seen = std::any_of(out.elements.begin(), out.elements.end(), [&](const Vector& w) {
          return std::abs(w.dot(v)) >= (1.0 - tol.residual_tol) * w.norm() * v.norm();
        });
        if (!seen) out.elements.push_back(v);
      }
    }
  }
  out.aggregate = all_trivial ? Aggregate::TrivialAll : any_elements ? Aggregate::FoundElements : Aggregate::Fail;
  return out;
}

bool verify_certificate(const IntersectionResult& result, const Subspace& u, const PolySystem& sys,
                        const TolerancePolicy& tol) {
  if (std::holds_alternative<FailResult>(result)) return false;
  try {
    check_inputs(u, sys);
    const double loose = 10.0 * tol.residual_tol;
    const Matrix lifted = lift_subspace(u.basis, sys.degree, tol);
    const Matrix coeff = apply_phi(sys, lifted);

    if (const auto* trivial = std::get_if<TrivialResult>(&result)) {
      const auto& cert = trivial->certificate;
      if (cert.rows != coeff.rows() || cert.cols != coeff.cols()) return false;
      const KernelSplit split = split_kernel(sys, lifted, coeff, tol);
      if (split.sv.size() < coeff.cols() || split.kernel.cols() != 0) return false;
      return std::abs(coeff.norm() - cert.frobenius) <= loose * std::max(1.0, cert.frobenius);
    }

    const auto& el = std::get<ElementsResult>(result);
    const Index s = static_cast<Index>(el.elements.size());
    if (s == 0 || s != el.certificate.s || s > u.dim()) return false;
    const Matrix kernel = split_kernel(sys, lifted, coeff, tol).kernel;
    if (kernel.cols() != s) return false;
    for (double a : el.certificate.alignment)
      if (!(a >= 1.0 - loose)) return false;
    if (numlin::numerical_rank<cplx>(as_columns(el.elements, u.ambient()), tol) != s) return false;
    const ElementChecks checks = check_elements(el.elements, u, sys, kernel, tol);
    return checks.membership <= loose && checks.subspace <= loose && checks.span <= loose;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace vsx

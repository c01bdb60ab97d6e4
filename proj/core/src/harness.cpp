#include "vsx/harness.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"
#include "vsx/symtensor.hpp"

namespace vsx {

std::string_view to_string(TrialKind k) {
  switch (k) {
    case TrialKind::Trivial: return "Trivial";
    case TrialKind::Recovered: return "Recovered";
    case TrialKind::Mismatch: return "Mismatch";
    case TrialKind::Fail: return "Fail";
  }
  return "Unknown";
}

PlantedInstance gen_planted(const VarietySpec& spec, Index r, Index s, std::uint64_t seed, const TolerancePolicy& tol) {
  spec.validate();
  const Index n = spec.ambient();
  if (s < 0 || s > r || r > n) throw Error(ErrorCode::InvalidArgument, "planted instance needs 0 <= s <= R <= n");
  for (int attempt = 0; attempt < tol.max_retries; ++attempt) {
    const std::uint64_t inst = attempt == 0 ? seed : derive_seed(seed, 0x5eed0000ULL + static_cast<std::uint64_t>(attempt));
    PlantedInstance out;
    out.spec = spec;
    out.r = r;
    out.s = s;
    out.seed = seed;
    for (Index i = 0; i < s; ++i) out.planted.push_back(sample_point(spec, derive_seed(inst, static_cast<std::uint64_t>(i))));
    Rng rng(derive_seed(inst, 0xf111ULL));
    for (Index i = s; i < r; ++i) out.fillers.push_back(rng.vector(n, spec.field));
    out.u.field = spec.field;
    out.u.basis.resize(n, r);
    Index col = 0;
    for (const auto& p : out.planted) out.u.basis.col(col++) = p;
    for (const auto& f : out.fillers) out.u.basis.col(col++) = f;
    if (r == 0 || numlin::numerical_rank<cplx>(out.u.basis, tol) == r) return out;
  }
  throw Error(ErrorCode::DegenerateDraw, "could not draw an independent planted basis");
}

double match_error(const std::vector<Vector>& planted, const std::vector<Vector>& found) {
  if (planted.size() != found.size()) return 1.0;
  double worst = 0.0;
  for (const auto& p : planted) {
    double best = 1.0;
    for (const auto& f : found) best = std::min(best, numlin::line_distance(p, f));
    worst = std::max(worst, best);
  }
  return worst;
}

namespace {

constexpr double kMatchTol = 1e-6;

TrialOutcome classify_elements(const PlantedInstance& inst, const std::vector<Vector>& found, TrialOutcome out) {
  out.match_error = match_error(inst.planted, found);
  out.kind = (inst.s > 0 && out.match_error <= kMatchTol) ? TrialKind::Recovered : TrialKind::Mismatch;
  return out;
}

TrialOutcome trial_with(const GridCell& cell, const ComponentList& comps, std::uint64_t seed, const TolerancePolicy& tol) {
  TrialOutcome out;
  out.seed = seed;
  PlantedInstance inst;
  try {
    inst = gen_planted(cell.spec, cell.r, cell.s, seed, tol);
  } catch (const Error& e) {
    out.kind = TrialKind::Fail;
    out.stage = "instance";
    return out;
  }
  const std::uint64_t run_seed = derive_seed(seed, 0xa1ULL);
  if (comps.size() == 1) {
    const IntersectionResult res = algorithm1(inst.u, comps.front(), run_seed, tol);
    if (const auto* fail = std::get_if<FailResult>(&res)) {
      out.kind = TrialKind::Fail;
      out.stage = fail->stage + ":" + fail->reason;
      return out;
    }
    out.certified = verify_certificate(res, inst.u, comps.front(), tol);
    if (std::holds_alternative<TrivialResult>(res)) {
      out.kind = cell.s == 0 ? TrialKind::Trivial : TrialKind::Mismatch;
      out.match_error = cell.s == 0 ? 0.0 : 1.0;
      return out;
    }
    return classify_elements(inst, std::get<ElementsResult>(res).elements, out);
  }
  const ComponentsResult res = algorithm2(inst.u, comps, run_seed, tol);
  out.certified = true;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!std::holds_alternative<FailResult>(res.per_component[i]))
      out.certified = out.certified && verify_certificate(res.per_component[i], inst.u, comps[i], tol);
  switch (res.aggregate) {
    case Aggregate::TrivialAll:
      out.kind = cell.s == 0 ? TrialKind::Trivial : TrialKind::Mismatch;
      out.match_error = cell.s == 0 ? 0.0 : 1.0;
      return out;
    case Aggregate::FoundElements:
      return classify_elements(inst, res.elements, out);
    case Aggregate::Fail:
      break;
  }
  out.kind = TrialKind::Fail;
  out.certified = false;
  for (const auto& r : res.per_component)
    if (const auto* fail = std::get_if<FailResult>(&r)) {
      out.stage = fail->stage + ":" + fail->reason;
      break;
    }
  return out;
}

}  // namespace

TrialOutcome run_trial(const GridCell& cell, std::uint64_t seed, const TolerancePolicy& tol) {
  return trial_with(cell, generators(cell.spec), seed, tol);
}

GridReport genericity_grid(const std::vector<GridCell>& grid, int seeds_per_cell, const TolerancePolicy& tol,
                           std::uint64_t base_seed, int threads) {
  GridReport report;
  report.cells.resize(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  auto run_cell = [&](std::size_t c) {
    try {
      const auto start = std::chrono::steady_clock::now();
      CellReport& cell = report.cells[c];
      cell.cell = grid[c];
      const ComponentList comps = generators(grid[c].spec);
      const std::uint64_t cell_seed = derive_seed(base_seed, c);
      int ok = 0;
      for (int t = 0; t < seeds_per_cell; ++t) {
        cell.trials.push_back(trial_with(grid[c], comps, derive_seed(cell_seed, static_cast<std::uint64_t>(t)), tol));
        const TrialKind want = grid[c].s == 0 ? TrialKind::Trivial : TrialKind::Recovered;
        if (cell.trials.back().kind == want) ++ok;
      }
      cell.success_rate = seeds_per_cell > 0 ? static_cast<double>(ok) / seeds_per_cell : 0.0;
      cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(grid.size(), static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < grid.size(); ++c) run_cell(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < grid.size(); c += workers) run_cell(c);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return report;
}

HookReport hook_lemma_suite(const VarietySpec& spec, int degree, int ell, Index dim_u, int trials, std::uint64_t seed,
                            const TolerancePolicy& tol) {
  if (ell < 1 || ell > degree - 1) throw Error(ErrorCode::InvalidArgument, "hook suite needs 1 <= ell <= d-1");
  const Index n = spec.ambient();
  const Index sym_dim = binomial(n + degree - 1, degree);
  if (dim_u < 1 || dim_u > sym_dim) throw Error(ErrorCode::InvalidArgument, "dim_U must lie in [1, dim S^d]");
  const Index denom = binomial(n + ell - 1, ell);
  HookReport report;
  report.trials = trials;
  report.bound = (dim_u + denom - 1) / denom;
  report.min_dim = binomial(n + degree - ell - 1, degree - ell);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(2 * t)));
    const Vector v = sample_point(spec, derive_seed(seed, static_cast<std::uint64_t>(2 * t + 1)));
    Matrix contracted(binomial(n + degree - ell - 1, degree - ell), dim_u);
    for (Index k = 0; k < dim_u; ++k) {
      const SymTensor u(n, degree, rng.vector(sym_dim, spec.field));
      contracted.col(k) = hook(u, v, ell).coeffs();
    }
    const Index dim = numlin::numerical_rank<cplx>(contracted, tol);
    report.min_dim = std::min(report.min_dim, dim);
    if (dim < report.bound) {
      ++report.violations;
      if (!report.counterexample) report.counterexample = t;
    }
  }
  return report;
}

namespace {

// Projection of `target` onto span{a, b} cap span(basis), falling back to `b`.
Vector pair_intersection(const Vector& a, const Vector& b, const Matrix& basis, const TolerancePolicy& tol) {
  Matrix stacked(a.size(), 2 + basis.cols());
  stacked << a, b, -basis;
  const Matrix kernel = numlin::kernel_basis<cplx>(stacked, tol);
  if (kernel.cols() == 0) throw Error(ErrorCode::DegenerateDraw, "pair span misses the subspace");
  Matrix pair(a.size(), 2);
  pair << a, b;
  const Matrix meet = numlin::column_space_basis<cplx>(Matrix(pair * kernel.topRows(2)), tol);
  if (meet.cols() == 0) throw Error(ErrorCode::DegenerateDraw, "pair span meets the subspace only at zero");
  Vector u = meet * (meet.adjoint() * a);
  if (u.norm() <= 1e-8 * a.norm()) u = meet * (meet.adjoint() * b);
  if (u.norm() <= 1e-8 * b.norm()) u = meet.col(0);
  numlin::normalize_phase(u);
  return u;
}

double projection_residual(const Vector& x, const Matrix& spanning, const TolerancePolicy& tol) {
  const Matrix q = numlin::column_space_basis<cplx>(spanning, tol);
  return (x - q * (q.adjoint() * x)).norm() / x.norm();
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

CounterexampleWitness foobi_counterexample(std::uint64_t seed, bool canonical, const TolerancePolicy& tol) {
  constexpr Index n = 4;
  for (int attempt = 0; attempt < tol.max_retries; ++attempt) {
    CounterexampleWitness w;
    if (canonical) {
      w.u_basis = Matrix::Identity(n, 3);
      for (Index i = 0; i < n; ++i) w.vs.push_back(Vector::Unit(n, i));
    } else {
      Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
      w.u_basis = rng.matrix(n, 3, Field::Real);
      for (Index i = 0; i < n; ++i) w.vs.push_back(rng.vector(n, Field::Real));
    }
    Matrix v(n, n);
    for (Index i = 0; i < n; ++i) v.col(i) = w.vs[static_cast<std::size_t>(i)];
    if (numlin::numerical_rank<cplx>(v, tol) < n || numlin::numerical_rank<cplx>(w.u_basis, tol) < 3) continue;
    try {
      w.u1 = pair_intersection(w.vs[0], w.vs[1], w.u_basis, tol);
      w.u2 = pair_intersection(w.vs[2], w.vs[3], w.u_basis, tol);
    } catch (const Error&) {
      if (canonical) throw;
      continue;
    }
    w.product = kron(w.u1, w.u2);
    const Matrix q = numlin::column_space_basis<cplx>(w.u_basis, tol);
    Matrix uu(n * n, 9);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) uu.col(i * 3 + j) = kron(q.col(i), q.col(j));
    Matrix pairs(n * n, 6);
    Index col = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) pairs.col(col++) = kron(w.vs[i], w.vs[j]);
    w.residual = std::max(projection_residual(w.product, uu, tol), projection_residual(w.product, pairs, tol));
    w.within_hypotheses = w.dim_w + w.pair_count <= n * n && w.r <= n + 1;
    return w;
  }
  throw Error(ErrorCode::DegenerateDraw, "no usable counterexample draw within the retry budget");
}

}  // namespace vsx

#include "vsx/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/symtensor.hpp"

namespace vsx {

void DenseTensor::validate() const {
  if (dims.empty()) throw Error(ErrorCode::DimensionMismatch, "tensor has no modes");
  Index total = 1;
  for (Index d : dims) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, "tensor dimensions must be positive");
    total *= d;
  }
  if (entries.size() != total)
    throw Error(ErrorCode::DimensionMismatch, "tensor has " + std::to_string(entries.size()) + " entries, expected " +
                                                  std::to_string(total));
  if (!entries.allFinite()) throw Error(ErrorCode::InvalidArgument, "tensor has non-finite entries");
}

namespace {

void snap_real(Vector& v) {
  const double n = v.norm();
  if (n > 0.0 && v.imag().cwiseAbs().maxCoeff() <= 1e-6 * n) v = v.real().cast<cplx>();
}

// Visits every multi-index of a row-major tensor together with its flat offset.
template <class Fn>
void for_each_index(const std::vector<Index>& dims, Fn&& fn) {
  std::vector<Index> idx(dims.size(), 0);
  Index total = 1;
  for (Index d : dims) total *= d;
  for (Index flat = 0; flat < total; ++flat) {
    fn(idx, flat);
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < dims[static_cast<std::size_t>(k)]) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
}

Index group_offset(const std::vector<Index>& idx, const std::vector<Index>& dims, const std::vector<int>& modes) {
  Index off = 0;
  for (int m : modes) off = off * dims[static_cast<std::size_t>(m)] + idx[static_cast<std::size_t>(m)];
  return off;
}

Index group_size(const std::vector<Index>& dims, const std::vector<int>& modes) {
  Index p = 1;
  for (int m : modes) p *= dims[static_cast<std::size_t>(m)];
  return p;
}

Matrix group_matrix(const DenseTensor& t, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(group_size(t.dims, rows), group_size(t.dims, cols));
  for_each_index(t.dims, [&](const std::vector<Index>& idx, Index flat) {
    out(group_offset(idx, t.dims, rows), group_offset(idx, t.dims, cols)) = t.entries(flat);
  });
  return out;
}

// Successive top-singular-pair splitting of a vector over a product of modes.
// Returns the legs and the relative tail mass that a product tensor would not carry.
std::pair<std::vector<Vector>, double> split_product(const Vector& x, const std::vector<Index>& dims) {
  std::vector<Vector> legs;
  Vector rest = x;
  double tail_sq = 0.0;
  const double total_sq = x.squaredNorm();
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    const Index rows = dims[k];
    const Index cols = rest.size() / rows;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) m.row(i) = rest.segment(i * cols, cols).transpose();
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    for (Index i = 1; i < sv.size(); ++i) tail_sq += sv(i) * sv(i);
    legs.push_back(svd.matrixU().col(0));
    rest = sv(0) * svd.matrixV().col(0).conjugate();
  }
  legs.push_back(rest);
  const double tail = total_sq > 0.0 ? std::sqrt(tail_sq / total_sq) : 0.0;
  return {std::move(legs), tail};
}

RankOneTerm normalized_term(std::vector<Vector> factors, cplx scale, Field field) {
  RankOneTerm term;
  term.scale = scale;
  for (auto& f : factors) {
    term.scale *= numlin::normalize_phase(f);
    if (field == Field::Real) snap_real(f);
    term.factors.push_back(std::move(f));
  }
  if (field == Field::Real && std::abs(term.scale.imag()) <= 1e-6 * std::abs(term.scale)) term.scale = term.scale.real();
  return term;
}

void sort_terms(TensorDecomposition& d) {
  std::stable_sort(d.terms.begin(), d.terms.end(),
                   [](const RankOneTerm& a, const RankOneTerm& b) { return std::abs(a.scale) > std::abs(b.scale); });
}

double relative_error(const Vector& target, const Vector& approx) {
  const double nt = target.norm();
  const double err = (target - approx).norm();
  return nt > 0.0 ? err / nt : err;
}

std::vector<Index> dims_of(const std::vector<Index>& dims, const std::vector<int>& modes) {
  std::vector<Index> out;
  for (int m : modes) out.push_back(dims[static_cast<std::size_t>(m)]);
  return out;
}

TensorDecomposition grouped_decompose(const DenseTensor& t, const std::vector<int>& v_modes,
                                      const std::vector<int>& w_modes, const VarietySpec& spec, std::uint64_t seed,
                                      const TolerancePolicy& tol, bool require_product_w) {
  const XWDecomposition xw = xw_decompose(group_matrix(t, v_modes, w_modes), spec, seed, tol);
  const auto v_dims = dims_of(t.dims, v_modes);
  const auto w_dims = dims_of(t.dims, w_modes);

  bool w_product = true;
  std::vector<std::pair<std::vector<Vector>, std::vector<Vector>>> split;
  for (const auto& term : xw.terms) {
    auto [v_legs, v_tail] = split_product(term.v, v_dims);
    if (!(v_tail <= tol.residual_tol))
      throw Error(ErrorCode::NotUnique, "recovered variety point is not a product tensor (tail " + std::to_string(v_tail) + ")");
    auto [w_legs, w_tail] = split_product(term.w, w_dims);
    if (!(w_tail <= tol.residual_tol)) w_product = false;
    split.emplace_back(std::move(v_legs), std::move(w_legs));
  }
  if (!w_product && require_product_w)
    throw Error(ErrorCode::NonProductW, "w-side factors are not product tensors");

  TensorDecomposition out;
  out.dims = t.dims;
  out.certificate = xw.certificate;
  std::vector<std::vector<int>> groups;
  for (int m : v_modes) groups.push_back({m});
  if (w_product) {
    for (int m : w_modes) groups.push_back({m});
  } else {
    groups.push_back(w_modes);
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return groups[a].front() < groups[b].front(); });
  for (std::size_t k : order) out.factor_modes.push_back(groups[k]);

  for (std::size_t i = 0; i < xw.terms.size(); ++i) {
    std::vector<Vector> factors = split[i].first;
    if (w_product) {
      for (auto& leg : split[i].second) factors.push_back(leg);
    } else {
      factors.push_back(xw.terms[i].w);
    }
    std::vector<Vector> ordered;
    for (std::size_t k : order) ordered.push_back(std::move(factors[k]));
    out.terms.push_back(normalized_term(std::move(ordered), 1.0, t.field));
  }
  sort_terms(out);
  out.residual = relative_error(t.entries, reconstruct(out));
  return out;
}

}  // namespace

XWDecomposition xw_decompose(const Matrix& t, const VarietySpec& spec, std::uint64_t seed, const TolerancePolicy& tol) {
  tol.validate();
  spec.validate();
  if (spec.reducible()) throw Error(ErrorCode::InvalidSpec, "decompositions need an irreducible variety");
  if (t.rows() != spec.ambient())
    throw Error(ErrorCode::DimensionMismatch, "tensor V-side dimension " + std::to_string(t.rows()) +
                                                  " differs from variety ambient " + std::to_string(spec.ambient()));
  if (!t.allFinite()) throw Error(ErrorCode::InvalidArgument, "tensor has non-finite entries");

  XWDecomposition out;
  const Matrix basis = numlin::column_space_basis<cplx>(t, tol);
  const Index rank = basis.cols();
  if (rank == 0) return out;

  const PolySystem sys = generators(spec).front();
  const IntersectionResult found = algorithm1(Subspace{spec.field, basis}, sys, seed, tol);
  if (const auto* fail = std::get_if<FailResult>(&found))
    throw Error(ErrorCode::NotUnique, "intersection failed at " + fail->stage + ": " + fail->reason);
  if (std::holds_alternative<TrivialResult>(found))
    throw Error(ErrorCode::RankMismatch, "column space of T meets the variety trivially");
  const auto& elements = std::get<ElementsResult>(found);
  const Index s = static_cast<Index>(elements.elements.size());
  if (s != rank)
    throw Error(ErrorCode::RankMismatch,
                "found " + std::to_string(s) + " variety points but T has rank " + std::to_string(rank));

  Matrix vs(t.rows(), s);
  for (Index i = 0; i < s; ++i) vs.col(i) = elements.elements[static_cast<std::size_t>(i)];
  const Matrix ws = numlin::pseudoinverse<cplx>(vs, tol) * t;  // row i is w_i^T
  for (Index i = 0; i < s; ++i) {
    Vector w = ws.row(i).transpose();
    if (spec.field == Field::Real) snap_real(w);
    out.terms.push_back({vs.col(i), std::move(w)});
  }
  std::stable_sort(out.terms.begin(), out.terms.end(),
                   [](const XWTerm& a, const XWTerm& b) { return a.v.norm() * a.w.norm() > b.v.norm() * b.w.norm(); });
  Matrix rebuilt = Matrix::Zero(t.rows(), t.cols());
  for (const auto& term : out.terms) rebuilt += term.v * term.w.transpose();
  out.residual = (t - rebuilt).norm() / t.norm();
  out.certificate = elements.certificate;
  if (!(out.residual <= tol.residual_tol))
    throw Error(ErrorCode::NotUnique, "reconstruction residual " + std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

Vector reconstruct(const TensorDecomposition& d) {
  Index total = 1;
  for (Index n : d.dims) total *= n;
  Vector out = Vector::Zero(total);
  if (d.power > 0) {
    for (const auto& term : d.terms) out += term.scale * kron_power(term.factors.front(), d.power);
    return out;
  }
  for_each_index(d.dims, [&](const std::vector<Index>& idx, Index flat) {
    cplx acc = 0.0;
    for (const auto& term : d.terms) {
      cplx prod = term.scale;
      for (std::size_t f = 0; f < term.factors.size(); ++f)
        prod *= term.factors[f](group_offset(idx, d.dims, d.factor_modes[f]));
      acc += prod;
    }
    out(flat) = acc;
  });
  return out;
}

TensorDecomposition tensor3_decompose(const DenseTensor& t, std::uint64_t seed, const TolerancePolicy& tol) {
  t.validate();
  if (t.order() != 3) throw Error(ErrorCode::DimensionMismatch, "tensor3 mode needs an order-3 tensor");
  if (t.dims[0] < 2 || t.dims[1] < 2) throw Error(ErrorCode::InvalidArgument, "tensor3 mode needs n1, n2 >= 2");
  VarietySpec spec{Determinantal{t.dims[0], t.dims[1], 1}, t.field};
  return grouped_decompose(t, {0, 1}, {2}, spec, seed, tol, true);
}

GroupedShape GroupedShape::balanced(std::size_t order) {
  GroupedShape g;
  const std::size_t first = (order + 1) / 2;
  for (std::size_t k = 0; k < order; ++k) (k < first ? g.v_modes : g.w_modes).push_back(static_cast<int>(k));
  return g;
}

void GroupedShape::validate(std::size_t order) const {
  if (v_modes.size() < 2) throw Error(ErrorCode::InvalidArgument, "the v group needs at least two modes");
  if (w_modes.empty()) throw Error(ErrorCode::InvalidArgument, "the w group must be non-empty");
  std::vector<int> all = v_modes;
  all.insert(all.end(), w_modes.begin(), w_modes.end());
  std::sort(all.begin(), all.end());
  if (all.size() != order) throw Error(ErrorCode::InvalidArgument, "grouping does not cover every mode exactly once");
  for (std::size_t k = 0; k < order; ++k)
    if (all[k] != static_cast<int>(k)) throw Error(ErrorCode::InvalidArgument, "grouping is not a partition of the modes");
}

TensorDecomposition tensorm_decompose(const DenseTensor& t, const GroupedShape& grouping, std::uint64_t seed,
                                      const TolerancePolicy& tol, bool require_product_w) {
  t.validate();
  if (t.order() < 3) throw Error(ErrorCode::DimensionMismatch, "tensorm mode needs order >= 3");
  grouping.validate(t.dims.size());
  VarietySpec spec{Segre{dims_of(t.dims, grouping.v_modes)}, t.field};
  return grouped_decompose(t, grouping.v_modes, grouping.w_modes, spec, seed, tol, require_product_w);
}

TensorDecomposition waring_decompose(const DenseTensor& t, std::uint64_t seed, const TolerancePolicy& tol) {
  t.validate();
  const int m = static_cast<int>(t.order());
  if (m < 3) throw Error(ErrorCode::DimensionMismatch, "waring mode needs order >= 3");
  const Index n = t.dims[0];
  for (Index d : t.dims)
    if (d != n) throw Error(ErrorCode::NotSymmetric, "waring mode needs equal dimensions");

  // Compressed values and a symmetry check against every permuted position.
  MultiIndexSpace full_space(n, m);
  Vector compressed = Vector::Zero(full_space.size());
  std::vector<int> tuple(static_cast<std::size_t>(m));
  std::vector<bool> seen(static_cast<std::size_t>(full_space.size()), false);
  const double scale = t.entries.norm();
  double asym = 0.0;
  for_each_index(t.dims, [&](const std::vector<Index>& idx, Index flat) {
    for (int k = 0; k < m; ++k) tuple[static_cast<std::size_t>(k)] = static_cast<int>(idx[static_cast<std::size_t>(k)]);
    const Index pos = full_space.position_unsorted(tuple);
    if (!seen[static_cast<std::size_t>(pos)]) {
      seen[static_cast<std::size_t>(pos)] = true;
      compressed(pos) = t.entries(flat);
    } else {
      asym = std::max(asym, std::abs(compressed(pos) - t.entries(flat)));
    }
  });
  if (asym > tol.residual_tol * std::max(scale, 1e-300))
    throw Error(ErrorCode::NotSymmetric, "tensor is not symmetric (deviation " + std::to_string(asym) + ")");

  const int k1 = (m + 1) / 2;
  const int k2 = m / 2;
  MultiIndexSpace left(n, k1);
  MultiIndexSpace right(n, k2);
  const Eigen::VectorXd wl = isometric_weights(left);
  const Eigen::VectorXd wr = isometric_weights(right);
  Matrix flat(left.size(), right.size());
  std::vector<int> merged(static_cast<std::size_t>(m));
  {
    auto a = left.first();
    Index i = 0;
    do {
      auto b = right.first();
      Index j = 0;
      do {
        std::merge(a.begin(), a.end(), b.begin(), b.end(), merged.begin());
        flat(i, j) = wl(i) * wr(j) * compressed(full_space.position(merged));
        ++j;
      } while (right.next(b));
      ++i;
    } while (left.next(a));
  }

  VarietySpec spec{Veronese{n, k1}, t.field};
  const XWDecomposition xw = xw_decompose(flat, spec, seed, tol);

  TensorDecomposition out;
  out.dims = t.dims;
  out.power = m;
  out.factor_modes.push_back({});
  for (int k = 0; k < m; ++k) out.factor_modes.front().push_back(k);
  out.certificate = xw.certificate;

  const Eigen::VectorXd wf = isometric_weights(full_space);
  const Vector target = compressed.cwiseProduct(wf.cast<cplx>());
  Matrix design(full_space.size(), static_cast<Index>(xw.terms.size()));
  std::vector<Vector> vs;
  for (std::size_t i = 0; i < xw.terms.size(); ++i) {
    Vector v = veronese_unembed(xw.terms[i].v, n, k1);
    numlin::normalize_phase(v);
    if (t.field == Field::Real) snap_real(v);
    design.col(static_cast<Index>(i)) = veronese_embed(v, m);
    vs.push_back(std::move(v));
  }
  const Vector alpha = design.colPivHouseholderQr().solve(target);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    RankOneTerm term;
    term.factors.push_back(vs[i]);
    term.scale = alpha(static_cast<Index>(i));
    if (t.field == Field::Real && std::abs(term.scale.imag()) <= 1e-6 * std::abs(term.scale)) term.scale = term.scale.real();
    out.terms.push_back(std::move(term));
  }
  sort_terms(out);
  out.residual = relative_error(t.entries, reconstruct(out));
  if (!(out.residual <= tol.residual_tol))
    throw Error(ErrorCode::NotUnique, "waring reconstruction residual " + std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

AidedDecomposition aided_decompose(const DenseTensor& t, Index r, std::uint64_t seed, const TolerancePolicy& tol) {
  t.validate();
  if (t.order() != 3) throw Error(ErrorCode::DimensionMismatch, "aided mode needs an order-3 tensor");
  const Index n1 = t.dims[0];
  const Index n2 = t.dims[1];
  VarietySpec spec{Determinantal{n1, n2, r}, t.field};
  const XWDecomposition xw = xw_decompose(group_matrix(t, {0, 1}, {2}), spec, seed, tol);
  AidedDecomposition out;
  out.residual = xw.residual;
  out.certificate = xw.certificate;
  for (const auto& term : xw.terms) {
    AidedTerm a;
    a.slab.resize(n1, n2);
    for (Index i = 0; i < n1; ++i) a.slab.row(i) = term.v.segment(i * n2, n2).transpose();
    a.w = term.w;
    out.terms.push_back(std::move(a));
  }
  return out;
}

}  // namespace vsx

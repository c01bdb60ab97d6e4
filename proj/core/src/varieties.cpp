#include "vsx/varieties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <Eigen/QR>

#include "vsx/error.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"

namespace vsx {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

Index product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

Index product_of(const std::vector<Index>& dims, const std::vector<int>& modes) {
  Index p = 1;
  for (int m : modes) p *= dims[static_cast<std::size_t>(m)];
  return p;
}

std::vector<int> complement(const std::vector<int>& modes, std::size_t total) {
  std::vector<int> out;
  for (int m = 0; m < static_cast<int>(total); ++m)
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) out.push_back(m);
  return out;
}

// full row-major index of the tensor entry at (row of group A, column of group B)
std::vector<std::vector<Index>> flattening_map(const std::vector<Index>& dims, const std::vector<int>& row_modes) {
  const auto col_modes = complement(row_modes, dims.size());
  const Index rows = product_of(dims, row_modes);
  const Index cols = product_of(dims, col_modes);
  std::vector<Index> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    strides[static_cast<std::size_t>(k)] = strides[static_cast<std::size_t>(k) + 1] * dims[static_cast<std::size_t>(k) + 1];
  auto offset = [&](Index flat, const std::vector<int>& modes) {
    Index off = 0;
    for (int k = static_cast<int>(modes.size()) - 1; k >= 0; --k) {
      const auto mode = static_cast<std::size_t>(modes[static_cast<std::size_t>(k)]);
      off += (flat % dims[mode]) * strides[mode];
      flat /= dims[mode];
    }
    return off;
  };
  std::vector<std::vector<Index>> map(static_cast<std::size_t>(rows), std::vector<Index>(static_cast<std::size_t>(cols)));
  for (Index r = 0; r < rows; ++r) {
    const Index ro = offset(r, row_modes);
    for (Index c = 0; c < cols; ++c) map[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = ro + offset(c, col_modes);
  }
  return map;
}

void for_each_subset(Index n, Index k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n) return;
  std::vector<int> sel(static_cast<std::size_t>(k));
  std::iota(sel.begin(), sel.end(), 0);
  for (;;) {
    fn(sel);
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && sel[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++sel[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) sel[static_cast<std::size_t>(j)] = sel[static_cast<std::size_t>(j) - 1] + 1;
  }
}

// All (order x order) minors of the matrix whose (r, c) entry is coordinate map[r][c].
PolySystem flattening_minors(const std::vector<std::vector<Index>>& map, Index ambient, int order) {
  const Index rows = static_cast<Index>(map.size());
  const Index cols = rows > 0 ? static_cast<Index>(map[0].size()) : 0;
  MultiIndexSpace space(ambient, order);
  std::vector<Eigen::Triplet<cplx>> triplets;
  Index row = 0;
  std::vector<int> perm(static_cast<std::size_t>(order));
  std::vector<int> mono(static_cast<std::size_t>(order));
  for_each_subset(rows, order, [&](const std::vector<int>& rsel) {
    for_each_subset(cols, order, [&](const std::vector<int>& csel) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        int inversions = 0;
        for (int a = 0; a < order; ++a)
          for (int b = a + 1; b < order; ++b)
            if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inversions;
        for (int t = 0; t < order; ++t)
          mono[static_cast<std::size_t>(t)] = static_cast<int>(
              map[static_cast<std::size_t>(rsel[static_cast<std::size_t>(t)])]
                 [static_cast<std::size_t>(csel[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])])]);
        triplets.emplace_back(row, space.position_unsorted(mono), inversions % 2 == 0 ? 1.0 : -1.0);
      } while (std::next_permutation(perm.begin(), perm.end()));
      ++row;
    });
  });
  PolySystem sys{ambient, order, SparseRows(row, space.size())};
  sys.coeffs.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

// Quadrics vanishing on a monomially parametrized variety: monomials x_a x_b
// sharing a key are proportional on the variety with the given weights, so
// the ideal in degree 2 is the orthogonal complement of the weight vector
// inside every key group.
PolySystem fiber_quadrics(Index ambient, const std::function<std::int64_t(int, int)>& key,
                          const std::function<double(int, int)>& weight) {
  MultiIndexSpace space(ambient, 2);
  std::map<std::int64_t, std::vector<std::pair<Index, double>>> groups;
  auto idx = space.first();
  Index pos = 0;
  do {
    groups[key(idx[0], idx[1])].emplace_back(pos++, weight(idx[0], idx[1]));
  } while (space.next(idx));

  std::vector<const std::vector<std::pair<Index, double>>*> ordered;
  for (const auto& [k, members] : groups) ordered.push_back(&members);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->front().first < b->front().first; });

  std::vector<Eigen::Triplet<cplx>> triplets;
  Index row = 0;
  for (const auto* members : ordered) {
    const Index g = static_cast<Index>(members->size());
    if (g < 2) continue;
    Eigen::VectorXd w(g);
    for (Index i = 0; i < g; ++i) w(i) = (*members)[static_cast<std::size_t>(i)].second;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    Eigen::MatrixXd q = qr.householderQ();
    for (Index c = 1; c < g; ++c) {
      for (Index i = 0; i < g; ++i)
        if (q(i, c) != 0.0) triplets.emplace_back(row, (*members)[static_cast<std::size_t>(i)].first, q(i, c));
      ++row;
    }
  }
  PolySystem sys{ambient, 2, SparseRows(row, space.size())};
  sys.coeffs.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

PolySystem segre_generators(const std::vector<Index>& dims) {
  const Index total = product(dims);
  auto key = [&](int a, int b) {
    std::int64_t k = 0;
    for (int m = static_cast<int>(dims.size()) - 1; m >= 0; --m) {
      const Index n = dims[static_cast<std::size_t>(m)];
      const Index ia = a % n;
      const Index ib = b % n;
      a = static_cast<int>(a / n);
      b = static_cast<int>(b / n);
      k = k * n * n + std::min(ia, ib) * n + std::max(ia, ib);
    }
    return k;
  };
  return fiber_quadrics(total, key, [](int, int) { return 1.0; });
}

PolySystem veronese_generators(Index n, int m) {
  MultiIndexSpace base(n, m);
  MultiIndexSpace doubled(n, 2 * m);
  std::vector<std::vector<int>> idx;
  std::vector<double> mult;
  auto a = base.first();
  do {
    idx.push_back(a);
    mult.push_back(MultiIndexSpace::multiplicity(a));
  } while (base.next(a));
  std::vector<int> merged(static_cast<std::size_t>(2 * m));
  auto key = [&](int i, int j) {
    const auto& x = idx[static_cast<std::size_t>(i)];
    const auto& y = idx[static_cast<std::size_t>(j)];
    std::merge(x.begin(), x.end(), y.begin(), y.end(), merged.begin());
    return static_cast<std::int64_t>(doubled.position(merged));
  };
  auto weight = [&](int i, int j) {
    return std::sqrt(mult[static_cast<std::size_t>(i)] * mult[static_cast<std::size_t>(j)]);
  };
  return fiber_quadrics(base.size(), key, weight);
}

void check_count(const PolySystem& sys, std::int64_t expected, const char* what) {
  if (sys.count() != expected)
    throw Error(ErrorCode::InvalidSpec, std::string(what) + " generator count " + std::to_string(sys.count()) +
                                            " differs from closed form " + std::to_string(expected));
}

void validate_dims(const std::vector<Index>& dims, const char* what) {
  if (dims.size() < 2) throw Error(ErrorCode::InvalidSpec, std::string(what) + " needs at least two factors");
  for (Index d : dims)
    if (d < 1) throw Error(ErrorCode::InvalidSpec, std::string(what) + " dimensions must be positive");
}

}  // namespace

std::vector<std::vector<int>> biseparable_parts(std::size_t modes) {
  std::vector<std::vector<int>> parts;
  for (std::size_t size = 1; 2 * size <= modes; ++size) {
    for_each_subset(static_cast<Index>(modes), static_cast<Index>(size), [&](const std::vector<int>& sel) {
      if (2 * size == modes && sel[0] != 0) return;
      parts.push_back(sel);
    });
  }
  return parts;
}

Index VarietySpec::ambient() const {
  return std::visit(Overloaded{
                        [](const Determinantal& k) { return k.rows * k.cols; },
                        [](const Segre& k) { return product(k.dims); },
                        [](const Biseparable& k) { return product(k.dims); },
                        [](const SliceRank1& k) { return product(k.dims); },
                        [](const Veronese& k) { return static_cast<Index>(binomial(k.n + k.m - 1, k.m)); },
                        [](const Custom& k) { return k.system.n; },
                    },
                    kind);
}

bool VarietySpec::reducible() const {
  return std::holds_alternative<Biseparable>(kind) || std::holds_alternative<SliceRank1>(kind);
}

void VarietySpec::validate() const {
  std::visit(Overloaded{
                 [](const Determinantal& k) {
                   if (k.rows < 1 || k.cols < 1) throw Error(ErrorCode::InvalidSpec, "determinantal dims must be positive");
                   if (k.rank < 1 || k.rank >= std::min(k.rows, k.cols))
                     throw Error(ErrorCode::InvalidSpec, "determinantal rank must satisfy 1 <= r < min(n1, n2)");
                 },
                 [](const Segre& k) { validate_dims(k.dims, "segre"); },
                 [](const Biseparable& k) { validate_dims(k.dims, "biseparable"); },
                 [](const SliceRank1& k) { validate_dims(k.dims, "slice"); },
                 [](const Veronese& k) {
                   if (k.n < 1 || k.m < 1) throw Error(ErrorCode::InvalidSpec, "veronese needs n >= 1 and m >= 1");
                 },
                 [](const Custom& k) {
                   if (k.system.degree < 1) throw Error(ErrorCode::InvalidSpec, "custom degree must be >= 1");
                   if (k.system.n < 1) throw Error(ErrorCode::InvalidSpec, "custom ambient dimension must be >= 1");
                   if (k.system.coeffs.cols() != binomial(k.system.n + k.system.degree - 1, k.system.degree))
                     throw Error(ErrorCode::InvalidSpec, "custom generator rows must have C(n+d-1, d) entries");
                 },
             },
             kind);
}

std::vector<std::int64_t> expected_generator_counts(const VarietySpec& spec) {
  spec.validate();
  auto c2 = [](std::int64_t x) { return binomial(x, 2); };
  return std::visit(
      Overloaded{
          [](const Determinantal& k) {
            return std::vector<std::int64_t>{binomial(k.rows, k.rank + 1) * binomial(k.cols, k.rank + 1)};
          },
          [&](const Segre& k) {
            std::int64_t sub = 1;
            for (Index d : k.dims) sub *= binomial(d + 1, 2);
            return std::vector<std::int64_t>{c2(product(k.dims) + 1) - sub};
          },
          [&](const Biseparable& k) {
            std::vector<std::int64_t> out;
            for (const auto& part : biseparable_parts(k.dims.size()))
              out.push_back(c2(product_of(k.dims, part)) * c2(product_of(k.dims, complement(part, k.dims.size()))));
            return out;
          },
          [&](const SliceRank1& k) {
            std::vector<std::int64_t> out;
            for (std::size_t i = 0; i < k.dims.size(); ++i)
              out.push_back(c2(k.dims[i]) * c2(product(k.dims) / k.dims[i]));
            return out;
          },
          [&](const Veronese& k) {
            return std::vector<std::int64_t>{c2(binomial(k.n + k.m - 1, k.m) + 1) - binomial(k.n + 2 * k.m - 1, 2 * k.m)};
          },
          [](const Custom& k) { return std::vector<std::int64_t>{k.system.count()}; },
      },
      spec.kind);
}

ComponentList generators(const VarietySpec& spec) {
  spec.validate();
  const auto expected = expected_generator_counts(spec);
  ComponentList comps = std::visit(
      Overloaded{
          [](const Determinantal& k) {
            std::vector<Index> dims{k.rows, k.cols};
            return ComponentList{flattening_minors(flattening_map(dims, {0}), k.rows * k.cols, static_cast<int>(k.rank) + 1)};
          },
          [](const Segre& k) { return ComponentList{segre_generators(k.dims)}; },
          [](const Biseparable& k) {
            ComponentList out;
            for (const auto& part : biseparable_parts(k.dims.size()))
              out.push_back(flattening_minors(flattening_map(k.dims, part), product(k.dims), 2));
            return out;
          },
          [](const SliceRank1& k) {
            ComponentList out;
            for (std::size_t i = 0; i < k.dims.size(); ++i)
              out.push_back(flattening_minors(flattening_map(k.dims, {static_cast<int>(i)}), product(k.dims), 2));
            return out;
          },
          [](const Veronese& k) { return ComponentList{veronese_generators(k.n, k.m)}; },
          [](const Custom& k) { return ComponentList{k.system}; },
      },
      spec.kind);
  for (std::size_t i = 0; i < comps.size(); ++i) check_count(comps[i], expected[i], "variety");
  return comps;
}

Vector apply_phi(const PolySystem& sys, const SymTensor& u) {
  if (u.degree() != sys.degree || u.n() != sys.n)
    throw Error(ErrorCode::DegreeMismatch, "symmetric tensor does not match the generator degree/ambient");
  return sys.coeffs * u.coeffs();
}

Matrix apply_phi(const PolySystem& sys, const Matrix& coeff_columns) {
  if (coeff_columns.rows() != sys.coeffs.cols())
    throw Error(ErrorCode::DegreeMismatch, "coefficient columns do not match the generator space");
  return sys.coeffs * coeff_columns;
}

Vector evaluate(const PolySystem& sys, const Vector& v) {
  if (v.size() != sys.n) throw Error(ErrorCode::DimensionMismatch, "point length differs from ambient dimension");
  return sys.coeffs * power(v, sys.degree).coeffs();
}

double membership_residual(const PolySystem& sys, const Vector& v) {
  const double nv = v.norm();
  if (!(nv > 0.0) || sys.count() == 0) return 0.0;
  return evaluate(sys, v).cwiseAbs().maxCoeff() / std::pow(nv, sys.degree);
}

bool membership(const ComponentList& comps, const Vector& v, const TolerancePolicy& tol) {
  return std::any_of(comps.begin(), comps.end(),
                     [&](const PolySystem& sys) { return membership_residual(sys, v) <= tol.residual_tol; });
}

bool membership(const VarietySpec& spec, const Vector& v, const TolerancePolicy& tol) {
  return membership(generators(spec), v, tol);
}

Vector veronese_embed(const Vector& v, int m) {
  SymTensor p = power(v, m);
  return p.coeffs().cwiseProduct(isometric_weights(p.space()).cast<cplx>());
}

Vector veronese_unembed(const Vector& point, Index n, int m) {
  MultiIndexSpace space(n, m);
  if (point.size() != space.size()) throw Error(ErrorCode::DimensionMismatch, "veronese point has wrong length");
  SymTensor t(n, m, point.cwiseQuotient(isometric_weights(space).cast<cplx>()));
  if (m == 1) return t.coeffs();
  Eigen::BDCSVD<Matrix> svd(as_mode_matrix(t), Eigen::ComputeThinU);
  return svd.matrixU().col(0);
}

namespace {

Vector scatter_outer(const std::vector<Index>& dims, const std::vector<int>& row_modes, const Vector& x, const Vector& y) {
  const auto map = flattening_map(dims, row_modes);
  Vector out(product(dims));
  for (Index r = 0; r < x.size(); ++r)
    for (Index c = 0; c < y.size(); ++c) out(map[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) = x(r) * y(c);
  return out;
}

Vector sample_rank_one(const std::vector<Index>& dims, const std::vector<int>& part, Field field, Rng& rng) {
  const Vector x = rng.vector(product_of(dims, part), field);
  const Vector y = rng.vector(product_of(dims, complement(part, dims.size())), field);
  return scatter_outer(dims, part, x, y);
}

std::size_t component_count(const VarietySpec& spec) {
  if (const auto* b = std::get_if<Biseparable>(&spec.kind)) return biseparable_parts(b->dims.size()).size();
  if (const auto* s = std::get_if<SliceRank1>(&spec.kind)) return s->dims.size();
  return 1;
}

}  // namespace

Vector sample_component_point(const VarietySpec& spec, std::size_t component, std::uint64_t seed) {
  spec.validate();
  if (component >= component_count(spec)) throw Error(ErrorCode::InvalidArgument, "component index out of range");
  Rng rng(seed);
  const Field f = spec.field;
  return std::visit(
      Overloaded{
          [&](const Determinantal& k) {
            const Matrix a = rng.matrix(k.rows, k.rank, f);
            const Matrix b = rng.matrix(k.rank, k.cols, f);
            const Matrix prod = a * b;
            Vector out(k.rows * k.cols);
            for (Index i = 0; i < k.rows; ++i) out.segment(i * k.cols, k.cols) = prod.row(i).transpose();
            return out;
          },
          [&](const Segre& k) {
            Vector out = Vector::Ones(1);
            for (Index d : k.dims) {
              const Vector leg = rng.vector(d, f);
              Vector next(out.size() * d);
              for (Index i = 0; i < out.size(); ++i) next.segment(i * d, d) = out(i) * leg;
              out = std::move(next);
            }
            return out;
          },
          [&](const Biseparable& k) {
            return sample_rank_one(k.dims, biseparable_parts(k.dims.size())[component], f, rng);
          },
          [&](const SliceRank1& k) { return sample_rank_one(k.dims, {static_cast<int>(component)}, f, rng); },
          [&](const Veronese& k) { return veronese_embed(rng.vector(k.n, f), k.m); },
          [](const Custom&) -> Vector { throw Error(ErrorCode::InvalidSpec, "custom varieties cannot be sampled"); },
      },
      spec.kind);
}

Vector sample_point(const VarietySpec& spec, std::uint64_t seed) {
  const std::size_t comps = component_count(spec);
  const std::size_t pick = comps > 1 ? Rng(derive_seed(seed, 0)).uniform_index(comps) : 0;
  return sample_component_point(spec, pick, comps > 1 ? derive_seed(seed, 1) : seed);
}

Index numerical_rank(const PolySystem& sys, const TolerancePolicy& tol) {
  const Index p = sys.count();
  const Index dim = sys.coeffs.cols();
  if (p == 0 || dim == 0) return 0;
  if (p * dim <= 1'000'000) return numlin::numerical_rank<cplx>(Matrix(sys.coeffs), tol);
  const Eigen::SparseMatrix<cplx> gram = sys.coeffs * SparseRows(sys.coeffs.adjoint());
  Eigen::VectorXd lam;
  bool diagonal = true;
  for (Index k = 0; k < gram.outerSize() && diagonal; ++k)
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(gram, k); it; ++it)
      if (it.row() != it.col() && it.value() != cplx(0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    lam = gram.diagonal().real();
  } else {
    if (p > 6000) throw Error(ErrorCode::Overflow, "generator Gram matrix too large for a dense rank test");
    Eigen::SelfAdjointEigenSolver<Matrix> eig{Matrix(gram), Eigen::EigenvaluesOnly};
    lam = eig.eigenvalues();
  }
  const double top = lam.maxCoeff();
  if (!(top > 0.0)) return 0;
  Index r = 0;
  for (Index i = 0; i < lam.size(); ++i)
    if (std::sqrt(std::max(0.0, lam(i)) / top) > tol.rank_rel_tol) ++r;
  return r;
}

std::int64_t rank_bound(Index n, int degree, std::int64_t p) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "rank bound needs degree >= 1");
  __int128 denom = binomial(n + degree - 2, degree - 1);
  for (int k = 2; k < degree; ++k) denom *= k;
  return static_cast<std::int64_t>(static_cast<__int128>(p) / denom);
}

std::int64_t rank_bound(const PolySystem& sys) { return rank_bound(sys.n, sys.degree, sys.count()); }

}  // namespace vsx

#include "vsx/io.hpp"

#include <fstream>

#include "vsx/error.hpp"
#include "vsx/symtensor.hpp"

namespace vsx::io {

namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("field '") + key + "': " + e.what());
  }
}

Field field_of(const json& j) {
  return j.is_object() && j.contains("field") ? field_from_string(get<std::string>(j, "field")) : Field::Complex;
}

std::vector<Index> dims_of(const json& j) {
  auto dims = get<std::vector<Index>>(j, "dims");
  for (Index d : dims)
    if (d < 1) throw Error(ErrorCode::Parse, "dimensions must be positive");
  return dims;
}

json field_tag(Field f) { return std::string(to_string(f)); }

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

json scalar_to_json(cplx z, Field field) {
  if (field == Field::Real) return z.real();
  return json::array({z.real(), z.imag()});
}

cplx scalar_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::Parse, "expected a number or an [re, im] pair, got " + j.dump());
}

json vector_to_json(const Vector& v, Field field) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i), field));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "expected an array of scalars");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from_json(j[i]);
  return v;
}

json to_json(const VarietySpec& spec) {
  json out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Determinantal>) {
          out = {{"kind", "determinantal"}, {"dims", {k.rows, k.cols}}, {"r", k.rank}};
        } else if constexpr (std::is_same_v<K, Segre>) {
          out = {{"kind", "segre"}, {"dims", k.dims}};
        } else if constexpr (std::is_same_v<K, Biseparable>) {
          out = {{"kind", "biseparable"}, {"dims", k.dims}};
        } else if constexpr (std::is_same_v<K, SliceRank1>) {
          out = {{"kind", "slice"}, {"dims", k.dims}};
        } else if constexpr (std::is_same_v<K, Veronese>) {
          out = {{"kind", "veronese"}, {"n", k.n}, {"m", k.m}};
        } else {
          json rows = json::array();
          const Matrix dense(k.system.coeffs);
          for (Index r = 0; r < dense.rows(); ++r) rows.push_back(vector_to_json(dense.row(r).transpose(), spec.field));
          out = {{"kind", "custom"}, {"degree", k.system.degree}, {"n", k.system.n}, {"generators", rows}};
        }
      },
      spec.kind);
  out["field"] = field_tag(spec.field);
  return out;
}

VarietySpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "variety spec must be a JSON object");
  VarietySpec spec;
  spec.field = field_of(j);
  const auto kind = get<std::string>(j, "kind");
  if (kind == "determinantal") {
    const auto dims = dims_of(j);
    if (dims.size() != 2) throw Error(ErrorCode::Parse, "determinantal needs dims [n1, n2]");
    spec.kind = Determinantal{dims[0], dims[1], get<Index>(j, "r")};
  } else if (kind == "segre") {
    spec.kind = Segre{dims_of(j)};
  } else if (kind == "biseparable") {
    spec.kind = Biseparable{dims_of(j)};
  } else if (kind == "slice") {
    spec.kind = SliceRank1{dims_of(j)};
  } else if (kind == "veronese") {
    spec.kind = Veronese{get<Index>(j, "n"), get<int>(j, "m")};
  } else if (kind == "custom") {
    const int degree = get<int>(j, "degree");
    if (degree < 1) throw Error(ErrorCode::Parse, "custom degree must be >= 1");
    const json& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) throw Error(ErrorCode::Parse, "custom generators must be a non-empty array");
    const Index width = static_cast<Index>(gens[0].size());
    Index n = 0;
    if (j.contains("n")) {
      n = get<Index>(j, "n");
    } else {
      for (Index cand = 1; cand <= width; ++cand)
        if (binomial(cand + degree - 1, degree) == width) {
          n = cand;
          break;
        }
    }
    if (n < 1 || binomial(n + degree - 1, degree) != width)
      throw Error(ErrorCode::Parse, "custom generator length is not C(n+d-1, d) for any n");
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t r = 0; r < gens.size(); ++r) {
      const Vector row = vector_from_json(gens[r]);
      if (row.size() != width) throw Error(ErrorCode::Parse, "custom generators differ in length");
      for (Index c = 0; c < width; ++c)
        if (row(c) != cplx(0.0)) trip.emplace_back(static_cast<Index>(r), c, row(c));
    }
    PolySystem sys{n, degree, SparseRows(static_cast<Index>(gens.size()), width)};
    sys.coeffs.setFromTriplets(trip.begin(), trip.end());
    spec.kind = Custom{std::move(sys)};
  } else {
    throw Error(ErrorCode::Parse, "unknown variety kind '" + kind + "'");
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return spec;
}

json to_json(const Subspace& u) {
  json cols = json::array();
  for (Index c = 0; c < u.dim(); ++c) cols.push_back(vector_to_json(u.basis.col(c), u.field));
  return {{"field", field_tag(u.field)}, {"ambient", u.ambient()}, {"basis", cols}};
}

Subspace subspace_from_json(const json& j) {
  Subspace u;
  u.field = field_of(j);
  const Index n = get<Index>(j, "ambient");
  if (n < 1) throw Error(ErrorCode::Parse, "ambient dimension must be positive");
  if (!j.contains("basis") || !j.at("basis").is_array()) throw Error(ErrorCode::Parse, "missing basis array");
  const json& cols = j.at("basis");
  u.basis.resize(n, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Vector col = vector_from_json(cols[c]);
    if (col.size() != n) throw Error(ErrorCode::Parse, "basis column length differs from ambient");
    u.basis.col(static_cast<Index>(c)) = col;
  }
  if (!u.basis.allFinite()) throw Error(ErrorCode::Parse, "basis has non-finite entries");
  return u;
}

json to_json(const DenseTensor& t) {
  return {{"field", field_tag(t.field)}, {"dims", t.dims}, {"entries", vector_to_json(t.entries, t.field)}};
}

DenseTensor tensor_from_json(const json& j) {
  DenseTensor t;
  t.field = field_of(j);
  t.dims = dims_of(j);
  if (!j.contains("entries")) throw Error(ErrorCode::Parse, "missing entries");
  t.entries = vector_from_json(j.at("entries"));
  try {
    t.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return t;
}

json to_json(const KernelCertificate& c) {
  return {{"kind", "kernel"},          {"rows", c.rows},           {"cols", c.cols},
          {"frobenius", c.frobenius},  {"sigma_min", c.sigma_min}, {"sigma_max", c.sigma_max},
          {"field", field_tag(c.field)}, {"sharp", c.sharp}};
}

json to_json(const UniquenessCertificate& c) {
  return {{"kind", "uniqueness"},
          {"s", c.s},
          {"alignment", c.alignment},
          {"independence_sigma_min", c.independence_sigma_min},
          {"span_residual", c.span_residual},
          {"membership_residual", c.membership_residual},
          {"subspace_residual", c.subspace_residual}};
}

UniquenessCertificate uniqueness_from_json(const json& j) {
  UniquenessCertificate c;
  c.s = get<Index>(j, "s");
  c.alignment = get<std::vector<double>>(j, "alignment");
  c.independence_sigma_min = get<double>(j, "independence_sigma_min");
  c.span_residual = get<double>(j, "span_residual");
  c.membership_residual = get<double>(j, "membership_residual");
  c.subspace_residual = get<double>(j, "subspace_residual");
  return c;
}

json to_json(const IntersectionResult& r, Field field) {
  return std::visit(
      [&](const auto& x) -> json {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, TrivialResult>) {
          return {{"outcome", "trivial"}, {"certificate", to_json(x.certificate)}};
        } else if constexpr (std::is_same_v<X, ElementsResult>) {
          json els = json::array();
          for (const auto& v : x.elements) els.push_back(vector_to_json(v, field));
          return {{"outcome", "elements"}, {"elements", els}, {"certificate", to_json(x.certificate)}};
        } else {
          return {{"outcome", "fail"}, {"stage", x.stage}, {"reason", x.reason}};
        }
      },
      r);
}

json to_json(const ComponentsResult& r, Field field) {
  json comps = json::array();
  for (const auto& c : r.per_component) comps.push_back(to_json(c, field));
  json els = json::array();
  for (const auto& v : r.elements) els.push_back(vector_to_json(v, field));
  return {{"aggregate", std::string(to_string(r.aggregate))}, {"elements", els}, {"components", comps}};
}

json to_json(const TensorDecomposition& d, Field field) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    json factors = json::array();
    for (const auto& f : t.factors) factors.push_back(vector_to_json(f, field));
    terms.push_back({{"factors", factors}, {"scale", scalar_to_json(t.scale, field)}});
  }
  json out = {{"dims", d.dims},     {"factor_modes", d.factor_modes}, {"terms", terms},
              {"residual", d.residual}, {"certificate", to_json(d.certificate)}};
  if (d.power > 0) out["power"] = d.power;
  return out;
}

TensorDecomposition decomposition_from_json(const json& j) {
  TensorDecomposition d;
  d.dims = get<std::vector<Index>>(j, "dims");
  d.factor_modes = get<std::vector<std::vector<int>>>(j, "factor_modes");
  d.power = j.contains("power") ? get<int>(j, "power") : 0;
  d.residual = get<double>(j, "residual");
  d.certificate = uniqueness_from_json(j.at("certificate"));
  for (const auto& t : j.at("terms")) {
    RankOneTerm term;
    for (const auto& f : t.at("factors")) term.factors.push_back(vector_from_json(f));
    term.scale = scalar_from_json(t.at("scale"));
    d.terms.push_back(std::move(term));
  }
  return d;
}

json to_json(const XWDecomposition& d, Field field) {
  json terms = json::array();
  for (const auto& t : d.terms)
    terms.push_back({{"factors", {vector_to_json(t.v, field), vector_to_json(t.w, field)}}, {"scale", scalar_to_json(1.0, field)}});
  return {{"terms", terms}, {"residual", d.residual}, {"certificate", to_json(d.certificate)}};
}

json to_json(const AidedDecomposition& d, Field field) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    Vector flat(t.slab.size());
    for (Index i = 0; i < t.slab.rows(); ++i) flat.segment(i * t.slab.cols(), t.slab.cols()) = t.slab.row(i).transpose();
    terms.push_back({{"factors", {vector_to_json(flat, field), vector_to_json(t.w, field)}},
                     {"slab_shape", {t.slab.rows(), t.slab.cols()}},
                     {"scale", scalar_to_json(1.0, field)}});
  }
  return {{"terms", terms}, {"residual", d.residual}, {"certificate", to_json(d.certificate)}};
}

std::vector<GridCell> grid_from_json(const json& j) {
  const json& cells = j.is_object() && j.contains("cells") ? j.at("cells") : j;
  if (!cells.is_array()) throw Error(ErrorCode::Parse, "grid must be an array of cells");
  std::vector<GridCell> out;
  for (const auto& c : cells) out.push_back({spec_from_json(c.at("spec")), get<Index>(c, "R"), get<Index>(c, "s")});
  return out;
}

json to_json(const GridReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    json trials = json::array();
    for (const auto& t : c.trials)
      trials.push_back({{"seed", t.seed},
                        {"outcome", std::string(to_string(t.kind))},
                        {"match_error", t.match_error},
                        {"certified", t.certified},
                        {"stage", t.stage}});
    cells.push_back({{"spec", to_json(c.cell.spec)},
                     {"R", c.cell.r},
                     {"s", c.cell.s},
                     {"success_rate", c.success_rate},
                     {"seconds", c.seconds},
                     {"trials", trials}});
  }
  return {{"cells", cells}};
}

json to_json(const HookReport& r) {
  json out = {{"trials", r.trials}, {"violations", r.violations}, {"bound", r.bound}, {"min_dim", r.min_dim}, {"passed", r.passed()}};
  if (r.counterexample) out["counterexample_trial"] = *r.counterexample;
  return out;
}

json to_json(const CounterexampleWitness& w) {
  json vs = json::array();
  for (const auto& v : w.vs) vs.push_back(vector_to_json(v, Field::Real));
  json basis = json::array();
  for (Index c = 0; c < w.u_basis.cols(); ++c) basis.push_back(vector_to_json(w.u_basis.col(c), Field::Real));
  return {{"U_basis", basis},
          {"v", vs},
          {"u1", vector_to_json(w.u1, Field::Real)},
          {"u2", vector_to_json(w.u2, Field::Real)},
          {"product", vector_to_json(w.product, Field::Real)},
          {"residual", w.residual},
          {"dim_W", w.dim_w},
          {"pair_count", w.pair_count},
          {"R", w.r},
          {"within_hypotheses", w.within_hypotheses}};
}

}  // namespace vsx::io

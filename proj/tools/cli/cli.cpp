#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "vsx/decompose.hpp"
#include "vsx/error.hpp"
#include "vsx/harness.hpp"
#include "vsx/intersect.hpp"
#include "vsx/io.hpp"
#include "vsx/numlin.hpp"
#include "vsx/rng.hpp"
#include "vsx/simdiag.hpp"
#include "vsx/varieties.hpp"

namespace vsx::cli {

using json = nlohmann::json;

namespace {

int parse_threads(const std::string& text) {
  if (text == "auto") return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  try {
    std::size_t used = 0;
    const int n = std::stoi(text, &used);
    if (used == text.size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Parse, "threads must be a count or 'auto'");
}

}  // namespace

void apply_config(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config must be a JSON object");
  try {
    if (j.contains("field")) cfg.field = field_from_string(j.at("field").get<std::string>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) cfg.tol.residual_tol = j.at("tol").get<double>();
    if (j.contains("rank_tol")) cfg.tol.rank_rel_tol = j.at("rank_tol").get<double>();
    if (j.contains("eig_gap")) cfg.tol.eig_gap_rel_tol = j.at("eig_gap").get<double>();
    if (j.contains("retries")) cfg.tol.max_retries = j.at("retries").get<int>();
    if (j.contains("threads"))
      cfg.threads = j.at("threads").is_string() ? parse_threads(j.at("threads").get<std::string>()) : j.at("threads").get<int>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
}

namespace {

std::string sci(double x) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(2) << x;
  return ss.str();
}

void emit(const RunConfig& cfg, const json& doc, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw Error(ErrorCode::Parse, "cannot write " + cfg.out);
  file << text;
}

int cmd_certify(const RunConfig& cfg, const std::string& subspace_path, const std::string& spec_path, std::ostream& out) {
  Subspace u = io::subspace_from_json(io::read_json_file(subspace_path));
  VarietySpec spec = io::spec_from_json(io::read_json_file(spec_path));
  if (cfg.field) u.field = spec.field = *cfg.field;
  const ComponentList comps = generators(spec);
  json doc;
  int code = kOk;
  if (comps.size() == 1) {
    const IntersectionResult res = algorithm1(u, comps.front(), cfg.seed, cfg.tol);
    doc["result"] = io::to_json(res, u.field);
    if (std::holds_alternative<TrivialResult>(res)) {
      doc["verdict"] = "entangled";
    } else if (const auto* el = std::get_if<ElementsResult>(&res)) {
      doc["verdict"] = "elements";
      json els = json::array();
      for (const auto& v : el->elements) els.push_back(io::vector_to_json(v, u.field));
      doc["elements"] = els;
    } else {
      doc["verdict"] = "inconclusive";
      code = kAlgorithmic;
    }
  } else {
    const ComponentsResult res = algorithm2(u, comps, cfg.seed, cfg.tol, cfg.threads);
    doc["result"] = io::to_json(res, u.field);
    switch (res.aggregate) {
      case Aggregate::TrivialAll:
        doc["verdict"] = "entangled";
        break;
      case Aggregate::FoundElements: {
        doc["verdict"] = "elements";
        json els = json::array();
        for (const auto& v : res.elements) els.push_back(io::vector_to_json(v, u.field));
        doc["elements"] = els;
        break;
      }
      case Aggregate::Fail:
        doc["verdict"] = "inconclusive";
        code = kAlgorithmic;
        break;
    }
  }
  if (doc["verdict"] == "entangled" && u.field == Field::Real)
    doc["caveat"] = "over R a trivial kernel certifies entanglement but need not be sharp";
  emit(cfg, doc, out);
  return code;
}

GroupedShape parse_grouping(const std::string& text, std::size_t order) {
  if (text.empty()) return GroupedShape::balanced(order);
  const auto bar = text.find('|');
  if (bar == std::string::npos) throw Error(ErrorCode::Parse, "grouping must look like '1,2|3'");
  auto parse_list = [](const std::string& part) {
    std::vector<int> modes;
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        modes.push_back(std::stoi(item) - 1);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "bad mode '" + item + "' in grouping");
      }
    }
    return modes;
  };
  GroupedShape g{parse_list(text.substr(0, bar)), parse_list(text.substr(bar + 1))};
  try {
    g.validate(order);
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return g;
}

int cmd_decompose(const RunConfig& cfg, const std::string& tensor_path, const std::string& mode,
                  const std::string& spec_path, const std::string& grouping, bool allow_grouped_w, std::ostream& out) {
  DenseTensor t = io::tensor_from_json(io::read_json_file(tensor_path));
  if (cfg.field) t.field = *cfg.field;
  json doc;
  if (mode == "tensor3") {
    doc = io::to_json(tensor3_decompose(t, cfg.seed, cfg.tol), t.field);
  } else if (mode == "tensorm") {
    doc = io::to_json(tensorm_decompose(t, parse_grouping(grouping, t.dims.size()), cfg.seed, cfg.tol, !allow_grouped_w),
                      t.field);
  } else if (mode == "waring") {
    doc = io::to_json(waring_decompose(t, cfg.seed, cfg.tol), t.field);
  } else if (mode.rfind("aided:", 0) == 0) {
    Index r = 0;
    try {
      r = std::stol(mode.substr(6));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "aided mode needs an integer rank, e.g. aided:2");
    }
    doc = io::to_json(aided_decompose(t, r, cfg.seed, cfg.tol), t.field);
  } else if (mode == "xw") {
    if (spec_path.empty()) throw Error(ErrorCode::Parse, "xw mode needs --spec");
    VarietySpec spec = io::spec_from_json(io::read_json_file(spec_path));
    spec.field = t.field;
    const Index ambient = spec.ambient();
    Index lead = 1;
    std::size_t k = 0;
    while (k < t.dims.size() && lead < ambient) lead *= t.dims[k++];
    if (lead != ambient) throw Error(ErrorCode::Parse, "no leading group of tensor modes matches the variety ambient");
    const Index cols = t.entries.size() / ambient;
    Matrix m(ambient, cols);
    for (Index i = 0; i < ambient; ++i) m.row(i) = t.entries.segment(i * cols, cols).transpose();
    doc = io::to_json(xw_decompose(m, spec, cfg.seed, cfg.tol), t.field);
  } else {
    throw Error(ErrorCode::Parse, "unknown mode '" + mode + "' (tensor3, tensorm, waring, aided:r, xw)");
  }
  emit(cfg, doc, out);
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, const std::string& spec_path, std::ostream& out) {
  VarietySpec spec = io::spec_from_json(io::read_json_file(spec_path));
  if (cfg.field) spec.field = *cfg.field;
  const ComponentList comps = generators(spec);
  json rows = json::array();
  for (const auto& sys : comps)
    rows.push_back({{"n", sys.n}, {"d", sys.degree}, {"p", sys.count()}, {"rank_bound", rank_bound(sys)}});
  emit(cfg, {{"spec", io::to_json(spec)}, {"components", rows}}, out);
  return kOk;
}

int cmd_counterexample(const RunConfig& cfg, bool canonical, std::ostream& out) {
  const CounterexampleWitness w = foobi_counterexample(cfg.seed, canonical, cfg.tol);
  emit(cfg, io::to_json(w), out);
  return w.residual <= cfg.tol.residual_tol && w.within_hypotheses ? kOk : kAlgorithmic;
}

int cmd_grid(const RunConfig& cfg, const std::string& grid_path, int seeds, std::ostream& out) {
  auto cells = io::grid_from_json(io::read_json_file(grid_path));
  if (cfg.field)
    for (auto& c : cells) c.spec.field = *cfg.field;
  emit(cfg, io::to_json(genericity_grid(cells, seeds, cfg.tol, cfg.seed, cfg.threads)), out);
  return kOk;
}

// ---- selftest -------------------------------------------------------------

struct Check {
  std::string name;
  std::function<std::string(const TolerancePolicy&, std::uint64_t)> run;  // empty string on success
};

std::string check_penrose(const TolerancePolicy& tol, std::uint64_t seed) {
  for (int k = 0; k < 20; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const Matrix m = rng.matrix(6, 3, Field::Complex) * rng.matrix(3, 7, Field::Complex);
    const Matrix p = numlin::pseudoinverse<cplx>(m, tol);
    const double scale = m.norm() * p.norm();
    const double err = std::max({(m * p * m - m).norm() / m.norm(), (p * m * p - p).norm() / p.norm(),
                                 (Matrix(m * p).adjoint() - m * p).norm() / scale,
                                 (Matrix(p * m).adjoint() - p * m).norm() / scale});
    if (!(err <= tol.residual_tol)) return "Penrose identity residual " + sci(err);
  }
  return {};
}

std::string check_inner(const TolerancePolicy& tol, std::uint64_t seed) {
  Rng rng(seed);
  for (int d = 1; d <= 4; ++d) {
    const Vector v = rng.vector(4, Field::Complex);
    const Vector w = rng.vector(4, Field::Complex);
    const cplx lhs = inner(power(v, d), power(w, d));
    const cplx rhs = std::pow(v.dot(w), d);
    if (!(std::abs(lhs - rhs) <= tol.residual_tol * std::abs(rhs))) return "inner product mismatch at d=" + std::to_string(d);
  }
  return {};
}

std::string check_generators(const TolerancePolicy& tol, std::uint64_t seed) {
  const std::vector<VarietySpec> specs = {{Determinantal{3, 3, 1}, Field::Complex},
                                          {Segre{{2, 2, 2}}, Field::Complex},
                                          {SliceRank1{{2, 2, 3}}, Field::Complex},
                                          {Veronese{4, 2}, Field::Complex}};
  for (const auto& spec : specs) {
    const auto comps = generators(spec);
    const auto counts = expected_generator_counts(spec);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i].count() != counts[i] || numerical_rank(comps[i], tol) != counts[i]) return "generator count/rank mismatch";
      for (int k = 0; k < 5; ++k) {
        const Vector x = sample_component_point(spec, i, derive_seed(seed, static_cast<std::uint64_t>(k)));
        if (!(membership_residual(comps[i], x) <= tol.residual_tol)) return "sampled point fails membership";
      }
    }
  }
  return {};
}

std::string check_simdiag(const TolerancePolicy& tol, std::uint64_t seed) {
  int ok = 0;
  for (int k = 0; k < 10; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    Tensor3 t(4, 5, 6);
    for (int a = 0; a < 3; ++a) {
      const Vector u = rng.vector(4, Field::Complex);
      const Vector v = rng.vector(5, Field::Complex);
      const Vector w = rng.vector(6, Field::Complex);
      for (Index i = 0; i < 4; ++i) t.slices[static_cast<std::size_t>(i)] += u(i) * v * w.transpose();
    }
    const auto out = simultaneous_diagonalize(t, static_cast<std::uint64_t>(k), tol);
    if (const auto* d = std::get_if<TriDecomp>(&out); d && d->terms.size() == 3) ++ok;
  }
  return ok >= 9 ? std::string{} : "only " + std::to_string(ok) + "/10 diagonalizations succeeded";
}

std::string check_algorithm1(const TolerancePolicy& tol, std::uint64_t seed) {
  const VarietySpec spec{Determinantal{5, 5, 1}, Field::Complex};
  const PolySystem sys = generators(spec).front();
  int recovered = 0, trivial = 0;
  for (int k = 0; k < 10; ++k) {
    const auto planted = gen_planted(spec, 4, 2, derive_seed(seed, static_cast<std::uint64_t>(k)), tol);
    const auto res = algorithm1(planted.u, sys, static_cast<std::uint64_t>(k), tol);
    if (const auto* el = std::get_if<ElementsResult>(&res))
      if (match_error(planted.planted, el->elements) <= 1e-6 && verify_certificate(res, planted.u, sys, tol)) ++recovered;
    const auto generic = gen_planted(spec, 4, 0, derive_seed(seed, 100 + static_cast<std::uint64_t>(k)), tol);
    const auto triv = algorithm1(generic.u, sys, static_cast<std::uint64_t>(k), tol);
    if (std::holds_alternative<TrivialResult>(triv) && verify_certificate(triv, generic.u, sys, tol)) ++trivial;
  }
  if (recovered < 9) return "planted recovery " + std::to_string(recovered) + "/10";
  if (trivial < 9) return "trivial certification " + std::to_string(trivial) + "/10";
  return {};
}

std::string check_hook(const TolerancePolicy& tol, std::uint64_t seed) {
  const auto r = hook_lemma_suite({Determinantal{2, 2, 1}, Field::Complex}, 3, 1, 8, 20, seed, tol);
  return r.passed() ? std::string{} : std::to_string(r.violations) + " contraction bound violations";
}

std::string check_counterexample(const TolerancePolicy& tol, std::uint64_t seed) {
  const auto canon = foobi_counterexample(seed, true, tol);
  if (!(canon.residual <= tol.residual_tol)) return "canonical witness residual " + sci(canon.residual);
  const auto w = foobi_counterexample(seed, false, tol);
  if (!(w.residual <= tol.residual_tol)) return "random witness residual " + sci(w.residual);
  return {};
}

std::string check_decompositions(const TolerancePolicy& tol, std::uint64_t seed) {
  Rng rng(seed);
  DenseTensor t3{{5, 5, 5}, Vector::Zero(125), Field::Complex};
  for (int a = 0; a < 4; ++a) {
    const Vector x = rng.vector(5, Field::Complex);
    const Vector y = rng.vector(5, Field::Complex);
    const Vector z = rng.vector(5, Field::Complex);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j) t3.entries.segment((i * 5 + j) * 5, 5) += x(i) * y(j) * z;
  }
  const auto d3 = tensor3_decompose(t3, seed, tol);
  if (d3.terms.size() != 4 || !(d3.residual <= tol.residual_tol)) return "tensor3 recovery failed";
  DenseTensor sym{{4, 4, 4, 4}, Vector::Zero(256), Field::Real};
  for (int a = 0; a < 2; ++a) sym.entries += rng.normal() * kron_power(rng.vector(4, Field::Real), 4);
  const auto dw = waring_decompose(sym, seed, tol);
  if (dw.terms.size() != 2 || !(dw.residual <= tol.residual_tol)) return "waring recovery failed";
  return {};
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::vector<Check> checks = {
      {"numlin.penrose", check_penrose},
      {"symtensor.inner_product", check_inner},
      {"varieties.generators", check_generators},
      {"simdiag.planted", check_simdiag},
      {"intersect.algorithm1", check_algorithm1},
      {"harness.hook_lemma", check_hook},
      {"harness.counterexample", check_counterexample},
      {"decompose.tensor3_waring", check_decompositions},
  };
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    std::string problem;
    try {
      problem = c.run(cfg.tol, cfg.seed);
    } catch (const std::exception& e) {
      problem = e.what();
    }
    const bool ok = problem.empty();
    all = all && ok;
    err << (ok ? "PASS " : "FAIL ") << c.name << (ok ? "" : ": " + problem) << "\n";
    rows.push_back({{"name", c.name}, {"passed", ok}, {"detail", problem}});
  }
  emit(cfg, {{"passed", all}, {"checks", rows}}, out);
  return all ? kOk : kAlgorithmic;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"vsx: subspace/variety intersection, entanglement certificates and unique decompositions"};
  app.require_subcommand(1);

  std::string field, config_path, out_path;
  std::uint64_t seed = 0;
  double tol = 0.0, rank_tol = 0.0, eig_gap = 0.0;
  int retries = 0;
  std::string threads;
  auto* o_field = app.add_option("--field", field, "Field of the input data: R or C")->check(CLI::IsMember({"R", "C"}));
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_tol = app.add_option("--tol", tol, "Residual tolerance");
  auto* o_rank = app.add_option("--rank-tol", rank_tol, "Relative rank threshold");
  auto* o_gap = app.add_option("--eig-gap", eig_gap, "Relative eigenvalue gap threshold");
  auto* o_retries = app.add_option("--retries", retries, "Maximum simultaneous-diagonalization attempts");
  auto* o_threads = app.add_option("--threads", threads, "Worker threads or 'auto' (default 1)");
  auto* o_out = app.add_option("--out", out_path, "Write JSON to this path instead of stdout");
  app.add_option("--config", config_path, "JSON config file (flags take precedence)");

  std::string subspace_path, spec_path, tensor_path, mode, decompose_spec, grouping, grid_path;
  bool allow_grouped_w = false, canonical = false;
  int grid_seeds = 10;

  auto* certify = app.add_subcommand("certify", "Certify that a subspace avoids a variety, or list the intersection");
  certify->add_option("subspace", subspace_path, "Subspace JSON")->required();
  certify->add_option("spec", spec_path, "Variety spec JSON")->required();

  auto* decompose = app.add_subcommand("decompose", "Unique decomposition of a tensor");
  decompose->add_option("tensor", tensor_path, "Tensor JSON")->required();
  decompose->add_option("--mode", mode, "tensor3 | tensorm | waring | aided:r | xw")->required();
  decompose->add_option("--spec", decompose_spec, "Variety spec JSON (xw mode)");
  decompose->add_option("--grouping", grouping, "tensorm mode bipartition, 1-based, e.g. '1,2|3,4'");
  decompose->add_flag("--allow-grouped-w", allow_grouped_w, "tensorm: keep non-product w factors grouped");

  auto* bounds = app.add_subcommand("bounds", "Generator counts and rank bounds of a variety");
  bounds->add_option("spec", spec_path, "Variety spec JSON")->required();

  auto* counter = app.add_subcommand("counterexample", "Witness against the FOOBI rank-one lemma");
  counter->add_flag("--canonical", canonical, "Use U = span{e1,e2,e3} and v_i = e_i");

  auto* selftest = app.add_subcommand("selftest", "Run reduced invariant suites of every module");

  auto* grid = app.add_subcommand("grid", "Run a genericity grid of planted instances");
  grid->add_option("grid", grid_path, "Grid JSON: [{\"spec\":…, \"R\":…, \"s\":…}, …]")->required();
  grid->add_option("--seeds", grid_seeds, "Seeds per cell")->check(CLI::PositiveNumber);

  for (auto* sub : {certify, decompose, bounds, counter, selftest, grid}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    RunConfig cfg;
    if (const char* env = std::getenv("VSX_CONFIG"); env && *env) apply_config(cfg, io::read_json_file(env));
    if (!config_path.empty()) apply_config(cfg, io::read_json_file(config_path));
    if (o_field->count()) cfg.field = field_from_string(field);
    if (o_seed->count()) cfg.seed = seed;
    if (o_tol->count()) cfg.tol.residual_tol = tol;
    if (o_rank->count()) cfg.tol.rank_rel_tol = rank_tol;
    if (o_gap->count()) cfg.tol.eig_gap_rel_tol = eig_gap;
    if (o_retries->count()) cfg.tol.max_retries = retries;
    if (o_threads->count()) cfg.threads = parse_threads(threads);
    if (o_out->count()) cfg.out = out_path;
    cfg.tol.validate();
    if (cfg.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");

    if (*certify) return cmd_certify(cfg, subspace_path, spec_path, out);
    if (*decompose) return cmd_decompose(cfg, tensor_path, mode, decompose_spec, grouping, allow_grouped_w, out);
    if (*bounds) return cmd_bounds(cfg, spec_path, out);
    if (*counter) return cmd_counterexample(cfg, canonical, out);
    if (*selftest) return cmd_selftest(cfg, out, err);
    if (*grid) return cmd_grid(cfg, grid_path, grid_seeds, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.algorithmic() ? kAlgorithmic : kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace vsx::cli

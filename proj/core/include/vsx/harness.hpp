#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsx/intersect.hpp"
#include "vsx/varieties.hpp"

namespace vsx {

struct PlantedInstance {
  VarietySpec spec;
  Index r = 0;
  Index s = 0;
  std::vector<Vector> planted;
  std::vector<Vector> fillers;
  Subspace u;  ///< basis = planted points, then fillers
  std::uint64_t seed = 0;
};

/// Seeded instance with s variety points and r - s Gaussian fillers. Redraws
/// (with derived seeds) up to tol.max_retries times if the basis is degenerate.
PlantedInstance gen_planted(const VarietySpec& spec, Index r, Index s, std::uint64_t seed,
                            const TolerancePolicy& tol = {});

enum class TrialKind { Trivial, Recovered, Mismatch, Fail };
std::string_view to_string(TrialKind k);

struct TrialOutcome {
  std::uint64_t seed = 0;
  TrialKind kind = TrialKind::Fail;
  double match_error = 0.0;  ///< max over plants of sin(angle) to the nearest output
  bool certified = false;    ///< verify_certificate on the raw result(s)
  std::string stage;         ///< failure stage or reason
};

struct GridCell {
  VarietySpec spec;
  Index r = 0;
  Index s = 0;
};

struct CellReport {
  GridCell cell;
  std::vector<TrialOutcome> trials;
  double success_rate = 0.0;  ///< Trivial for s = 0, Recovered otherwise
  double seconds = 0.0;
};

struct GridReport {
  std::vector<CellReport> cells;
};

/// Max over `planted` of the distance to the closest `found` line, or 1 when
/// the counts differ.
double match_error(const std::vector<Vector>& planted, const std::vector<Vector>& found);

TrialOutcome run_trial(const GridCell& cell, std::uint64_t seed, const TolerancePolicy& tol);

/// Cells run independently (on up to `threads` workers) and are reported in
/// grid order. Seeds of cell c, trial t: derive_seed(derive_seed(base, c), t).
GridReport genericity_grid(const std::vector<GridCell>& grid, int seeds_per_cell, const TolerancePolicy& tol,
                           std::uint64_t base_seed = 0, int threads = 1);

struct HookReport {
  int trials = 0;
  int violations = 0;
  Index bound = 0;
  Index min_dim = 0;
  std::optional<int> counterexample;  ///< first violating trial
  bool passed() const noexcept { return violations == 0; }
};

/// For random dim_u-dimensional U in S^d(F^n) and v sampled from `spec`
/// (n = spec ambient): dim(v^{(x)ell} -| U) >= ceil(dim_u / C(n+ell-1, ell)).
HookReport hook_lemma_suite(const VarietySpec& spec, int degree, int ell, Index dim_u, int trials, std::uint64_t seed,
                            const TolerancePolicy& tol = {});

struct CounterexampleWitness {
  Matrix u_basis;  ///< 4 x 3
  std::vector<Vector> vs;  ///< v_1..v_4
  Vector u1;
  Vector u2;
  Vector product;  ///< u1 (x) u2
  double residual = 0.0;
  int dim_w = 9;
  int pair_count = 6;
  int r = 4;
  bool within_hypotheses = true;  ///< dim W + C(4,2) <= 16 and R <= n + 1
};

/// Non-zero u1 (x) u2 in (U (x) U) cap span{v_i (x) v_j : i < j}. The
/// canonical instance uses U = span{e1,e2,e3} and v_i = e_i.
CounterexampleWitness foobi_counterexample(std::uint64_t seed, bool canonical = false, const TolerancePolicy& tol = {});

}  // namespace vsx

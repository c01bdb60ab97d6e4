#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vsx/varieties.hpp"

namespace vsx {

struct Subspace {
  Field field = Field::Complex;
  Matrix basis;  ///< ambient x R, columns u_1..u_R

  Index ambient() const noexcept { return basis.rows(); }
  Index dim() const noexcept { return basis.cols(); }
};

/// Witness that S^d(U) meets I_d^perp only at zero: the lifted coefficient
/// matrix has full column rank.
struct KernelCertificate {
  Index rows = 0;
  Index cols = 0;
  double frobenius = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  Field field = Field::Complex;
  /// Over R a trivial kernel is sound but not necessarily sharp.
  bool sharp = true;
};

struct UniquenessCertificate {
  Index s = 0;
  std::vector<double> alignment;
  double independence_sigma_min = 0.0;
  double span_residual = 0.0;
  double membership_residual = 0.0;
  double subspace_residual = 0.0;
};

struct TrivialResult {
  KernelCertificate certificate;
};

struct ElementsResult {
  std::vector<Vector> elements;  ///< unit norm, first significant entry positive real
  UniquenessCertificate certificate;
};

struct FailResult {
  std::string stage;
  std::string reason;
};

using IntersectionResult = std::variant<TrivialResult, ElementsResult, FailResult>;

/// U cap X for the variety cut out by `sys`.
IntersectionResult algorithm1(const Subspace& u, const PolySystem& sys, std::uint64_t seed, const TolerancePolicy& tol);

enum class Aggregate { TrivialAll, FoundElements, Fail };
std::string_view to_string(Aggregate a);

struct ComponentsResult {
  std::vector<IntersectionResult> per_component;
  Aggregate aggregate = Aggregate::Fail;
  std::vector<Vector> elements;  ///< deduplicated across components
};

/// Runs algorithm1 on each component (seeded with derive_seed(seed, i)),
/// optionally on `threads` workers; merged in component order.
ComponentsResult algorithm2(const Subspace& u, const ComponentList& comps, std::uint64_t seed,
                            const TolerancePolicy& tol, int threads = 1);

/// Independent re-check of a Trivial or Elements result at 10x tolerances.
/// Fail results carry no certificate and verify as false.
bool verify_certificate(const IntersectionResult& result, const Subspace& u, const PolySystem& sys,
                        const TolerancePolicy& tol);

}  // namespace vsx

#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsx/decompose.hpp"
#include "vsx/harness.hpp"
#include "vsx/intersect.hpp"
#include "vsx/varieties.hpp"

/// JSON encodings. Complex scalars are [re, im] pairs; real-field data is
/// written as plain numbers. Parsers accept either form and throw
/// Error(Parse) on malformed input.
namespace vsx::io {

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);

json scalar_to_json(cplx z, Field field);
cplx scalar_from_json(const json& j);
json vector_to_json(const Vector& v, Field field);
Vector vector_from_json(const json& j);

json to_json(const VarietySpec& spec);
VarietySpec spec_from_json(const json& j);

json to_json(const Subspace& u);
Subspace subspace_from_json(const json& j);

json to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const json& j);

json to_json(const KernelCertificate& c);
json to_json(const UniquenessCertificate& c);
UniquenessCertificate uniqueness_from_json(const json& j);

json to_json(const IntersectionResult& r, Field field);
json to_json(const ComponentsResult& r, Field field);

json to_json(const TensorDecomposition& d, Field field);
TensorDecomposition decomposition_from_json(const json& j);
json to_json(const XWDecomposition& d, Field field);
json to_json(const AidedDecomposition& d, Field field);

std::vector<GridCell> grid_from_json(const json& j);
json to_json(const GridReport& r);
json to_json(const HookReport& r);
json to_json(const CounterexampleWitness& w);

}  // namespace vsx::io

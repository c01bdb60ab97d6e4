#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "vsx/error.hpp"
#include "vsx/io.hpp"
#include "vsx/rng.hpp"

using namespace vsx;
using json = nlohmann::json;

TEST(IoScalar, RealAndComplex) {
  EXPECT_EQ(io::scalar_to_json(2.5, Field::Real), json(2.5));
  const json z = io::scalar_to_json(cplx(1.0, -2.0), Field::Complex);
  EXPECT_EQ(io::scalar_from_json(z), cplx(1.0, -2.0));
  EXPECT_EQ(io::scalar_from_json(json(3)), cplx(3.0));
}

TEST(IoVector, RoundTrip) {
  Rng rng(1);
  const Vector v = rng.vector(5, Field::Complex);
  EXPECT_TRUE(io::vector_from_json(io::vector_to_json(v, Field::Complex)) == v);
  EXPECT_THROW(io::vector_from_json(json("nope")), Error);
}

TEST(IoSpec, RoundTripCatalog) {
  const std::vector<VarietySpec> specs = {{Determinantal{3, 4, 1}, Field::Real}, {Segre{{2, 3, 2}}},
                                          {Biseparable{{2, 2, 2}}},              {SliceRank1{{2, 2, 3}}},
                                          {Veronese{4, 3}}};
  for (const auto& spec : specs) {
    const VarietySpec back = io::spec_from_json(io::to_json(spec));
    EXPECT_EQ(io::to_json(back), io::to_json(spec));
    EXPECT_EQ(back.field, spec.field);
  }
}

TEST(IoSpec, CustomGenerators) {
  const auto sys = generators({Determinantal{2, 2, 1}}).front();
  const VarietySpec custom{Custom{sys}};
  const VarietySpec back = io::spec_from_json(io::to_json(custom));
  const auto& got = std::get<Custom>(back.kind).system;
  EXPECT_EQ(got.n, 4);
  EXPECT_EQ(got.degree, 2);
  EXPECT_LE((Matrix(got.coeffs) - Matrix(sys.coeffs)).norm(), 0.0);
}

TEST(IoSpec, UnknownKindIsParseError) {
  try {
    io::spec_from_json(json{{"kind", "banana"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
}

TEST(IoSubspaceAndTensor, RoundTrip) {
  Rng rng(2);
  Subspace u{Field::Complex, rng.matrix(6, 2, Field::Complex)};
  const Subspace back = io::subspace_from_json(io::to_json(u));
  EXPECT_TRUE(back.basis == u.basis);

  DenseTensor t{{2, 3, 2}, rng.vector(12, Field::Real), Field::Real};
  const DenseTensor tb = io::tensor_from_json(io::to_json(t));
  EXPECT_EQ(tb.dims, t.dims);
  EXPECT_TRUE(tb.entries == t.entries);
  EXPECT_EQ(tb.field, Field::Real);
}

TEST(IoTensor, WrongEntryCount) {
  EXPECT_THROW(io::tensor_from_json(json{{"dims", {2, 2}}, {"entries", {1, 2, 3}}}), Error);
}

TEST(IoCertificates, UniquenessRoundTrip) {
  UniquenessCertificate c;
  c.s = 2;
  c.alignment = {1.0, 0.999999999};
  c.independence_sigma_min = 0.25;
  c.span_residual = 1e-14;
  c.membership_residual = 2e-15;
  c.subspace_residual = 3e-15;
  const auto back = io::uniqueness_from_json(io::to_json(c));
  EXPECT_EQ(back.s, c.s);
  EXPECT_EQ(back.alignment, c.alignment);
  EXPECT_EQ(back.independence_sigma_min, c.independence_sigma_min);
  EXPECT_EQ(back.span_residual, c.span_residual);
}

TEST(IoDecomposition, RoundTrip) {
  TensorDecomposition d;
  d.dims = {2, 2, 2};
  d.factor_modes = {{0}, {1}, {2}};
  Vector e = Vector::Zero(2);
  e(0) = 1.0;
  d.terms.push_back({{e, e, e}, cplx(2.0, 0.5)});
  d.residual = 1e-15;
  const auto back = io::decomposition_from_json(io::to_json(d, Field::Complex));
  EXPECT_EQ(back.dims, d.dims);
  EXPECT_EQ(back.factor_modes, d.factor_modes);
  ASSERT_EQ(back.terms.size(), 1u);
  EXPECT_EQ(back.terms[0].scale, d.terms[0].scale);
  EXPECT_TRUE(back.terms[0].factors[1] == e);
}

TEST(IoGrid, BothLayouts) {
  const json cell = {{"spec", {{"kind", "determinantal"}, {"dims", {4, 4}}, {"r", 1}}}, {"R", 2}, {"s", 0}};
  EXPECT_EQ(io::grid_from_json(json::array({cell})).size(), 1u);
  const auto cells = io::grid_from_json(json{{"cells", {cell, cell}}});
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[1].r, 2);
}

TEST(IoFile, MalformedJson) {
  const auto path = std::filesystem::temp_directory_path() / "vsx_io_malformed.json";
  std::ofstream(path) << "{ \"basis\": [";
  try {
    io::read_json_file(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_FALSE(e.algorithmic());
  }
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_json_file(path), Error);
}

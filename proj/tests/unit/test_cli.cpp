#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome vsx_run(std::vector<std::string> args) {
  args.insert(args.begin(), "vsx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = vsx::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("vsx_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("VSX_CONFIG");
  }
  void TearDown() override {
    unsetenv("VSX_CONFIG");
    fs::remove_all(dir_);
  }
  std::string file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name, const json& j) { return file(name, j.dump()); }

  fs::path dir_;
};

const json kRankOne2x2 = {{"kind", "determinantal"}, {"dims", {2, 2}}, {"r", 1}};

}  // namespace

TEST_F(Cli, CertifyEntangled) {
  const auto u = file("u.json", json{{"field", "R"}, {"ambient", 4}, {"basis", {{1, 0, 0, 1}}}});
  const auto spec = file("spec.json", kRankOne2x2);
  const Outcome r = vsx_run({"certify", u, spec});
  EXPECT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "entangled");
  EXPECT_TRUE(doc.contains("caveat"));  // real field: certificate is not sharp
}

TEST_F(Cli, CertifyElements) {
  const auto u = file("u.json", json{{"ambient", 4}, {"basis", {{1, 0, 0, 0}}}});
  const auto spec = file("spec.json", kRankOne2x2);
  const Outcome r = vsx_run({"certify", u, spec});
  EXPECT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["verdict"], "elements");
  ASSERT_EQ(doc["elements"].size(), 1u);
  EXPECT_EQ(doc["elements"][0].size(), 4u);
}

TEST_F(Cli, CertifyInconclusiveExitsTwo) {
  const auto u = file("u.json", json{{"ambient", 4}, {"basis", {{1, 0, 0, 0}, {0, 1, 0, 0}}}});
  const auto spec = file("spec.json", kRankOne2x2);
  const Outcome r = vsx_run({"certify", u, spec});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["verdict"], "inconclusive");
}

TEST_F(Cli, CertifyReducibleSpec) {
  const auto u = file("u.json", json{{"ambient", 8}, {"basis", {{1, 0, 0, 0, 0, 0, 0, 0}}}});
  const auto spec = file("spec.json", json{{"kind", "slice"}, {"dims", {2, 2, 2}}});
  const Outcome r = vsx_run({"certify", u, spec});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["elements"].size(), 1u);
}

TEST_F(Cli, InputErrorsExitOne) {
  const auto spec = file("spec.json", kRankOne2x2);
  const auto bad = file("bad.json", std::string("{ not json"));
  Outcome r = vsx_run({"certify", bad, spec});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(vsx_run({"certify", (dir_ / "missing.json").string(), spec}).code, 1);
  EXPECT_EQ(vsx_run({}).code, 1);
  EXPECT_EQ(vsx_run({"frobnicate"}).code, 1);
  EXPECT_EQ(vsx_run({"bounds", spec, "--threads", "0"}).code, 1);
  EXPECT_EQ(vsx_run({"bounds", spec, "--threads", "many"}).code, 1);
  EXPECT_EQ(vsx_run({"bounds", spec, "--threads", "auto"}).code, 0);
  EXPECT_EQ(vsx_run({"bounds", spec, "--field", "Q"}).code, 1);
  const auto mismatched = file("u.json", json{{"ambient", 5}, {"basis", {{1, 0, 0, 0, 0}}}});
  EXPECT_EQ(vsx_run({"certify", mismatched, spec}).code, 1);
}

TEST_F(Cli, DecomposeDiagonal) {
  const auto t = file("t.json", json{{"field", "R"}, {"dims", {2, 2, 2}}, {"entries", {1, 0, 0, 0, 0, 0, 0, 1}}});
  const Outcome r = vsx_run({"decompose", t, "--mode", "tensor3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["terms"].size(), 2u);
  EXPECT_LE(doc["residual"].get<double>(), 1e-12);

  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "waring"}).code, 0);
  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "tensorm", "--grouping", "1,2|3"}).code, 0);
  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "cp"}).code, 1);
  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "aided:x"}).code, 1);
  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "tensorm", "--grouping", "1|2,3"}).code, 1);
}

TEST_F(Cli, DecomposeXWAndAided) {
  const auto t = file("t.json", json{{"dims", {2, 2, 1}}, {"entries", {1, 0, 0, 0}}});
  const auto spec = file("spec.json", kRankOne2x2);
  const Outcome r = vsx_run({"decompose", t, "--mode", "xw", "--spec", spec});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["terms"].size(), 1u);
  EXPECT_EQ(vsx_run({"decompose", t, "--mode", "xw"}).code, 1);

  const auto slab = file("slab.json", json{{"dims", {3, 3, 1}}, {"entries", {1, 0, 0, 0, 1, 0, 0, 0, 0}}});
  const Outcome a = vsx_run({"decompose", slab, "--mode", "aided:2"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(json::parse(a.out)["terms"].size(), 1u);
}

TEST_F(Cli, DecomposeErrors) {
  // asymmetric input is an input error
  const auto asym = file("a.json", json{{"dims", {2, 2, 2}}, {"entries", {0, 1, 0, 0, 0, 0, 0, 0}}});
  EXPECT_EQ(vsx_run({"decompose", asym, "--mode", "waring"}).code, 1);
  // W state: rank 3 but border rank 2, no unique decomposition
  const auto hard = file("h.json", json{{"dims", {2, 2, 2}}, {"entries", {0, 1, 1, 0, 1, 0, 0, 0}}});
  const Outcome r = vsx_run({"decompose", hard, "--mode", "tensor3"});
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST_F(Cli, Bounds) {
  const auto spec = file("spec.json", json{{"kind", "determinantal"}, {"dims", {5, 5}}, {"r", 1}});
  const Outcome r = vsx_run({"bounds", spec});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["components"].size(), 1u);
  EXPECT_EQ(doc["components"][0]["p"], 100);
  EXPECT_EQ(doc["components"][0]["n"], 25);
  EXPECT_EQ(doc["components"][0]["rank_bound"], 4);

  const auto bis = file("bis.json", json{{"kind", "biseparable"}, {"dims", {2, 2, 2, 2}}});
  EXPECT_EQ(json::parse(vsx_run({"bounds", bis}).out)["components"].size(), 7u);
}

TEST_F(Cli, Counterexample) {
  const Outcome r = vsx_run({"counterexample", "--canonical"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["R"], 4);
  EXPECT_EQ(vsx_run({"counterexample", "--seed", "3"}).code, 0);
}

TEST_F(Cli, Selftest) {
  const Outcome ok = vsx_run({"selftest"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(json::parse(ok.out)["passed"].get<bool>());
  const Outcome strict = vsx_run({"selftest", "--tol", "1e-30"});
  EXPECT_NE(strict.code, 0);
  EXPECT_NE(strict.err.find("FAIL"), std::string::npos);
}

TEST_F(Cli, Grid) {
  const auto grid = file("grid.json", json::array({{{"spec", kRankOne2x2}, {"R", 1}, {"s", 1}}}));
  const Outcome r = vsx_run({"grid", grid, "--seeds", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["cells"][0]["trials"].size(), 4u);
  EXPECT_EQ(doc["cells"][0]["success_rate"], 1.0);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  const auto strict = file("strict.json", json{{"tol", 1e-30}});
  EXPECT_NE(vsx_run({"selftest", "--config", strict}).code, 0);
  EXPECT_EQ(vsx_run({"selftest", "--config", strict, "--tol", "1e-8"}).code, 0);

  setenv("VSX_CONFIG", strict.c_str(), 1);
  EXPECT_NE(vsx_run({"selftest"}).code, 0);
  EXPECT_EQ(vsx_run({"selftest", "--tol", "1e-8"}).code, 0);
  unsetenv("VSX_CONFIG");

  const auto bad = file("bad.json", json{{"seed", "not a number"}});
  EXPECT_EQ(vsx_run({"selftest", "--config", bad}).code, 1);
}

TEST_F(Cli, OutputFile) {
  const auto spec = file("spec.json", kRankOne2x2);
  const auto out = (dir_ / "bounds.json").string();
  const Outcome r = vsx_run({"bounds", spec, "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  EXPECT_EQ(json::parse(in)["components"][0]["p"], 1);
}

TEST_F(Cli, DeterministicOutput) {
  const auto t = file("t.json", json{{"dims", {3, 3, 3}},
                                      {"entries", {1, 2, 0, 0, 1, 3, 2, 0, 1, 0, 1, 1, 4, 0, 2, 1, 1, 0,
                                                   2, 0, 1, 3, 1, 0, 0, 2, 2}}});
  const Outcome a = vsx_run({"decompose", t, "--mode", "tensor3", "--seed", "9"});
  const Outcome b = vsx_run({"decompose", t, "--mode", "tensor3", "--seed", "9"});
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
}

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pwave/commands.hpp"
#include "pwave/errors.hpp"

using namespace pwave;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pwave_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& sub, const RunConfig& cfg, const std::filesystem::path& dir) {
  std::ostringstream out, err;
  return execute(sub, cfg, {dir.string(), true}, out, err);
}

}  // namespace

TEST(Config, ParsesSectionsAndConstants) {
  const auto cfg = RunConfig::parse("# comment\ntorus.dim = 3\ntorus.L = 2pi\nsweep.grid = 1, 2, 3\n");
  EXPECT_EQ(cfg.require_int("torus.dim"), 3);
  EXPECT_DOUBLE_EQ(cfg.require_double("torus.L"), 2 * 3.141592653589793);
  EXPECT_EQ(cfg.require_list("sweep.grid").size(), 3u);
}

TEST(Config, UnknownKeyNamed) {
  try {
    RunConfig::parse("torus.lenght = 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    EXPECT_NE(std::string(e.what()).find("torus.lenght"), std::string::npos);
  }
}

TEST(Config, ValidationRules) {
  EXPECT_THROW(RunConfig::parse("scattering.tol = 0.5\n").validate(), Error);
  EXPECT_THROW(RunConfig::parse("potential.dim = 2\ntorus.dim = 3\n").validate(), Error);
  EXPECT_THROW(RunConfig::parse("output.format = xml\n").validate(), Error);
  EXPECT_NO_THROW(RunConfig::parse("potential.dim = 3\ntorus.dim = 3\nscattering.tol = 1e-9\n").validate());
}

TEST(Cli, FermiballExample) {
  const auto dir = scratch("fermiball");
  const auto cfg = RunConfig::parse("torus.dim = 3\ntorus.L = 2pi\ntorus.kf = 1\n");
  EXPECT_EQ(run("fermiball", cfg, dir), kExitOk);
  const auto j = Json::parse(slurp(dir / "fermiball.payload.json"));
  EXPECT_EQ(j["payload"]["N"], 7);
  EXPECT_EQ(j["payload"]["E_F"], 6.0);
  const auto env = Json::parse(slurp(dir / "fermiball.json"));
  EXPECT_EQ(env["tool"], "pwave");
  EXPECT_TRUE(env.contains("timestamp"));
  EXPECT_EQ(env["config"]["torus.kf"], "1");
}

TEST(Cli, ScatlenExample) {
  const auto dir = scratch("scatlen");
  const auto cfg = RunConfig::parse("potential.kind = soft-sphere\npotential.dim = 3\npotential.v0 = 10\npotential.r0 = 1\n");
  EXPECT_EQ(run("scatlen", cfg, dir), kExitOk);
  const auto j = Json::parse(slurp(dir / "scatlen.payload.json"))["payload"];
  const double a = j["a"], at = j["a_integral"];
  EXPECT_NEAR(a, at, 1e-6 * a);
  EXPECT_TRUE(j.contains("ode_residual"));
  const std::string csv = slurp(dir / "scatlen_profile.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,psi,psi_prime,phi0,phi,E_phi");
}

TEST(Cli, ConfigErrorExitCode) {
  const auto dir = scratch("configerr");
  EXPECT_EQ(run("fermiball", RunConfig::parse("torus.dim = 3\n"), dir), kExitConfig);
  EXPECT_EQ(run("nonsense", RunConfig::parse(""), dir), kExitConfig);
  EXPECT_EQ(run("sweep", RunConfig::parse("sweep.parameter = temperature\nsweep.grid = 1\n"), dir), kExitConfig);
}

TEST(Cli, ModuleErrorSurfacesWithName) {
  const auto dir = scratch("moderr");
  const auto cfg = RunConfig::parse("potential.kind = soft-sphere\npotential.dim = 3\npotential.v0 = -1\npotential.r0 = 1\n");
  EXPECT_EQ(run("scatlen", cfg, dir), kExitNumerical);
  const auto j = Json::parse(slurp(dir / "scatlen.payload.json"));
  EXPECT_EQ(j["error"]["code"], "NonRepulsive");
  EXPECT_EQ(j["error"]["module"], "scattering");
}

TEST(Cli, PayloadsAreDeterministic) {
  const auto cfg = RunConfig::parse(
      "potential.kind = truncated-gaussian\npotential.dim = 3\npotential.v0 = 40\npotential.width = 0.3\n"
      "potential.r0 = 1\n");
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  ASSERT_EQ(run("scatlen", cfg, d1), kExitOk);
  ASSERT_EQ(run("scatlen", cfg, d2), kExitOk);
  EXPECT_EQ(slurp(d1 / "scatlen.payload.json"), slurp(d2 / "scatlen.payload.json"));
  EXPECT_EQ(slurp(d1 / "scatlen_profile.csv"), slurp(d2 / "scatlen_profile.csv"));
}

TEST(Cli, FockCommands) {
  const auto dir = scratch("fock");
  const RunConfig cfg;
  EXPECT_EQ(run("fock-verify", cfg, dir), kExitOk);
  EXPECT_EQ(run("audit", cfg, dir), kExitOk);
  EXPECT_EQ(run("ed", cfg, dir), kExitOk);
  const auto j = Json::parse(slurp(dir / "ed.payload.json"))["payload"];
  EXPECT_EQ(j["sector_n"], 3);
}

TEST(Cli, OutputDirectoryPrecedence) {
  auto cfg = RunConfig::parse("output.directory = from_config\n");
  EXPECT_EQ(output_directory(cfg, std::string("cli")).string(), "cli");
  EXPECT_EQ(output_directory(cfg).string(), std::getenv("PWAVE_OUTPUT_DIR") ? std::getenv("PWAVE_OUTPUT_DIR") : "from_config");
}

TEST(Report, CsvUsesSeventeenDigits) {
  CsvTable t({"x"});
  t.add_row(std::vector<double>{0.1});
  EXPECT_EQ(t.str(), "x\n0.10000000000000001\n");
}

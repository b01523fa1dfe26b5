// Golden scenarios for the command-line driver, run as a subprocess.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>

#include "accretive/report.hpp"

using namespace accretive;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("accretive_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with cwd = dir_; stderr goes to err.txt.
  int run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(ACCRETIVE_LAB_BINARY) + "' " + args +
                            " > out.txt 2> err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string file(const std::string& name) const { return read_text((dir_ / name).string()); }
  Json report(const std::string& name = "report.json") const { return Json::parse(file(name)); }
  void matrix(const std::string& name, const ComplexMatrix& m) const { write_matrix((dir_ / name).string(), m); }

  fs::path dir_;
};

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_F(Cli, VerifyDiagonalPairPasses) {
  matrix("T.mtx", diag2(1.0, 2.0));
  matrix("A.mtx", diag2(0.5, 0.5));
  ASSERT_EQ(run("verify --t T.mtx --a A.mtx --out report.json"), 0) << file("err.txt");
  const Json r = report();
  ASSERT_EQ(r["certificates"].size(), 1u);
  EXPECT_EQ(r["certificates"][0]["branch"], "sectorial");
  EXPECT_EQ(r["certificates"][0]["b"]["value"], 2.0);
  EXPECT_GT(r["summary"]["hard_checks_passed"].get<int>(), 0);
  EXPECT_EQ(r["summary"]["hard_checks_failed"], 0);
  EXPECT_EQ(r["manifest"]["command"], "verify");
  EXPECT_EQ(r["manifest"]["input_paths"][0], "T.mtx");
}

TEST_F(Cli, AuditViolationDoesNotChangeExitCode) {
  const ComplexMatrix t = diag2(Complex(0.0, 1.0), 1.0);
  matrix("T.mtx", t);
  matrix("A.mtx", 0.1 * t);
  ASSERT_EQ(run("verify --t T.mtx --a A.mtx --out report.json"), 0) << file("err.txt");
  const Json r = report();
  EXPECT_EQ(r["summary"]["audits_violated"], 1);
  EXPECT_EQ(r["summary"]["hard_checks_failed"], 0);
  EXPECT_EQ(r["audits"][0]["lemma_claim_holds"], false);
}

TEST_F(Cli, TrotterRejectsNonHermitianWithoutWaiver) {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  matrix("A.mtx", n + ComplexMatrix::Identity(2, 2));
  matrix("B.mtx", 0.1 * ComplexMatrix::Identity(2, 2));
  ASSERT_EQ(run("trotter --t A.mtx --a B.mtx --out report.json"), 1) << file("err.txt");
  const Json r = report();
  EXPECT_EQ(r["extras"]["hypothesis_failure"]["report"]["failing_clause"], "A_selfadjoint");
  EXPECT_NE(r["extras"]["hypothesis_failure"]["error"].get<std::string>().find("HypothesisFailed"), std::string::npos);
  EXPECT_EQ(r["summary"]["hard_checks_failed"], 1);
}

TEST_F(Cli, TrotterWaiverRunsAndWritesCsv) {
  ComplexMatrix n = ComplexMatrix::Zero(2, 2);
  n(0, 1) = 1.0;
  matrix("A.mtx", n + ComplexMatrix::Identity(2, 2));
  matrix("B.mtx", 0.1 * ComplexMatrix::Identity(2, 2));
  run("trotter --t A.mtx --a B.mtx --waiver --t-grid 1 --n-grid 2,4,8,16 --out report.json");
  const Json r = report();
  ASSERT_EQ(r["experiments"].size(), 1u);
  EXPECT_TRUE(r["experiments"][0]["hypotheses"]["waived"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "report.json.trotter-0.csv"));
}

TEST_F(Cli, TrotterGeneratedFamilyPasses) {
  ASSERT_EQ(run("trotter --family hermitian-skew --dim 3 --seed 5 --n-grid 2,4,8,16,32 --out report.json"), 0)
      << file("err.txt");
  const Json r = report();
  EXPECT_FALSE(r["experiments"][0]["fit"].is_null());
  ASSERT_EQ(run("trotter --family commuting --dim 3 --seed 5 --out c.json"), 0) << file("err.txt");
  EXPECT_EQ(report("c.json")["experiments"][0]["fit_skipped"], "degenerate: zero error");
}

TEST_F(Cli, UsageErrorsExitTwoWithOneLine) {
  const char* cases[] = {
      "verify --t missing.mtx --a missing.mtx",
      "verify --family nonsense",
      "verify --family diagonal --param b",
      "verify",
      "sweep",
      "frobnicate",
      "verify --family diagonal --tol -1",
      "sweep --b-grid 1:2",
  };
  for (const char* args : cases) {
    EXPECT_EQ(run(args), 2) << args;
    const std::string err = file("err.txt");
    EXPECT_FALSE(err.empty()) << args;
    EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1) << args << ": " << err;
  }
}

TEST_F(Cli, BadMatrixFileIsUsageError) {
  std::ofstream(dir_ / "bad.mtx") << "%%MatrixMarket matrix array complex general\n2 2\n1 0\n0 0\n0 0\n";
  matrix("A.mtx", diag2(1.0, 1.0));
  EXPECT_EQ(run("verify --t bad.mtx --a A.mtx"), 2);
  EXPECT_NE(file("err.txt").find("ParseError"), std::string::npos);
}

TEST_F(Cli, GenerateThenVerifyRoundTrip) {
  ASSERT_EQ(run("generate --family rotated --dim 3 --param b=3 --seed 9 --out gen.json"), 0) << file("err.txt");
  const Json g = report("gen.json");
  EXPECT_NEAR(g["extras"]["generated"]["b"]["value"].get<double>(), 3.0, 3e-8);
  ASSERT_EQ(run("verify --t gen.T.mtx --a gen.A.mtx --out report.json"), 0) << file("err.txt");
  EXPECT_NEAR(report()["certificates"][0]["b"]["value"].get<double>(), 3.0, 3e-8);
}

TEST_F(Cli, ReportToStdoutWhenNoOut) {
  ASSERT_EQ(run("verify --family scalar-multiple --param gamma=0.25 --dim 3"), 0) << file("err.txt");
  const Json r = Json::parse(file("out.txt"));
  EXPECT_NEAR(r["certificates"][0]["b"]["value"].get<double>(), 4.0, 4e-8);
}

TEST_F(Cli, SweepIsDeterministicAcrossThreadCounts) {
  ASSERT_EQ(run("sweep --b-grid 1.5:4:3 --seed 7 --out report.json"), 0) << file("err.txt");
  const std::string first = file("report.json");
  ASSERT_EQ(run("sweep --b-grid 1.5:4:3 --seed 7 --out report.json"), 0);
  EXPECT_EQ(file("report.json"), first);
  setenv("ACCRETIVE_LAB_THREADS", "3", 1);
  ASSERT_EQ(run("sweep --b-grid 1.5:4:3 --seed 7 --out report.json"), 0);
  unsetenv("ACCRETIVE_LAB_THREADS");
  EXPECT_EQ(file("report.json"), first);
  const Json r = Json::parse(first);
  EXPECT_EQ(r["extras"]["sweep"].size(), 9u);
}

TEST_F(Cli, NumericalRangeDump) {
  matrix("T.mtx", diag2(1.0, Complex(0.0, 1.0)));
  ASSERT_EQ(run("nr-dump --t T.mtx --n-angles 16 --out nr.json"), 0) << file("err.txt");
  const Json r = report("nr.json");
  ASSERT_EQ(r["extras"]["numerical_range"]["T"].size(), 16u);
  for (const auto& p : r["extras"]["numerical_range"]["T"]) {
    const double re = p["re"].get<double>(), im = p["im"].get<double>();
    EXPECT_GE(re, -1e-12);
    EXPECT_GE(im, -1e-12);
    EXPECT_LE(re + im, 1.0 + 1e-12);  // segment [1, i]
  }
}

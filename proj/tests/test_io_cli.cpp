#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "cartankit/errors.hpp"
#include "cartankit/io.hpp"
#include "cli.hpp"
#include "support.hpp"

namespace cartankit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::max_diff;
using testing::Rng;

const Complex kI(0.0, 1.0);

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            (std::string("cartankit_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(MatrixJson, RoundTripIsBitExact) {
  Rng rng(81);
  TempDir dir;
  for (int n : {1, 3, 6}) {
    ComplexMatrix m = testing::random_complex(rng, n);
    m(0, 0) = Complex(0.1, -1.0 / 3.0);
    if (n > 1) m(0, 1) = Complex(std::numeric_limits<double>::denorm_min(), 1e300);
    io::write_matrix_file(dir / "m.json", m);
    const ComplexMatrix back = io::read_matrix_file(dir / "m.json");
    ASSERT_EQ(back.rows(), n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        EXPECT_EQ(back(r, c).real(), m(r, c).real());
        EXPECT_EQ(back(r, c).imag(), m(r, c).imag());
      }
    }
  }
}

TEST(MatrixJson, Layout) {
  ComplexMatrix m(2, 2);
  m << 1.0, kI, -kI, 2.0;
  const json j = io::matrix_to_json(m);
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("data")[0][1], json::array({0.0, 1.0}));
  EXPECT_EQ(j.at("data")[1][0], json::array({-0.0, -1.0}));
}

TEST(MatrixJson, ErrorsNameTheField) {
  json good = io::matrix_to_json(identity(2));
  EXPECT_NE(message_of([&] {
              json j = good;
              j.erase("n");
              io::matrix_from_json(j);
            }).find("'n'"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              json j = good;
              j["schema"] = 2;
              io::matrix_from_json(j);
            }).find("schema"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              json j = good;
              j["data"][1][0] = json::array({1.0});
              io::matrix_from_json(j);
            }).find("data[1][0]"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              json j = good;
              j["data"][0][1] = json::array({"x", 0.0});
              io::matrix_from_json(j);
            }).find("data[0][1]"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              json j = good;
              j["data"].erase(1);
              io::matrix_from_json(j);
            }).find("'data'"),
            std::string::npos);
}

TEST(MatrixJson, RejectsNonFiniteAndMalformedFiles) {
  ComplexMatrix m = identity(2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(io::matrix_to_json(m), InvalidArgument);
  TempDir dir;
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_THROW(io::read_matrix_file(dir / "bad.json"), InvalidArgument);
  EXPECT_THROW(io::read_matrix_file(dir / "missing.json"), InvalidArgument);
}

TEST(Config, ParsesSubsystemsTolerancesAndSeed) {
  TempDir dir;
  Rng rng(82);
  io::write_matrix_file(dir / "t.json", testing::random_unitary(rng, 3));
  const json j = {{"subsystems",
                   {{{"dim", 2}, {"type", "AII"}}, {{"dim", 3}, {"type", "AI"}, {"T", "t.json"}}}},
                  {"tolerances", {{"atol", 1e-11}, {"closure_tol", 1e-8}}},
                  {"seed", 17}};
  const io::DecompositionConfig cfg = io::config_from_json(j, dir.path());
  ASSERT_EQ(cfg.subsystems.size(), 2u);
  EXPECT_EQ(cfg.subsystems[0].type, CartanFamily::AII);
  EXPECT_FALSE(cfg.subsystems[0].t.has_value());
  EXPECT_TRUE(cfg.subsystems[1].t.has_value());
  EXPECT_EQ(cfg.tol.atol, 1e-11);
  EXPECT_EQ(cfg.closure_tol, 1e-8);
  ASSERT_TRUE(cfg.seed.has_value());
  EXPECT_EQ(*cfg.seed, 17u);
}

TEST(Config, ErrorsNameTheField) {
  const fs::path here = fs::temp_directory_path();
  EXPECT_NE(message_of([&] {
              io::config_from_json({{"subsystems", {{{"dim", 3}, {"type", "AII"}}}}}, here);
            }).find("AII requires even dimension"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              io::config_from_json({{"subsystems", {{{"dim", 2}, {"type", "AIII"}}}}}, here);
            }).find("subsystems[0].type"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              io::config_from_json({{"subsystems", {{{"type", "AI"}}}}}, here);
            }).find("dim"),
            std::string::npos);
  EXPECT_NE(message_of([&] { io::config_from_json({{"subsystem", json::array()}}, here); })
                .find("subsystems"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              io::config_from_json({{"subsystems", {{{"dim", 2}, {"type", "AI"}}}}, {"seed", -1}},
                                   here);
            }).find("seed"),
            std::string::npos);
}

// In-process CLI runs.
struct CliResult {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliClassify, SymplecticJIsAII) {
  TempDir dir;
  io::write_matrix_file(dir / "j.json", symplectic_j(4));
  const CliResult r = run_cli({"classify", (dir / "j.json").string(), "--kind", "antiunitary"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("is_cartan"), true);
  EXPECT_EQ(j.at("type"), "AII");
  EXPECT_EQ(j.at("dim_k"), 10);
  EXPECT_EQ(j.at("dim_p"), 6);
}

TEST(CliClassify, IdentityIsAI) {
  TempDir dir;
  io::write_matrix_file(dir / "x.json", identity(3));
  const CliResult r = run_cli({"classify", (dir / "x.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report().at("type"), "AI");
  EXPECT_EQ(r.report().at("dim_k"), 3);
}

TEST(CliClassify, UnitaryBlockSign) {
  TempDir dir;
  io::write_matrix_file(dir / "x.json", indefinite_pq(2, 1));
  const CliResult r = run_cli({"classify", (dir / "x.json").string(), "--kind", "unitary"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report().at("type"), "AIII");
  EXPECT_EQ(r.report().at("p"), 2);
  EXPECT_EQ(r.report().at("q"), 1);
  EXPECT_EQ(r.report().at("dim_k"), 5);
}

TEST(CliClassify, NonCartanExitsTwo) {
  TempDir dir;
  ComplexMatrix x = identity(2);
  x(1, 1) = std::polar(1.0, std::numbers::pi / 3);
  io::write_matrix_file(dir / "x.json", x);
  const CliResult r = run_cli({"classify", (dir / "x.json").string(), "--kind", "unitary"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report().at("is_cartan"), false);
}

TEST(CliClassify, InputErrorsExitOne) {
  TempDir dir;
  io::write_matrix_file(dir / "x.json", ComplexMatrix(2.0 * identity(2)));
  EXPECT_EQ(run_cli({"classify", (dir / "x.json").string()}).code, 1);
  EXPECT_EQ(run_cli({"classify", (dir / "missing.json").string()}).code, 1);
  EXPECT_EQ(run_cli({"classify"}).code, 1);
  EXPECT_EQ(run_cli({"classify", (dir / "x.json").string(), "--kind", "sideways"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
}

void write_config(const fs::path& path, const json& subsystems) {
  std::ofstream(path) << json{{"subsystems", subsystems}}.dump(2);
}

TEST(CliOddEven, ThreeQubits) {
  TempDir dir;
  write_config(dir / "c.json", {{{"dim", 2}, {"type", "AII"}},
                                {{"dim", 2}, {"type", "AII"}},
                                {{"dim", 2}, {"type", "AII"}}});
  const CliResult r = run_cli({"oddeven", (dir / "c.json").string(), "--verify", "exhaustive",
                               "--out", (dir / "report.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j.at("predicted_type"), "AII");
  EXPECT_EQ(j.at("measured_type"), "AII");
  EXPECT_EQ(j.at("dim_io"), 36);
  EXPECT_EQ(j.at("passed"), true);
  ASSERT_EQ(j.at("relations").size(), 6u);
  for (const json& rel : j.at("relations")) EXPECT_LE(rel.at("max_residual").get<double>(), 1e-9);
  EXPECT_FALSE(j.contains("seed"));
  EXPECT_EQ(io::read_json_file(dir / "report.json"), j);
}

TEST(CliOddEven, QubitQutrit) {
  TempDir dir;
  write_config(dir / "c.json", {{{"dim", 2}, {"type", "AII"}}, {{"dim", 3}, {"type", "AI"}}});
  const CliResult r = run_cli({"oddeven", (dir / "c.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report().at("predicted_type"), "AII");
  EXPECT_EQ(r.report().at("dim_io"), 21);
}

TEST(CliOddEven, SampledRecordsSeed) {
  TempDir dir;
  write_config(dir / "c.json", {{{"dim", 4}, {"type", "AII"}}, {{"dim", 3}, {"type", "AI"}}});
  const CliResult a = run_cli({"oddeven", (dir / "c.json").string(), "--verify", "sampled",
                               "--samples", "50", "--seed", "5"});
  const CliResult b = run_cli({"--threads", "1", "oddeven", (dir / "c.json").string(), "--verify",
                               "sampled", "--samples", "50", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.report().at("seed"), 5);
  EXPECT_EQ(a.report().at("mode"), "sampled");
  EXPECT_EQ(a.out, b.out);
}

TEST(CliOddEven, OddAIIExitsOne) {
  TempDir dir;
  write_config(dir / "c.json", {{{"dim", 3}, {"type", "AII"}}});
  const CliResult r = run_cli({"oddeven", (dir / "c.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("AII requires even dimension"), std::string::npos);
}

TEST(CliOddEven, ExhaustiveAboveCapExitsOne) {
  TempDir dir;
  write_config(dir / "c.json", {{{"dim", 4}, {"type", "AII"}}, {{"dim", 5}, {"type", "AI"}}});
  EXPECT_EQ(run_cli({"oddeven", (dir / "c.json").string()}).code, 1);
}

TEST(CliFactor, KpOfRealOrthogonal) {
  TempDir dir;
  ComplexMatrix u(2, 2);
  u << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  io::write_matrix_file(dir / "u.json", u);
  const CliResult r = run_cli({"factor", (dir / "u.json").string(), "--mode", "kp", "--type",
                               "AI", "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(r.report().at("residual").get<double>(), 1e-12);
  EXPECT_LE(max_diff(io::read_matrix_file(dir / "out" / "P.json"), identity(2)), 1e-12);
  EXPECT_LE(max_diff(io::read_matrix_file(dir / "out" / "K.json"), u), 1e-12);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
}

TEST(CliFactor, KakWritesThreeFactors) {
  TempDir dir;
  Rng rng(83);
  const ComplexMatrix u = testing::random_unitary_near_identity(rng, 5, 1.0);
  io::write_matrix_file(dir / "u.json", u);
  const CliResult r = run_cli({"factor", (dir / "u.json").string(), "--mode", "kak", "--out",
                               (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const ComplexMatrix k1 = io::read_matrix_file(dir / "out" / "K1.json");
  const ComplexMatrix a = io::read_matrix_file(dir / "out" / "A.json");
  const ComplexMatrix k2 = io::read_matrix_file(dir / "out" / "K2.json");
  EXPECT_LE(hs_norm(k1 * a * k2 - u), 1e-8);
}

TEST(CliFactor, KakRejectsOtherTypes) {
  TempDir dir;
  io::write_matrix_file(dir / "u.json", identity(2));
  EXPECT_EQ(run_cli({"factor", (dir / "u.json").string(), "--mode", "kak", "--type", "AII",
                     "--out", (dir / "out").string()})
                .code,
            1);
}

TEST(CliFactor, PropagatorAIII) {
  TempDir dir;
  Rng rng(84);
  const ComplexMatrix u = testing::random_unitary_near_identity(rng, 3, 1.0);
  io::write_matrix_file(dir / "u.json", u);
  const CliResult r = run_cli({"factor", (dir / "u.json").string(), "--mode", "propagator",
                               "--type", "AIII", "--p", "2", "--q", "1", "--out",
                               (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const ComplexMatrix ua = io::read_matrix_file(dir / "out" / "U_a.json");
  const ComplexMatrix us = io::read_matrix_file(dir / "out" / "U_s.json");
  EXPECT_LE(hs_norm(ua * us - u), 1e-8);
  EXPECT_LE(r.report().at("symmetry_residuals").at("h_a").get<double>(), 1e-9);
}

TEST(CliFactor, BranchCutExitsFour) {
  TempDir dir;
  io::write_matrix_file(dir / "u.json", ComplexMatrix(kI * identity(2)));
  const CliResult r = run_cli({"factor", (dir / "u.json").string(), "--mode", "kp", "--type",
                               "AI", "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("eigenphase"), std::string::npos);
}

TEST(CliFactor, BadTypeParametersExitOne) {
  TempDir dir;
  io::write_matrix_file(dir / "u.json", identity(3));
  EXPECT_EQ(run_cli({"factor", (dir / "u.json").string(), "--type", "AII", "--out",
                     (dir / "out").string()})
                .code,
            1);
  EXPECT_EQ(run_cli({"factor", (dir / "u.json").string(), "--type", "AIII", "--p", "1", "--q",
                     "1", "--out", (dir / "out").string()})
                .code,
            1);
}

TEST(CliTimeReversal, SpinHalf) {
  TempDir dir;
  const CliResult r = run_cli({"timereversal", "--spins", "1/2", "--out", (dir / "x.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ComplexMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  EXPECT_LE(max_diff(io::read_matrix_file(dir / "x.json"), expected), 1e-14);
  EXPECT_NEAR(std::abs(r.report().at("phi").get<double>()), std::numbers::pi, 1e-10);
}

TEST(CliTimeReversal, PhaseFollowsParity) {
  const CliResult even = run_cli({"timereversal", "--spins", "1/2,1/2"});
  ASSERT_EQ(even.code, 0) << even.err;
  EXPECT_NEAR(even.report().at("phi").get<double>(), 0.0, 1e-10);
  const CliResult odd = run_cli({"timereversal", "--spins", "1/2,1"});
  ASSERT_EQ(odd.code, 0) << odd.err;
  EXPECT_NEAR(std::abs(odd.report().at("phi").get<double>()), std::numbers::pi, 1e-10);
  EXPECT_EQ(odd.report().at("spin_residuals").size(), 2u);
}

TEST(CliTimeReversal, MalformedSpinsExitOne) {
  EXPECT_EQ(run_cli({"timereversal", "--spins", "1/3"}).code, 1);
  EXPECT_EQ(run_cli({"timereversal", "--spins", ""}).code, 1);
}

TEST(CliBinary, RunsAsAProcess) {
  TempDir dir;
  io::write_matrix_file(dir / "x.json", identity(3));
  const std::string cmd = std::string("\"") + CARTANKIT_TOOL_PATH + "\" classify \"" +
                          (dir / "x.json").string() + "\" > \"" + (dir / "out.txt").string() +
                          "\"";
  const int status = std::system(cmd.c_str());
  ASSERT_EQ(status, 0);
  EXPECT_EQ(io::read_json_file(dir / "out.txt").at("type"), "AI");

  io::write_matrix_file(dir / "u.json", ComplexMatrix(kI * identity(2)));
  const std::string bad = std::string("\"") + CARTANKIT_TOOL_PATH + "\" factor \"" +
                          (dir / "u.json").string() + "\" --out \"" + (dir / "o").string() +
                          "\" 2> /dev/null";
  const int bad_status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(bad_status));
  EXPECT_EQ(WEXITSTATUS(bad_status), 4);
}

}  // namespace
}  // namespace cartankit

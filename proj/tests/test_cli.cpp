#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "ramaniton/cli.hpp"
#include "test_support.hpp"

namespace ramaniton::cli {
namespace {

using testing::kind_of;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = line.find(',', pos);
      cells.push_back(line.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ramaniton_cli_test_" + name);
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-2.5e-20), "-2.5e-20");
  EXPECT_EQ(format_number(8885.766069012), "8885.76606901");
}

TEST(Grid, Parsing) {
  const GridSpec g = parse_grid("0:3:0.001");
  EXPECT_EQ(g.values().size(), 3001u);
  EXPECT_EQ(parse_grid("1.5").values(), std::vector<double>{1.5});
  EXPECT_EQ(parse_range("0.99:1.01"), std::make_pair(0.99, 1.01));
  EXPECT_EQ(kind_of([] { parse_grid("0:1"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_grid("0:1:x"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_grid("1:0:0.1"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_grid("0:1:-0.1"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_range("2:1"); }), ErrorKind::InvalidConfig);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::InvalidConfig), kExitUsage);
  EXPECT_EQ(exit_code_for(ErrorKind::DegenerateModes), kExitUsage);
  EXPECT_EQ(exit_code_for(ErrorKind::TruncationInadequate), kExitVerification);
  EXPECT_EQ(exit_code_for(ErrorKind::NoResonance), kExitFailure);
}

TEST(Dispersion, RowCountAndHeader) {
  const CliResult r = run({"dispersion", "--eta", "0.1", "--q", "0:3:0.001"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 3002u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"q", "omega1", "omega2", "omega3"}));
  EXPECT_EQ(rows[1][1], "0");  // -q at q = 0, no negative zero
  EXPECT_EQ(rows.back()[0], "3");
}

TEST(Dispersion, SinglePointGap) {
  const CliResult r = run({"dispersion", "--eta", "1", "--q", "1:1:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[1][3]) - std::stod(rows[1][2]), 1.0 / std::sqrt(2.0), 1e-11);
}

TEST(Dispersion, MissingFlagIsUsageError) {
  const CliResult r = run({"dispersion", "--eta", "0.1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--q"), std::string::npos);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"teleport"}).code, kExitUsage);
}

TEST(Evolve, NodeVisibleInSiliconRun) {
  const CliResult r = run({"evolve", "--preset", "silicon", "--q", "1", "--tau", "0:20000:10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 2002u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"tau", "N_S", "N_aS", "N_c", "S_db", "g2"}));
  EXPECT_EQ(rows[1].back(), "");  // g2 undefined at tau = 0
  double peak = 0.0;
  double node_tau = 0.0;
  double node_value = 1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double tau = std::stod(rows[i][0]);
    const double nc = std::stod(rows[i][3]);
    peak = std::max(peak, nc);
    if (tau > 5000 && tau < 12000 && nc < node_value) {
      node_value = nc;
      node_tau = tau;
    }
  }
  EXPECT_NEAR(node_tau, 8.89e3, 0.01 * 8.89e3);
  EXPECT_LT(node_value, 1e-3 * peak);
}

TEST(Evolve, NoPumpStaysAtVacuum) {
  const CliResult r = run({"evolve", "--eta", "0", "--tau", "0:1000:100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (int c = 1; c <= 3; ++c) EXPECT_EQ(rows[i][c], "0");
    EXPECT_LT(std::abs(std::stod(rows[i][4])), 1e-12);
  }
}

TEST(Evolve, JsonRows) {
  const CliResult r = run({"evolve", "--eta", "0.2", "--tau", "0:2:1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_TRUE(j[0]["g2"].is_null());
  EXPECT_GT(j[2]["N_S"].get<double>(), 0.0);
}

TEST(Sweep, PeakAtOptimalLength) {
  const CliResult r = run({"sweep", "--preset", "silicon", "--q", "0.999:1.001:0.00001", "--tau", "8885.77"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"q", "S_db", "N_S", "N_aS", "g2"}));
  double best = -1e9;
  for (std::size_t i = 1; i < rows.size(); ++i) best = std::max(best, std::stod(rows[i][1]));
  EXPECT_NEAR(best, 28.0, 0.5);
}

TEST(Sweep, TauMustBeScalar) {
  EXPECT_EQ(run({"sweep", "--q", "0.9:1.1:0.1", "--tau", "0:10:1"}).code, kExitUsage);
}

TEST(Optimize, SiliconLength) {
  const CliResult r = run({"optimize", "--preset", "silicon"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["q_star"].get<double>(), 1.0, 1e-3);
  EXPECT_NEAR(j["tau_star"].get<double>(), 8.89e3, 89.0);
  EXPECT_NEAR(j["S_db"].get<double>(), 28.0, 0.5);
  EXPECT_NEAR(j["L_mm"].get<double>(), 7.95, 0.0795);
}

TEST(Optimize, LengthOmittedWithoutConstants) {
  const CliResult r = run({"optimize", "--eta", "0.05", "--q-points", "21", "--tau-points", "21", "--tau-range", "10:500"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j.contains("L_mm"));
  EXPECT_TRUE(j.contains("q_star"));
}

TEST(Oracle, DefaultRegimePasses) {
  const CliResult r = run({"oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["cutoff"].get<int>(), 16);
  EXPECT_EQ(j["reference_cutoff"].get<int>(), 32);
  EXPECT_LT(j["deviation"]["max"].get<double>(), 1e-3);
  EXPECT_LT(j["doubling_shift"]["max"].get<double>(), 1e-4);
}

TEST(Oracle, StarvedBasisExitsThree) {
  const CliResult r = run({"oracle", "--cutoff", "4"});
  EXPECT_EQ(r.code, kExitVerification);
  EXPECT_NE(r.err.find("truncation"), std::string::npos);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["truncation_adequate"].get<bool>());
}

TEST(Oracle, NoPumpPassesWithZeroDeviation) {
  const CliResult r = run({"oracle", "--eta", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["deviation"]["max"].get<double>(), 0.0);
}

TEST(KerrEta, FromPreset) {
  const CliResult r = run({"kerr-eta", "--preset", "silicon"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["eta"].get<double>(), 1.03e-3, 1e-5);
  EXPECT_EQ(run({"kerr-eta", "--n0", "3.42"}).code, kExitUsage);
  const CliResult flags = run({"kerr-eta", "--n0", "1", "--n2", "0.125", "--intensity", "1", "--format", "csv"});
  EXPECT_EQ(csv(flags.out)[1][3], "1");
}

TEST(Config, FileThenFlags) {
  const auto path = temp_file("params.cfg");
  {
    std::ofstream f(path);
    f << "# test\neta = 0.5\nq = 0.5\nomega_ratio = 10\n";
  }
  const CliResult from_file = run({"dispersion", "--config", path.string(), "--q", "1:1:1"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const CliResult flag_wins = run({"dispersion", "--config", path.string(), "--eta", "1", "--q", "1:1:1"});
  const auto a = csv(from_file.out);
  const auto b = csv(flag_wins.out);
  EXPECT_NEAR(std::stod(a[1][3]) - std::stod(a[1][2]), 0.5 / std::sqrt(2.0), 1e-11);
  EXPECT_NEAR(std::stod(b[1][3]) - std::stod(b[1][2]), 1.0 / std::sqrt(2.0), 1e-11);
  std::filesystem::remove(path);
}

TEST(Config, BadInputsAreUsageErrors) {
  const auto path = temp_file("bad.cfg");
  {
    std::ofstream f(path);
    f << "temperature = 4\n";
  }
  EXPECT_EQ(run({"dispersion", "--config", path.string(), "--q", "1"}).code, kExitUsage);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"dispersion", "--config", "/nonexistent/ramaniton.cfg", "--q", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"dispersion", "--preset", "germanium", "--q", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"dispersion", "--format", "xml", "--q", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"dispersion", "--eta", "-1", "--q", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"evolve", "--q", "0", "--eta", "0.1", "--tau", "0:1:1"}).code, kExitUsage);
}

TEST(Output, WritesFile) {
  const auto path = temp_file("out.csv");
  const CliResult r = run({"dispersion", "--q", "0.5:1:0.25", "--output", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream contents;
  contents << f.rdbuf();
  EXPECT_EQ(csv(contents.str()).size(), 4u);
  std::filesystem::remove(path);
}

TEST(Output, HelpExitsCleanly) {
  const CliResult r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("dispersion"), std::string::npos);
}

TEST(Determinism, RepeatedRunsAreIdentical) {
  const std::vector<std::string> args{"sweep", "--preset", "silicon", "--q", "0.995:1.005:0.0001", "--tau", "7000"};
  std::string first;
  {
    testing::ScopedEnv env("RAMANITON_THREADS", "1");
    first = run(args).out;
  }
  for (const char* threads : {"1", "2", "7"}) {
    testing::ScopedEnv env("RAMANITON_THREADS", threads);
    EXPECT_EQ(run(args).out, first) << threads << " threads";
  }
}

}  // namespace
}  // namespace ramaniton::cli

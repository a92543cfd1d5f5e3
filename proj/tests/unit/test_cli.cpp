#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mixpade/problems.hpp"
#include "mixpade/stepper.hpp"

namespace {

using mixpade::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mixpade");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

using Row = std::vector<std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    Row row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

std::size_t column(const Row& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

TEST(CliSpectral, HeaderAndRowCount) {
  const auto r = invoke({"spectral", "--M", "2", "--rho-inf", "0.8", "--x-min", "0.001",
                         "--x-max", "1000", "--points", "400"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 401u);
  EXPECT_EQ(rows[0], (Row{"x", "rho", "phase", "period_error", "damping_ratio"}));
  EXPECT_NEAR(std::stod(rows[1][0]), 1e-3, 1e-15);
  EXPECT_NEAR(std::stod(rows.back()[0]), 1e3, 1e-9);
  EXPECT_NEAR(std::stod(rows.back()[1]), 0.8, 1e-3);
}

TEST(CliSpectral, DiagonalSchemeHasUnitRadius) {
  const auto r = invoke({"spectral", "--M", "3", "--rho-inf", "1", "--points", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), 1.0, 1e-12);
}

TEST(CliSpectral, HhtColumns) {
  const auto r = invoke({"spectral", "--hht-alpha", "-0.3", "--x-max", "1000", "--points", "30"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows[0].size(), 9u);
  EXPECT_EQ(rows[0][5], "hht_rho");
  EXPECT_NEAR(std::stod(rows.back()[5]), 0.7 / 1.3, 1e-4);
  // Phase is undefined past x = 1 for HHT and written as an empty cell.
  EXPECT_EQ(rows.back()[6], "");
}

TEST(CliSimulate, RodRowCountMatchesCoveringSteps) {
  const auto r = invoke({"simulate", "--problem", "rod", "--elements", "200", "--M", "2", "--cfl",
                         "20", "--rho-inf", "0.8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  const auto model = mixpade::build_rod(200);
  const double dt = mixpade::cfl_to_dt(20.0, model.wave_speed, model.element_size);
  const mixpade::RodParams p;
  const double duration = 2.0 * p.length / std::sqrt(p.youngs / p.density);
  EXPECT_EQ(rows.size() - 1, mixpade::covering_steps(duration, dt));
  EXPECT_EQ(rows[0], (Row{"t", "mid_u", "mid_v", "mid_a"}));
  EXPECT_NEAR(std::stod(rows[1][0]), dt, 1e-15);
}

TEST(CliSimulate, ThreeDofDefaults) {
  const auto r = invoke({"simulate", "--problem", "three_dof", "--M", "3", "--reference"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 716u);
  EXPECT_NEAR(std::stod(rows[1][0]), 0.14, 1e-12);
  EXPECT_NEAR(std::stod(rows.back()[0]), 715 * 0.14, 1e-9);
  const std::size_t u = column(rows[0], "u2_u");
  const std::size_t ur = column(rows[0], "u2_u_ref");
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    worst = std::max(worst, std::abs(std::stod(rows[i][u]) - std::stod(rows[i][ur])));
  }
  EXPECT_LT(worst, 0.05);
}

TEST(CliSimulate, ScalarWaveReferenceColumns) {
  const auto r = invoke({"simulate", "--problem", "scalar_wave_2d", "--elements", "16", "--M", "2",
                         "--cfl", "2", "--duration", "0.25", "--reference"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  const std::size_t ur = column(rows[0], "center_u_ref");
  const std::size_t vr = column(rows[0], "center_v_ref");
  const auto& last = rows.back();
  const double t = std::stod(last[0]);
  const auto [u, v] = mixpade::scalar_wave_reference(0.5, 0.5, t);
  EXPECT_NEAR(std::stod(last[ur]), u, 1e-10);
  EXPECT_NEAR(std::stod(last[vr]), v, 1e-10);
}

TEST(CliSimulate, DofProbe) {
  const auto r = invoke({"simulate", "--problem", "three_dof", "--probe", "0,1", "--duration", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (Row{"t", "dof0_u", "dof0_v", "dof0_a", "dof1_u", "dof1_v", "dof1_a"}));
}

double terminal_estimate(const std::vector<std::string>& extra) {
  std::vector<std::string> args{"convergence"};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = invoke(args);
  EXPECT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], (Row{"dt", "error", "order_estimate"}));
  EXPECT_EQ(rows[1][2], "");
  return std::stod(rows.back()[2]);
}

TEST(CliConvergence, TerminalEstimates) {
  EXPECT_NEAR(terminal_estimate({"--M", "2", "--rho-inf", "1"}), 4.0, 0.25);
  EXPECT_NEAR(terminal_estimate({"--M", "2", "--rho-inf", "0.8"}), 3.0, 0.25);
  EXPECT_NEAR(terminal_estimate({"--M", "1", "--rho-inf", "1"}), 2.0, 0.25);
}

// Same free response; the load enters as the mid-step value in one and as
// the end-point average in the other, an O(dt^2) difference.
TEST(CliCompare, TrapezoidalMatchesHhtAtZeroAlpha) {
  const auto r = invoke({"compare", "--problem", "sdof", "--M", "1", "--rho-inf", "1",
                         "--hht-alpha", "0", "--dt", "0.01", "--duration", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 11u);
  const auto& h = rows[0];
  const auto& last = rows.back();
  EXPECT_EQ(last[column(h, "hht_aligned")], "1");
  EXPECT_NEAR(std::stod(last[column(h, "t")]), 0.1, 1e-12);
  EXPECT_NEAR(std::stod(last[column(h, "x_u")]), std::stod(last[column(h, "hht_x_u")]), 1e-6);
  EXPECT_NEAR(std::stod(last[column(h, "x_v")]), std::stod(last[column(h, "hht_x_v")]), 1e-5);
}

TEST(CliErrors, UsageExitCodes) {
  EXPECT_EQ(invoke({"simulate", "--problem", "sdof", "--duration", "-1"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "sdof", "--duration", "abc"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "sdof", "--duration", ""}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "rod", "--dt", "1e-5", "--cfl", "2"}).code, 2);
  EXPECT_EQ(invoke({"spectral", "--rho-inf", "1.5"}).code, 2);
  EXPECT_EQ(invoke({"spectral", "--M", "0"}).code, 2);
  EXPECT_EQ(invoke({"integrate"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "beam"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "three_dof", "--probe", "99"}).code, 2);
  EXPECT_EQ(invoke({"compare", "--problem", "sdof", "--hht-alpha", "-0.5"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "--problem", "sdof", "--M", "2", "--pf", "9"}).code, 2);
  const auto r = invoke({"spectral", "--rho-inf", "2"});
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(CliOutput, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"simulate", "--problem", "bimaterial_rod", "--elements", "40",
                                      "--M", "2", "--duration", "0.05"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(CliOutput, ConfigFileAndOverride) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = dir / "mixpade_cli_test.ini";
  const auto csv = dir / "mixpade_cli_test.csv";
  {
    std::ofstream f(cfg);
    f << "M=3\nrho-inf=0.5\npoints=7\n";
  }
  auto r = invoke({"spectral", "--config", cfg.string(), "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(csv);
  std::stringstream ss;
  ss << in.rdbuf();
  auto rows = parse_csv(ss.str());
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_NEAR(std::stod(rows.back()[1]), 0.5, 2e-3);

  r = invoke({"spectral", "--config", cfg.string(), "--points", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_csv(r.out).size(), 4u);
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
}

}  // namespace

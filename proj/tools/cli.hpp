#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mixpade::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string command;
  int order = 2;
  std::optional<double> rho_inf;
  std::optional<double> hht_alpha;
  std::optional<double> dt;
  std::optional<double> cfl;
  std::optional<double> duration;
  std::string problem = "rod";
  std::optional<int> elements;
  std::optional<int> load_order;
  std::string out = "-";
  std::vector<std::string> probes;
  double x_min = 1e-3;
  double x_max = 1e3;
  int points = 200;
  bool reference = false;
  std::string grading = "uniform";
};

struct ConvergenceRow {
  double dt;
  double error;
  std::optional<double> order_estimate;
};

/// Error of the forced SDOF test problem at t = 1 for each step size.
std::vector<ConvergenceRow> convergence_study(int order, double rho_inf,
                                              const std::vector<double>& dts,
                                              int load_order = -1);

/// Least-squares slope of log(error) against log(dt).
double fitted_order(const std::vector<ConvergenceRow>& rows);

/// Each command writes CSV to `out`. Throws mixpade errors on failure.
void cmd_spectral(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_convergence(const RunConfig& cfg, std::ostream& out);
void cmd_compare(const RunConfig& cfg, std::ostream& out);

/// Parses arguments, dispatches, writes the CSV and maps failures to exit
/// codes: 0 ok, 2 usage or configuration, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixpade::cli

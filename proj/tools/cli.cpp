#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mixpade/errors.hpp"
#include "mixpade/problems.hpp"
#include "mixpade/spectral.hpp"
#include "mixpade/stepper.hpp"

namespace mixpade::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class UsageError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

std::string num(double x) {
  if (std::isnan(x)) return {};
  return fmt::format("{:.12g}", x);
}

// SDOF used by the convergence study: m = 1, k = 4 pi^2, f = sin(3t),
// u0 = 1, v0 = 0.
constexpr double kConvOmega = kTwoPi;
constexpr double kConvForcing = 3.0;

std::pair<double, double> convergence_exact(double t) {
  const double w = kConvOmega;
  const double wf = kConvForcing;
  const double g = 1.0 / (w * w - wf * wf);
  const double b = -wf * g / w;
  const double u = std::cos(w * t) + b * std::sin(w * t) + g * std::sin(wf * t);
  const double v = -w * std::sin(w * t) + b * w * std::cos(w * t) + g * wf * std::cos(wf * t);
  return {u, v};
}

MeshedModel convergence_model() {
  return build_sdof(1.0, 0.0, kConvOmega * kConvOmega, 1.0, 0.0,
                    [](double t) { return std::sin(kConvForcing * t); });
}

bool is_mesh(const std::string& problem) {
  return problem == "rod" || problem == "bimaterial_rod" || problem == "scalar_wave_2d";
}

MeshedModel make_model(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  if (p == "sdof") return convergence_model();
  if (p == "three_dof") return build_three_dof();
  Grading grading = Grading::uniform;
  if (cfg.grading == "sinusoidal") {
    grading = Grading::sinusoidal;
  } else if (cfg.grading != "uniform") {
    throw UsageError("unknown grading '" + cfg.grading + "'");
  }
  if (p == "rod") return build_rod(cfg.elements.value_or(200), grading);
  if (p == "bimaterial_rod") return build_bimaterial_rod(cfg.elements.value_or(200));
  if (p == "scalar_wave_2d") return build_scalar_wave(cfg.elements.value_or(64));
  throw UsageError("unknown problem '" + p + "'");
}

double default_rho(const std::string& problem) {
  if (problem == "three_dof") return 0.0;
  if (problem == "sdof") return 1.0;
  return 0.8;
}

double default_duration(const std::string& problem) {
  if (problem == "three_dof") return 100.0;
  if (problem == "rod") {
    const RodParams r;
    return 2.0 * r.length / std::sqrt(r.youngs / r.density);
  }
  if (problem == "bimaterial_rod") {
    const BimaterialParams b;
    return 2.0 * (b.segment_length / b.c_left + b.segment_length / b.c_right);
  }
  return 1.0;
}

double default_cfl(int order) { return 10.0 * std::max(1, order - 1); }

double resolve_duration(const RunConfig& cfg) {
  const double d = cfg.duration.value_or(default_duration(cfg.problem));
  if (!(d > 0.0) || !std::isfinite(d)) throw UsageError("duration must be positive");
  return d;
}

double resolve_dt(const RunConfig& cfg, const MeshedModel& model) {
  if (cfg.dt && cfg.cfl) throw UsageError("give either --dt or --cfl, not both");
  if (cfg.dt) {
    if (!(*cfg.dt > 0.0)) throw UsageError("--dt must be positive");
    return *cfg.dt;
  }
  if (!is_mesh(cfg.problem)) {
    if (cfg.cfl) throw UsageError("--cfl needs a meshed problem");
    return cfg.problem == "three_dof" ? 0.14 : 0.01;
  }
  const double cfl = cfg.cfl.value_or(default_cfl(cfg.order));
  if (!(cfl > 0.0)) throw UsageError("--cfl must be positive");
  return cfl_to_dt(cfl, model.wave_speed, model.element_size);
}

struct Probe {
  std::string name;
  Eigen::Index dof;
  int model_slot;  // index into model.probes, -1 for a raw DOF
};

std::vector<Probe> resolve_probes(const RunConfig& cfg, const MeshedModel& model) {
  std::vector<Probe> out;
  if (cfg.probes.empty()) {
    for (std::size_t i = 0; i < model.probes.size(); ++i) {
      out.push_back({model.probe_names[i], model.probes[i], static_cast<int>(i)});
    }
    return out;
  }
  for (const auto& name : cfg.probes) {
    bool found = false;
    for (std::size_t i = 0; i < model.probes.size(); ++i) {
      if (model.probe_names[i] == name) {
        out.push_back({name, model.probes[i], static_cast<int>(i)});
        found = true;
      }
    }
    if (found) continue;
    std::size_t pos = 0;
    long long dof = -1;
    try {
      dof = std::stoll(name, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != name.size() || dof < 0 || dof >= model.system.size()) {
      throw UsageError("unknown probe '" + name + "'");
    }
    out.push_back({"dof" + name, static_cast<Eigen::Index>(dof), -1});
  }
  return out;
}

RecordOptions record_for(const std::vector<Probe>& probes) {
  RecordOptions rec;
  for (const auto& p : probes) rec.probes.push_back(p.dof);
  return rec;
}

StepperConfig stepper_config(const RunConfig& cfg, double rho, double dt, std::size_t n) {
  StepperConfig sc;
  sc.order = cfg.order;
  sc.rho_inf = rho;
  sc.dt = dt;
  sc.load_order = cfg.load_order.value_or(-1);
  sc.n_steps = n;
  return sc;
}

void validate_scheme(const RunConfig& cfg, double rho) {
  if (cfg.order < 1 || cfg.order > kMaxPadeOrder) {
    throw UsageError(fmt::format("--M must be in [1, {}]", kMaxPadeOrder));
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw UsageError("--rho-inf must be in [0, 1]");
  if (cfg.load_order && (*cfg.load_order < 0 || *cfg.load_order > max_load_order(cfg.order))) {
    throw UsageError(fmt::format("--pf must be in [0, {}] for M = {}", max_load_order(cfg.order),
                                 cfg.order));
  }
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + cfg.out + "'");
  f << text;
  if (!f) throw UsageError("failed writing output file '" + cfg.out + "'");
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(int order, double rho_inf,
                                              const std::vector<double>& dts, int load_order) {
  const MeshedModel model = convergence_model();
  const auto [u_ex, v_ex] = convergence_exact(1.0);
  const double scale = std::max(std::abs(u_ex), std::abs(v_ex) / kConvOmega);

  std::vector<ConvergenceRow> rows;
  for (double dt : dts) {
    const auto [n, h] = align_steps(1.0, dt);
    StepperConfig sc{order, rho_inf, h, load_order, n};
    const History hist = integrate(model.system, sc, model.u0, model.v0, {{0}, n});
    const auto& last = hist.back();
    const double err =
        std::max(std::abs(last.u[0] - u_ex), std::abs(last.v[0] - v_ex) / kConvOmega) / scale;
    ConvergenceRow row{h, err, std::nullopt};
    if (!rows.empty()) {
      const auto& prev = rows.back();
      row.order_estimate = std::log(prev.error / err) / std::log(prev.dt / h);
    }
    rows.push_back(row);
  }
  return rows;
}

double fitted_order(const std::vector<ConvergenceRow>& rows) {
  if (rows.size() < 2) throw ParameterError("fitted_order needs at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.dt);
    const double y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void cmd_spectral(const RunConfig& cfg, std::ostream& out) {
  const double rho = cfg.rho_inf.value_or(0.8);
  validate_scheme(cfg, rho);
  if (!(cfg.x_min > 0.0) || !(cfg.x_max >= cfg.x_min) || cfg.points < 1) {
    throw UsageError("need 0 < --x-min <= --x-max and --points >= 1");
  }
  const auto grid = log_grid(cfg.x_min, cfg.x_max, cfg.points);
  const MixedPadeScheme scheme(cfg.order, rho);
  const auto rows = sweep(scheme, grid);
  std::vector<SpectralCurvePoint> hht;
  if (cfg.hht_alpha) hht = sweep_hht(*cfg.hht_alpha, grid);

  std::string text = "x,rho,phase,period_error,damping_ratio";
  if (cfg.hht_alpha) text += ",hht_rho,hht_phase,hht_period_error,hht_damping_ratio";
  text += '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    text += fmt::format("{},{},{},{},{}", num(r.x), num(r.rho), num(r.phase), num(r.period_error),
                        num(r.damping_ratio));
    if (cfg.hht_alpha) {
      const auto& h = hht[i];
      text += fmt::format(",{},{},{},{}", num(h.rho), num(h.phase), num(h.period_error),
                          num(h.damping_ratio));
    }
    text += '\n';
  }
  out << text;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const double rho = cfg.rho_inf.value_or(default_rho(cfg.problem));
  validate_scheme(cfg, rho);
  const double duration = resolve_duration(cfg);
  const MeshedModel model = make_model(cfg);
  const double dt = resolve_dt(cfg, model);
  const std::size_t n = covering_steps(duration, dt);
  const auto probes = resolve_probes(cfg, model);
  const RecordOptions rec = record_for(probes);

  const History hist =
      cfg.hht_alpha ? hht_integrate(model.system, *cfg.hht_alpha, dt, n, model.u0, model.v0, rec)
                    : integrate(model.system, stepper_config(cfg, rho, dt, n), model.u0, model.v0, rec);

  const bool ref_u = cfg.reference && static_cast<bool>(model.reference_u);
  const bool ref_v = cfg.reference && static_cast<bool>(model.reference_v);
  std::string text = "t";
  for (const auto& p : probes) {
    text += fmt::format(",{0}_u,{0}_v,{0}_a", p.name);
    if (p.model_slot >= 0 && ref_u) text += fmt::format(",{}_u_ref", p.name);
    if (p.model_slot >= 0 && ref_v) text += fmt::format(",{}_v_ref", p.name);
  }
  text += '\n';
  for (std::size_t r = 1; r < hist.size(); ++r) {
    const auto& rec_r = hist[r];
    text += num(rec_r.t);
    const Vec ru = ref_u ? model.reference_u(rec_r.t) : Vec();
    const Vec rv = ref_v ? model.reference_v(rec_r.t) : Vec();
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      text += fmt::format(",{},{},{}", num(rec_r.u[k]), num(rec_r.v[k]), num(rec_r.a[k]));
      const int slot = probes[i].model_slot;
      if (slot >= 0 && ref_u) text += "," + num(ru[slot]);
      if (slot >= 0 && ref_v) text += "," + num(rv[slot]);
    }
    text += '\n';
  }
  out << text;
}

void cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  const double rho = cfg.rho_inf.value_or(1.0);
  validate_scheme(cfg, rho);
  const double dt0 = cfg.dt.value_or(1.0 / 20.0);
  if (!(dt0 > 0.0) || dt0 > 1.0) throw UsageError("--dt must be in (0, 1]");
  std::vector<double> dts;
  for (int i = 0; i < 5; ++i) dts.push_back(dt0 / std::pow(2.0, i));
  const auto rows = convergence_study(cfg.order, rho, dts, cfg.load_order.value_or(-1));

  std::string text = "dt,error,order_estimate\n";
  for (const auto& r : rows) {
    text += fmt::format("{},{},{}\n", num(r.dt), num(r.error),
                        r.order_estimate ? num(*r.order_estimate) : std::string());
  }
  out << text;
}

void cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const double rho = cfg.rho_inf.value_or(default_rho(cfg.problem));
  validate_scheme(cfg, rho);
  const double duration = resolve_duration(cfg);
  const MeshedModel model = make_model(cfg);
  const double dt = resolve_dt(cfg, model);
  double dt_hht = dt;
  if (!cfg.dt && is_mesh(cfg.problem)) dt_hht = cfl_to_dt(1.0, model.wave_speed, model.element_size);
  const double alpha = cfg.hht_alpha.value_or(rho_infty_to_alpha(rho));

  const std::size_t n = covering_steps(duration, dt);
  const std::size_t n_hht = covering_steps(duration, dt_hht);
  const auto probes = resolve_probes(cfg, model);
  const RecordOptions rec = record_for(probes);

  // Build the HHT stepper first so a bad alpha fails before any long run.
  const HhtStepper check(model.system, alpha, dt_hht);
  const History pade =
      integrate(model.system, stepper_config(cfg, rho, dt, n), model.u0, model.v0, rec);
  const History hht = hht_integrate(model.system, alpha, dt_hht, n_hht, model.u0, model.v0, rec);

  std::string text = "t";
  for (const auto& p : probes) text += fmt::format(",{0}_u,{0}_v", p.name);
  text += ",hht_t";
  for (const auto& p : probes) text += fmt::format(",hht_{0}_u,hht_{0}_v", p.name);
  text += ",hht_aligned\n";
  for (std::size_t r = 1; r < pade.size(); ++r) {
    const auto& a = pade[r];
    const auto j = static_cast<std::size_t>(
        std::min<double>(std::llround(a.t / dt_hht), static_cast<double>(n_hht)));
    const auto& b = hht[j];
    const bool aligned = std::abs(b.t - a.t) <= 1e-9 * std::max(dt, dt_hht);
    text += num(a.t);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      text += fmt::format(",{},{}", num(a.u[k]), num(a.v[k]));
    }
    text += "," + num(b.t);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      text += fmt::format(",{},{}", num(b.u[k]), num(b.v[k]));
    }
    text += aligned ? ",1\n" : ",0\n";
  }
  out << text;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // An empty value would otherwise leave an optional unset.
  const CLI::Validator non_empty(
      [](const std::string& s) { return s.empty() ? std::string("value is empty") : std::string(); },
      "", "NONEMPTY");
  RunConfig cfg;
  CLI::App app{"High-order time integration with controllable numerical dissipation"};
  app.add_option("command", cfg.command, "spectral | simulate | convergence | compare")
      ->required()
      ->check(CLI::IsMember({"spectral", "simulate", "convergence", "compare"}));
  app.add_option("--M", cfg.order, "Denominator order M of the scheme")
      ->check(non_empty);
  app.add_option("--rho-inf", cfg.rho_inf, "Spectral radius in the high-frequency limit")
      ->check(non_empty);
  app.add_option("--hht-alpha", cfg.hht_alpha, "HHT-alpha parameter in [-1/3, 0]")
      ->check(non_empty);
  app.add_option("--dt", cfg.dt, "Time step")
      ->check(non_empty);
  app.add_option("--cfl", cfg.cfl, "CFL number (meshed problems)")
      ->check(non_empty);
  app.add_option("--duration", cfg.duration, "Simulated time")
      ->check(non_empty);
  app.add_option("--problem", cfg.problem,
                 "sdof | three_dof | rod | bimaterial_rod | scalar_wave_2d");
  app.add_option("--elements", cfg.elements, "Elements (per side / per segment)")
      ->check(non_empty);
  app.add_option("--pf", cfg.load_order, "Load expansion degree")
      ->check(non_empty);
  app.add_option("--out", cfg.out, "Output CSV path, - for stdout");
  app.add_option("--probe", cfg.probes, "Probe names or DOF indices")->delimiter(',');
  app.add_option("--x-min", cfg.x_min, "Smallest dt/T of a spectral sweep")
      ->check(non_empty);
  app.add_option("--x-max", cfg.x_max, "Largest dt/T of a spectral sweep")
      ->check(non_empty);
  app.add_option("--points", cfg.points, "Rows of a spectral sweep")
      ->check(non_empty);
  app.add_option("--grading", cfg.grading, "Rod mesh: uniform | sinusoidal");
  app.add_flag("--reference", cfg.reference, "Add exact reference columns");
  app.set_config("--config", "", "Key-value file with the same names as the flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ostringstream csv;
    if (cfg.command == "spectral") {
      cmd_spectral(cfg, csv);
    } else if (cfg.command == "simulate") {
      cmd_simulate(cfg, csv);
    } else if (cfg.command == "convergence") {
      cmd_convergence(cfg, csv);
    } else {
      cmd_compare(cfg, csv);
    }
    write_output(cfg, csv.str(), out);
  } catch (const DivergenceError& e) {
    err << "error: solution diverged at step " << e.step() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StepAlignmentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace mixpade::cli

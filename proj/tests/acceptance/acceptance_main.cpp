// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli.hpp"
#include "mixpade/errors.hpp"
#include "mixpade/linear_kernel.hpp"
#include "mixpade/pade.hpp"
#include "mixpade/problems.hpp"
#include "mixpade/spectral.hpp"
#include "mixpade/stepper.hpp"
#include "oracles.hpp"

namespace {

using namespace mixpade;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

StepperConfig config(int order, double rho, double dt, std::size_t n) {
  StepperConfig c;
  c.order = order;
  c.rho_inf = rho;
  c.dt = dt;
  c.n_steps = n;
  return c;
}

double rms(const std::vector<double>& e) {
  if (e.empty()) return 0.0;
  double s = 0.0;
  for (double x : e) s += x * x;
  return std::sqrt(s / static_cast<double>(e.size()));
}

Outcome alpha_map() {
  const double alphas[] = {-0.05, -0.1, -0.3};
  const double want[] = {0.90476, 0.81818, 0.53846};
  bool ok = true;
  std::string d;
  for (int i = 0; i < 3; ++i) {
    const double got = alpha_to_rho_infty(alphas[i]);
    ok = ok && fmt::format("{:.5g}", got) == fmt::format("{:.5g}", want[i]);
    d += fmt::format("{:.5g} ", got);
  }
  return {ok, d};
}

Outcome diagonal_unit_modulus() {
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m) {
    const MixedPadeScheme s(m, 1.0);
    for (double x : log_grid(1e-3, 1e4, 200)) {
      worst = std::max(worst, std::abs(std::abs(amplification_factor(s, x)) - 1.0));
    }
  }
  return {worst <= 1e-12, fmt::format("max ||R|-1| = {:.3g}", worst)};
}

Outcome high_frequency_limit() {
  double worst = 0.0;
  for (int m = 2; m <= 5; ++m) {
    for (double rho : {0.0, 0.25, 0.5, 0.75, 0.9}) {
      const MixedPadeScheme s(m, rho);
      worst = std::max(worst, std::abs(std::abs(amplification_factor(s, 1e4)) - rho));
    }
  }
  return {worst <= 1e-3, fmt::format("max ||R(1e4)|-rho| = {:.3g}", worst)};
}

Outcome hht_limit() {
  double worst = 0.0;
  for (double a : {-0.05, -0.1, -0.3}) {
    const double got = std::abs(hht_amplification(a, 1e4));
    worst = std::max(worst, std::abs(got - (1 + a) / (1 - a)));
  }
  return {worst <= 1e-2, fmt::format("max deviation {:.3g}", worst)};
}

Outcome convergence_orders() {
  std::vector<double> dts;
  for (int i = 0; i < 5; ++i) dts.push_back(1.0 / (20.0 * std::pow(2.0, i)));
  bool ok = true;
  std::string d;
  for (int m = 1; m <= 3; ++m) {
    const double full = cli::fitted_order(cli::convergence_study(m, 1.0, dts));
    const double damped = cli::fitted_order(cli::convergence_study(m, 0.8, dts));
    ok = ok && std::abs(full - 2 * m) <= 0.25 && std::abs(damped - (2 * m - 1)) <= 0.25;
    d += fmt::format("M={}: {:.3f}/{:.3f} ", m, full, damped);
  }
  return {ok, d};
}

Outcome modal_equivalence() {
  std::mt19937 rng(2024);
  const int n = 10;
  const Mat m = oracle::random_spd(n, rng);
  const Mat k = oracle::random_spd(n, rng, 0.5);
  const StructuralSystem sys(m, Mat(), k, LoadModel(n));
  const auto eig = generalized_eig(k, m);
  const Vec u0 = oracle::random_vec(n, rng);
  const Vec v0 = oracle::random_vec(n, rng);
  const double dt = 0.4;
  const std::size_t steps = 50;
  const Vec qu0 = eig.vectors.transpose() * m * u0;
  const Vec qv0 = eig.vectors.transpose() * m * v0;
  double worst = 0.0;
  for (int order = 1; order <= 4; ++order) {
    for (double rho : {0.0, 0.8, 1.0}) {
      const auto h = integrate(sys, config(order, rho, dt, steps), u0, v0, {{}, steps});
      const Vec qu = eig.vectors.transpose() * m * h.back().u;
      const Vec qv = eig.vectors.transpose() * m * h.back().v;
      const MixedPadeScheme s(order, rho);
      for (int j = 0; j < n; ++j) {
        const double w = std::sqrt(eig.omega_sq[j]);
        const auto r = amplification_factor(s, w * dt / (2 * kPi));
        const std::complex<double> q0(w * qu0[j], -qv0[j]);
        const std::complex<double> want = q0 * std::pow(r, static_cast<double>(steps));
        const std::complex<double> got(w * qu[j], -qv[j]);
        worst = std::max(worst, std::abs(got - want) / std::abs(q0));
      }
    }
  }
  return {worst <= 1e-8, fmt::format("max modal error {:.3g}", worst)};
}

Outcome three_dof() {
  const ThreeDofParams p;
  const auto model = build_three_dof(p);
  const ThreeDofReference ref(p);
  const double dt = 0.14;
  const std::size_t n = covering_steps(100.0, dt);
  auto error = [&](int order) {
    const auto h = integrate(model.system, config(order, 0.0, dt, n), model.u0, model.v0);
    double worst = 0.0;
    for (int dof = 0; dof < 2; ++dof) {
      double err = 0.0, scale = 0.0;
      for (const auto& r : h) {
        const double u_ref = ref.at(r.t).u[dof];
        err = std::max(err, std::abs(r.u[dof] - u_ref));
        scale = std::max(scale, std::abs(u_ref));
      }
      worst = std::max(worst, err / scale);
    }
    return std::make_pair(worst, h);
  };
  const auto [e2, h2] = error(2);
  const auto [e3, h3] = error(3);
  const auto [e4, h4] = error(4);
  // Spike measured on order (2,3); the (1,2) reaction is dominated by the
  // degree-2 load fit on every step.
  std::vector<double> reaction;
  for (std::size_t i = 1; i < h3.size(); ++i) {
    reaction.push_back(std::abs(reaction_force(p, h3[i].t, h3[i].u[0])));
  }
  const double first = reaction.front();
  std::nth_element(reaction.begin(), reaction.begin() + static_cast<long>(reaction.size() / 2),
                   reaction.end());
  const double median = reaction[reaction.size() / 2];
  const bool spike = first > 10.0 * median;
  const bool ok = e3 <= 0.01 && e4 <= 0.01 && e2 > e3 && spike;
  return {ok, fmt::format("(1,2) {:.3g}, (2,3) {:.3g}, (3,4) {:.3g}, spike {:.3g}x median", e2,
                          e3, e4, first / median)};
}

struct RodRun {
  double rms;
  double peak;
};

RodRun rod_run(const MeshedModel& model, const RodParams& rp, int order, double rho) {
  const double c = std::sqrt(rp.youngs / rp.density);
  const double dx = model.element_size;
  const double dt = cfl_to_dt(10.0 * (order - 1), c, dx);
  const double duration = 2.0 * rp.length / c;
  const std::size_t n = covering_steps(duration, dt);
  const auto h = integrate(model.system, config(order, rho, dt, n), model.u0, model.v0,
                           {{model.probes.front()}, 1});
  const double x = model.nodes(model.probes.front() + 1);
  const double v0 = rp.load / (rp.density * c);
  const auto fronts = rod_wavefront_times(x, h.back().t + dt, rp);
  std::vector<double> err;
  double peak = 0.0;
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double t = h[i].t;
    const double v = h[i].v[0] / v0;
    peak = std::max(peak, std::abs(v));
    const bool near_front = std::any_of(fronts.begin(), fronts.end(),
                                        [&](double tf) { return std::abs(t - tf) <= 2 * dx / c; });
    if (near_front) continue;
    err.push_back(v - rod_reference_velocity(x, t, rp) / v0);
  }
  return {rms(err), peak};
}

Outcome rod() {
  const RodParams rp;
  const auto model = build_rod(200, Grading::uniform, rp);
  bool ok = true;
  std::string d;
  for (int order : {2, 3}) {
    const RodRun damped = rod_run(model, rp, order, 0.8);
    const RodRun full = rod_run(model, rp, order, 1.0);
    const double ratio = full.rms / damped.rms;
    ok = ok && ratio >= 3.0 && damped.peak <= 1.2;
    d += fmt::format("M={}: rms ratio {:.3g}, peak {:.3g}; ", order, ratio, damped.peak);
  }
  return {ok, d};
}

Outcome bimaterial() {
  const BimaterialParams bp;
  const auto model = build_bimaterial_rod(200, bp);
  const double dt = cfl_to_dt(10.0, model.wave_speed, model.element_size);
  const double duration =
      2.0 * (bp.segment_length / bp.c_left + bp.segment_length / bp.c_right);
  const std::size_t n = covering_steps(duration, dt);
  const auto h = integrate(model.system, config(2, 0.8, dt, n), model.u0, model.v0);
  const Vec f = model.system.load()(0.0);
  const Eigen::Index probe = model.probes.front();

  std::vector<double> t;
  for (const auto& r : h) t.push_back(r.t);
  const auto exact = bimaterial_interface_velocity(t, bp);
  double peak_num = 0.0, peak_exact = 0.0;
  bool finite = true;
  bool monotone = true;
  double last_e = total_energy(model.system, h[0].u, h[0].v, f);
  for (std::size_t i = 0; i < h.size(); ++i) {
    finite = finite && h[i].u.allFinite() && h[i].v.allFinite();
    peak_num = std::max(peak_num, std::abs(h[i].v[probe]));
    peak_exact = std::max(peak_exact, std::abs(exact[i]));
    if (i == 0) continue;
    const double e = total_energy(model.system, h[i].u, h[i].v, f);
    monotone = monotone && e <= last_e + 1e-9 * std::abs(last_e);
    last_e = e;
  }
  const double overshoot = peak_num / peak_exact;
  const bool ok = finite && monotone && overshoot <= 1.2;
  return {ok, fmt::format("bounded {}, energy non-increasing {}, peak ratio {:.3g}", finite,
                          monotone, overshoot)};
}

struct WaveRun {
  double u_err;
  double v_rms;
};

WaveRun wave_run(const MeshedModel& model, double rho) {
  const double dt = cfl_to_dt(20.0, model.wave_speed, model.element_size);
  const std::size_t n = covering_steps(1.0, dt);
  const auto h = integrate(model.system, config(2, rho, dt, n), model.u0, model.v0,
                           {{model.probes.front()}, 1});
  double err = 0.0, scale = 0.0;
  std::vector<double> dv;
  for (std::size_t i = 1; i < h.size(); ++i) {
    const auto [u, v] = scalar_wave_reference(0.5, 0.5, h[i].t);
    err = std::max(err, std::abs(h[i].u[0] - u));
    scale = std::max(scale, std::abs(u));
    dv.push_back(h[i].v[0] - v);
  }
  return {err / scale, rms(dv)};
}

Outcome scalar_wave() {
  const auto model = build_scalar_wave(64);
  const WaveRun damped = wave_run(model, 0.8);
  const WaveRun full = wave_run(model, 1.0);
  const bool ok = damped.u_err <= 0.02 && damped.v_rms < full.v_rms;
  return {ok, fmt::format("u rel Linf {:.3g}, v rms {:.3g} vs {:.3g} at rho=1", damped.u_err,
                          damped.v_rms, full.v_rms)};
}

Outcome load_coefficients() {
  std::mt19937 rng(11);
  const int n = 3;
  const Mat m = oracle::random_spd(n, rng);
  const Mat c = 0.1 * oracle::random_spd(n, rng);
  const Mat k = oracle::random_spd(n, rng, 0.5);
  // Extended precision keeps the cancellation in the A^-1 recursion out of
  // the comparison.
  const oracle::MatT<long double> a = oracle::state_matrix(m, c, k, 0.7).cast<long double>();
  double worst = 0.0;
  for (int order = 1; order <= 4; ++order) {
    for (double rho : {0.0, 0.5, 1.0}) {
      const MixedPadeScheme s(order, rho);
      const auto want = oracle::load_matrices(s.numerator(), s.denominator(), a, s.load_order());
      for (int j = 0; j <= s.load_order(); ++j) {
        const auto idx = static_cast<std::size_t>(j);
        const auto got = oracle::matrix_poly(s.load_polynomials()[idx], a);
        worst = std::max(worst,
                         static_cast<double>((got - want[idx]).norm() / want[idx].norm()));
      }
    }
  }
  return {worst <= 1e-10, fmt::format("max rel Frobenius error {:.3g}", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"alpha to rho_inf map", alpha_map},
      {"diagonal family has |R| = 1", diagonal_unit_modulus},
      {"high-frequency limit", high_frequency_limit},
      {"HHT high-frequency limit", hht_limit},
      {"convergence order", convergence_orders},
      {"modal equivalence", modal_equivalence},
      {"three-DOF benchmark", three_dof},
      {"rod midpoint velocity", rod},
      {"bi-material rod interface", bimaterial},
      {"scalar wave centre", scalar_wave},
      {"load coefficient matrices", load_coefficients},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) {
      o.detail.pop_back();
    }
    std::printf("%s %zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

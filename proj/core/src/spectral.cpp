#include "mixpade/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mixpade/errors.hpp"

namespace mixpade {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// arg() with a signed-zero imaginary part treated as +0.
double principal_arg(std::complex<double> r) {
  if (r.imag() == 0.0) r.imag(0.0);
  return std::arg(r);
}

void check_alpha(double alpha) {
  if (!(alpha >= -1.0 / 3.0 - 1e-15 && alpha <= 0.0)) {
    throw ParameterError("HHT alpha=" + std::to_string(alpha) + " outside [-1/3, 0]");
  }
}

void check_x(double x) {
  if (!(x >= 0.0)) throw ParameterError("x = dt/T must be >= 0");
}

SpectralCurvePoint make_point(double x, std::complex<double> r, double phase) {
  SpectralCurvePoint p;
  p.x = x;
  p.rho = std::abs(r);
  if (x == 0.0) {
    p.phase = kNaN;
    p.period_error = 0.0;
    p.damping_ratio = 0.0;
    return p;
  }
  p.phase = phase;
  p.period_error = kTwoPi * x / phase - 1.0;
  p.damping_ratio = -std::log(p.rho) / phase;
  return p;
}

}  // namespace

double spectral_radius(const MixedPadeScheme& scheme, double x) {
  return std::abs(amplification_factor(scheme, x));
}

double shifted_phase(std::complex<double> r, double x) {
  if (r == 0.0) throw NumericalError("phase of a zero amplification factor is undefined");
  const double a = principal_arg(r);
  if (r.imag() < 0.0) return a + kTwoPi;
  if (x > 1.0) return a + kTwoPi;
  return a;
}

double hht_shifted_phase(std::complex<double> r, double x) {
  if (r == 0.0) throw NumericalError("phase of a zero amplification factor is undefined");
  const double a = principal_arg(r);
  if (r.imag() < 0.0) return a + kTwoPi;
  if (x > 1.0) return kNaN;
  return a;
}

double period_error(const MixedPadeScheme& scheme, double x) {
  if (!(x > 0.0)) throw ParameterError("period_error needs x > 0");
  const double ph = shifted_phase(amplification_factor(scheme, x), x);
  if (ph == 0.0) throw NumericalError("period_error: zero phase");
  return kTwoPi * x / ph - 1.0;
}

double damping_ratio(const MixedPadeScheme& scheme, double x) {
  if (!(x > 0.0)) throw ParameterError("damping_ratio needs x > 0");
  const auto r = amplification_factor(scheme, x);
  const double ph = shifted_phase(r, x);
  if (ph == 0.0) throw NumericalError("damping_ratio: zero phase");
  return -std::log(std::abs(r)) / ph;
}

double amplitude_ratio(const MixedPadeScheme& scheme, double x, double n_periods) {
  if (!(x > 0.0)) throw ParameterError("amplitude_ratio needs x > 0");
  return std::pow(spectral_radius(scheme, x), n_periods / x);
}

std::complex<double> hht_amplification(double alpha, double x) {
  check_alpha(alpha);
  check_x(x);
  const double b = (1.0 - alpha) * (1.0 - alpha) / 4.0;
  const double g = 0.5 - alpha;
  const double o = kTwoPi * x;
  const double o2 = o * o;
  const double d = 1.0 + (1.0 + alpha) * b * o2;
  const double a1 = 1.0 - o2 * ((1.0 + alpha) * (g + 0.5) - alpha * b) / (2.0 * d);
  const double a2 = 1.0 - o2 * (g - 0.5 + 2.0 * alpha * (g - b)) / d;
  const double a3 = alpha * o2 * (b - g + 0.5) / d;

  const auto roots = polynomial_roots(Polynomial({-a3, a2, -2.0 * a1, 1.0}));
  std::complex<double> best = roots.front();
  for (const auto& r : roots) {
    const double mag = std::abs(r);
    const double best_mag = std::abs(best);
    if (mag > best_mag * (1.0 + 1e-12) ||
        (std::abs(mag - best_mag) <= 1e-12 * best_mag && std::abs(r.imag()) > std::abs(best.imag()))) {
      best = r;
    }
  }
  return {best.real(), std::abs(best.imag())};
}

double hht_period_error(double alpha, double x) {
  if (!(x > 0.0)) throw ParameterError("hht_period_error needs x > 0");
  return kTwoPi * x / hht_shifted_phase(hht_amplification(alpha, x), x) - 1.0;
}

double hht_damping_ratio(double alpha, double x) {
  if (!(x > 0.0)) throw ParameterError("hht_damping_ratio needs x > 0");
  const auto r = hht_amplification(alpha, x);
  return -std::log(std::abs(r)) / hht_shifted_phase(r, x);
}

double hht_amplitude_ratio(double alpha, double x, double n_periods) {
  if (!(x > 0.0)) throw ParameterError("hht_amplitude_ratio needs x > 0");
  return std::pow(std::abs(hht_amplification(alpha, x)), n_periods / x);
}

double alpha_to_rho_infty(double alpha) {
  if (alpha == 1.0) throw ParameterError("alpha_to_rho_infty: alpha = 1 is singular");
  return (1.0 + alpha) / (1.0 - alpha);
}

double rho_infty_to_alpha(double rho_inf) {
  if (rho_inf == -1.0) throw ParameterError("rho_infty_to_alpha: rho = -1 is singular");
  return (rho_inf - 1.0) / (rho_inf + 1.0);
}

std::vector<double> log_grid(double x_min, double x_max, int points) {
  if (!(x_min > 0.0) || !(x_max >= x_min) || !std::isfinite(x_max)) {
    throw ParameterError("log_grid needs 0 < x_min <= x_max");
  }
  if (points < 1) throw ParameterError("log_grid needs at least one point");
  std::vector<double> x(static_cast<std::size_t>(points));
  if (points == 1) {
    x[0] = x_min;
    return x;
  }
  const double l0 = std::log10(x_min);
  const double l1 = std::log10(x_max);
  for (int i = 0; i < points; ++i) {
    x[i] = std::pow(10.0, l0 + (l1 - l0) * i / (points - 1));
  }
  x.front() = x_min;
  x.back() = x_max;
  return x;
}

std::vector<SpectralCurvePoint> sweep(const MixedPadeScheme& scheme, const std::vector<double>& x) {
  std::vector<SpectralCurvePoint> out;
  out.reserve(x.size());
  for (double xi : x) {
    check_x(xi);
    const auto r = amplification_factor(scheme, xi);
    out.push_back(make_point(xi, r, xi == 0.0 ? 0.0 : shifted_phase(r, xi)));
  }
  return out;
}

std::vector<SpectralCurvePoint> sweep_hht(double alpha, const std::vector<double>& x) {
  std::vector<SpectralCurvePoint> out;
  out.reserve(x.size());
  for (double xi : x) {
    check_x(xi);
    const auto r = hht_amplification(alpha, xi);
    out.push_back(make_point(xi, r, xi == 0.0 ? 0.0 : hht_shifted_phase(r, xi)));
  }
  return out;
}

}  // namespace mixpade

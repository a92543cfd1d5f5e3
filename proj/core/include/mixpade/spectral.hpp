#pragma once

#include <complex>
#include <vector>

#include "mixpade/pade.hpp"

namespace mixpade {

/// One row of a dissipation/dispersion sweep. Undefined quantities are NaN.
struct SpectralCurvePoint {
  double x = 0.0;  // dt / T
  double rho = 1.0;
  double phase = 0.0;
  double period_error = 0.0;
  double damping_ratio = 0.0;
};

double spectral_radius(const MixedPadeScheme& scheme, double x);

/// arg(R), shifted by 2 pi when Im(R) < 0 or x > 1.
double shifted_phase(std::complex<double> r, double x);

/// HHT variant: arg(R) shifted by 2 pi when Im(R) < 0; NaN when x > 1.
double hht_shifted_phase(std::complex<double> r, double x);

/// 2 pi x / phase - 1
double period_error(const MixedPadeScheme& scheme, double x);

/// -ln(rho) / phase
double damping_ratio(const MixedPadeScheme& scheme, double x);

/// rho^(n_periods / x)
double amplitude_ratio(const MixedPadeScheme& scheme, double x, double n_periods);

/// Dominant root of the HHT-alpha characteristic cubic
/// t^3 - 2 A1 t^2 + A2 t - A3, returned as (Re, |Im|).
std::complex<double> hht_amplification(double alpha, double x);

double hht_period_error(double alpha, double x);
double hht_damping_ratio(double alpha, double x);
/// rho^(n_periods / x), the same exponent as for the Pade scheme.
double hht_amplitude_ratio(double alpha, double x, double n_periods);

/// (1 + alpha) / (1 - alpha)
double alpha_to_rho_infty(double alpha);
/// Inverse of alpha_to_rho_infty: (rho - 1) / (rho + 1).
double rho_infty_to_alpha(double rho_inf);

/// `points` values from x_min to x_max, equally spaced in log10.
std::vector<double> log_grid(double x_min, double x_max, int points);

std::vector<SpectralCurvePoint> sweep(const MixedPadeScheme& scheme, const std::vector<double>& x);
std::vector<SpectralCurvePoint> sweep_hht(double alpha, const std::vector<double>& x);

}  // namespace mixpade

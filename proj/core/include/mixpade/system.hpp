#pragma once

#include <functional>
#include <vector>

#include "mixpade/linear_kernel.hpp"
#include "mixpade/pade.hpp"

namespace mixpade {

/// f(t) = sum_j b_j g_j(t).
class LoadModel {
 public:
  using TimeFunction = std::function<double(double)>;

  struct Term {
    Vec spatial;
    TimeFunction time;
  };

  LoadModel() = default;
  explicit LoadModel(Eigen::Index n_dof) : n_dof_(n_dof) {}

  Eigen::Index size() const noexcept { return n_dof_; }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::vector<double>& discontinuities() const noexcept { return jumps_; }

  LoadModel& add(Vec spatial, TimeFunction time);
  /// Declares a time at which some g_j jumps; steps must not straddle it.
  LoadModel& add_discontinuity(double t);

  Vec operator()(double t) const;

 private:
  Eigen::Index n_dof_ = 0;
  std::vector<Term> terms_;
  std::vector<double> jumps_;
};

/// b * H(t) with H(0) = 1.
LoadModel step_load(Vec spatial);
/// b * sin(omega t)
LoadModel sine_load(Vec spatial, double omega);

/// M u'' + C u' + K u = f(t). An empty C means no damping.
class StructuralSystem {
 public:
  StructuralSystem(Mat m, Mat c, Mat k, LoadModel load);

  Eigen::Index size() const noexcept { return m_.rows(); }
  const Mat& mass() const noexcept { return m_; }
  const Mat& damping() const noexcept { return c_; }
  const Mat& stiffness() const noexcept { return k_; }
  const LoadModel& load() const noexcept { return load_; }
  bool damped() const noexcept { return c_.size() != 0; }
  const Factorization& mass_factor() const noexcept { return mass_factor_; }

  /// Acceleration from M a = f(t) - C v - K u.
  Vec acceleration(double t, const Vec& u, const Vec& v) const;

 private:
  Mat m_;
  Mat c_;
  Mat k_;
  LoadModel load_;
  Factorization mass_factor_;
};

/// 1/2 v'Mv + 1/2 u'Ku - f'u. With f the constant load this is measured
/// from the static equilibrium and is conserved by the undamped motion.
double total_energy(const StructuralSystem& sys, const Vec& u, const Vec& v,
                    const Vec& f_const = Vec());

struct State {
  double t = 0.0;
  Vec u;
  Vec v;
};

/// A z with z = [dt v; u]:
///   [-dt M^-1 C z1 - dt^2 M^-1 K z2 ; z1]
Vec apply_state_operator(const StructuralSystem& sys, double dt, const Vec& z);

/// sum_i p_i A^i z by Horner's rule.
Vec poly_apply(const Polynomial& p, const StructuralSystem& sys, double dt, const Vec& z);

/// Coefficients f_0..f_pf of f(t_start + s dt) ~ sum_k f_k (s - 1/2)^k,
/// interpolated at the first-kind Chebyshev points of s in [0, 1].
/// Throws StepAlignmentError when a declared discontinuity lies strictly
/// inside the step.
std::vector<Vec> force_coeffs(const LoadModel& load, double t_start, double dt, int p_f);

/// Same fit applied to each time function alone: entry (j, k) is the
/// coefficient of (s - 1/2)^k for term j.
Mat load_time_coeffs(const LoadModel& load, double t_start, double dt, int p_f);

}  // namespace mixpade

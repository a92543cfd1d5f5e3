#include "mixpade/system.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mixpade/errors.hpp"

namespace mixpade {

LoadModel& LoadModel::add(Vec spatial, TimeFunction time) {
  if (n_dof_ == 0) n_dof_ = spatial.size();
  if (spatial.size() != n_dof_) {
    throw DimensionError("load term has " + std::to_string(spatial.size()) + " entries, expected " +
                         std::to_string(n_dof_));
  }
  if (!time) throw ParameterError("load term needs a time function");
  terms_.push_back({std::move(spatial), std::move(time)});
  return *this;
}

LoadModel& LoadModel::add_discontinuity(double t) {
  jumps_.push_back(t);
  return *this;
}

Vec LoadModel::operator()(double t) const {
  Vec f = Vec::Zero(n_dof_);
  for (const auto& term : terms_) f += term.time(t) * term.spatial;
  return f;
}

LoadModel step_load(Vec spatial) {
  LoadModel load(spatial.size());
  load.add(std::move(spatial), [](double t) { return t >= 0.0 ? 1.0 : 0.0; });
  load.add_discontinuity(0.0);
  return load;
}

LoadModel sine_load(Vec spatial, double omega) {
  LoadModel load(spatial.size());
  load.add(std::move(spatial), [omega](double t) { return std::sin(omega * t); });
  return load;
}

StructuralSystem::StructuralSystem(Mat m, Mat c, Mat k, LoadModel load)
    : m_(std::move(m)), c_(std::move(c)), k_(std::move(k)), load_(std::move(load)) {
  const auto n = m_.rows();
  if (m_.cols() != n || k_.rows() != n || k_.cols() != n) {
    throw DimensionError("M and K must be square and of equal size");
  }
  if (c_.size() != 0 && (c_.rows() != n || c_.cols() != n)) {
    throw DimensionError("C must be empty or match M");
  }
  if (load_.size() == 0) load_ = LoadModel(n);
  if (load_.size() != n) throw DimensionError("load vector size does not match the system");
  mass_factor_ = factor(m_, Structure::spd);
}

Vec StructuralSystem::acceleration(double t, const Vec& u, const Vec& v) const {
  Vec rhs = load_(t) - k_ * u;
  if (damped()) rhs -= c_ * v;
  return mass_factor_.solve(rhs);
}

double total_energy(const StructuralSystem& sys, const Vec& u, const Vec& v, const Vec& f_const) {
  double e = 0.5 * v.dot(sys.mass() * v) + 0.5 * u.dot(sys.stiffness() * u);
  if (f_const.size() != 0) e -= f_const.dot(u);
  return e;
}

Vec apply_state_operator(const StructuralSystem& sys, double dt, const Vec& z) {
  const auto n = sys.size();
  if (z.size() != 2 * n) {
    throw DimensionError("state vector has length " + std::to_string(z.size()) + ", expected " +
                         std::to_string(2 * n));
  }
  const auto z1 = z.head(n);
  const auto z2 = z.tail(n);
  Vec rhs = -(dt * dt) * (sys.stiffness() * z2);
  if (sys.damped()) rhs.noalias() -= dt * (sys.damping() * z1);
  Vec out(2 * n);
  out.head(n) = sys.mass_factor().solve(rhs);
  out.tail(n) = z1;
  return out;
}

Vec poly_apply(const Polynomial& p, const StructuralSystem& sys, double dt, const Vec& z) {
  const int deg = p.degree();
  Vec acc = p[deg] * z;
  for (int i = deg - 1; i >= 0; --i) acc = apply_state_operator(sys, dt, acc) + p[i] * z;
  return acc;
}

Mat load_time_coeffs(const LoadModel& load, double t_start, double dt, int p_f) {
  if (p_f < 0) throw ParameterError("force_coeffs: p_f must be >= 0");
  if (!(dt > 0.0)) throw ParameterError("force_coeffs: dt must be positive");
  const double t_end = t_start + dt;
  // Boundary tolerance relative to the step size.
  const double slack = 1e-9 * dt;
  for (double tj : load.discontinuities()) {
    if (tj > t_start + slack && tj < t_end - slack) {
      throw StepAlignmentError("load discontinuity at t=" + std::to_string(tj) +
                               " falls inside step [" + std::to_string(t_start) + ", " +
                               std::to_string(t_end) + "]");
    }
  }

  const int m = p_f + 1;
  const auto n_terms = static_cast<Eigen::Index>(load.terms().size());
  Mat coeffs = Mat::Zero(n_terms, m);
  if (n_terms == 0) return coeffs;

  Mat vander(m, m);
  Vec s(m);
  for (int j = 0; j < m; ++j) {
    s[j] = 0.5 - 0.5 * std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
    double pw = 1.0;
    for (int k = 0; k < m; ++k) {
      vander(j, k) = pw;
      pw *= s[j] - 0.5;
    }
  }
  Mat samples(m, n_terms);
  for (Eigen::Index t = 0; t < n_terms; ++t) {
    const auto& g = load.terms()[static_cast<std::size_t>(t)].time;
    for (int j = 0; j < m; ++j) samples(j, t) = g(t_start + s[j] * dt);
  }
  coeffs = vander.partialPivLu().solve(samples).transpose();
  return coeffs;
}

std::vector<Vec> force_coeffs(const LoadModel& load, double t_start, double dt, int p_f) {
  const Mat a = load_time_coeffs(load, t_start, dt, p_f);
  std::vector<Vec> out(static_cast<std::size_t>(p_f) + 1, Vec::Zero(load.size()));
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const Vec& b = load.terms()[static_cast<std::size_t>(j)].spatial;
    for (int k = 0; k <= p_f; ++k) out[k] += a(j, k) * b;
  }
  return out;
}

}  // namespace mixpade

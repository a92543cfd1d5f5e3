#include <cmath>
#include <string>

#include "mixpade/errors.hpp"
#include "mixpade/stepper.hpp"

namespace mixpade {

HhtStepper::HhtStepper(const StructuralSystem& sys, double alpha, double dt)
    : sys_(&sys), alpha_(alpha), dt_(dt) {
  if (!(alpha >= -1.0 / 3.0 - 1e-15 && alpha <= 0.0)) {
    throw ParameterError("HHT alpha=" + std::to_string(alpha) + " outside [-1/3, 0]");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive and finite");
  beta_ = (1.0 - alpha) * (1.0 - alpha) / 4.0;
  gamma_ = 0.5 - alpha;
  Mat eff = sys.mass() + ((1.0 + alpha) * beta_ * dt * dt) * sys.stiffness();
  if (sys.damped()) eff += ((1.0 + alpha) * gamma_ * dt) * sys.damping();
  effective_ = factor(eff, Structure::spd);
}

HistoryRecord HhtStepper::start(const Vec& u0, const Vec& v0) const {
  if (u0.size() != sys_->size() || v0.size() != sys_->size()) {
    throw DimensionError("initial state size does not match the system");
  }
  return {0.0, u0, v0, sys_->acceleration(0.0, u0, v0)};
}

HistoryRecord HhtStepper::step(const HistoryRecord& prev) const {
  const StructuralSystem& sys = *sys_;
  const double dt = dt_;
  const double a1 = 1.0 + alpha_;
  const double t_next = prev.t + dt;

  const Vec u_pred = prev.u + dt * prev.v + (dt * dt * (0.5 - beta_)) * prev.a;
  const Vec v_pred = prev.v + (dt * (1.0 - gamma_)) * prev.a;

  Vec rhs = a1 * sys.load()(t_next) - alpha_ * sys.load()(prev.t);
  rhs -= sys.stiffness() * (a1 * u_pred - alpha_ * prev.u);
  if (sys.damped()) rhs -= sys.damping() * (a1 * v_pred - alpha_ * prev.v);

  HistoryRecord next;
  next.t = t_next;
  next.a = effective_.solve(rhs);
  next.u = u_pred + (beta_ * dt * dt) * next.a;
  next.v = v_pred + (gamma_ * dt) * next.a;
  return next;
}

History hht_integrate(const StructuralSystem& sys, double alpha, double dt, std::size_t n_steps,
                      const Vec& u0, const Vec& v0, const RecordOptions& rec) {
  if (rec.every == 0) throw ParameterError("record interval must be >= 1");
  const HhtStepper stepper(sys, alpha, dt);
  auto select = [&](const HistoryRecord& r) {
    if (rec.probes.empty()) return r;
    const auto np = static_cast<Eigen::Index>(rec.probes.size());
    HistoryRecord out{r.t, Vec(np), Vec(np), Vec(np)};
    for (Eigen::Index i = 0; i < np; ++i) {
      const auto d = rec.probes[static_cast<std::size_t>(i)];
      if (d < 0 || d >= sys.size()) throw DimensionError("probe index out of range");
      out.u[i] = r.u[d];
      out.v[i] = r.v[d];
      out.a[i] = r.a[d];
    }
    return out;
  };

  History out;
  out.reserve(n_steps / rec.every + 2);
  HistoryRecord cur = stepper.start(u0, v0);
  out.push_back(select(cur));
  for (std::size_t i = 1; i <= n_steps; ++i) {
    cur = stepper.step(cur);
    cur.t = static_cast<double>(i) * dt;
    if (!cur.u.allFinite() || !cur.v.allFinite()) {
      throw DivergenceError("state became non-finite", i);
    }
    if (i % rec.every == 0 || i == n_steps) out.push_back(select(cur));
  }
  return out;
}

}  // namespace mixpade

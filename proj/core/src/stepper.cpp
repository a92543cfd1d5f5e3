#include "mixpade/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "mixpade/errors.hpp"

namespace mixpade {

namespace {

std::string root_label(std::complex<double> r) {
  std::ostringstream os;
  os.precision(12);
  os << r.real();
  if (r.imag() != 0.0) os << (r.imag() > 0 ? "+" : "-") << std::abs(r.imag()) << "i";
  return os.str();
}

HistoryRecord make_record(double t, const Vec& u, const Vec& v, const Vec& a,
                          const RecordOptions& rec) {
  if (rec.probes.empty()) return {t, u, v, a};
  const auto np = static_cast<Eigen::Index>(rec.probes.size());
  HistoryRecord out{t, Vec(np), Vec(np), Vec(np)};
  for (Eigen::Index i = 0; i < np; ++i) {
    const auto d = rec.probes[static_cast<std::size_t>(i)];
    out.u[i] = u[d];
    out.v[i] = v[d];
    out.a[i] = a[d];
  }
  return out;
}

void check_probes(const RecordOptions& rec, Eigen::Index n) {
  for (auto p : rec.probes) {
    if (p < 0 || p >= n) throw DimensionError("probe index " + std::to_string(p) + " out of range");
  }
  if (rec.every == 0) throw ParameterError("record interval must be >= 1");
}

bool keep(std::size_t step, std::size_t n_steps, const RecordOptions& rec) {
  return step % rec.every == 0 || step == n_steps;
}

void check_initial(const StructuralSystem& sys, const Vec& u0, const Vec& v0) {
  if (u0.size() != sys.size() || v0.size() != sys.size()) {
    throw DimensionError("initial state size does not match the system");
  }
}

}  // namespace

std::size_t covering_steps(double duration, double dt) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ParameterError("duration must be positive and finite");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive and finite");
  const double ratio = duration / dt;
  const double nearest = std::round(ratio);
  const double n = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
  return static_cast<std::size_t>(std::max(n, 1.0));
}

std::pair<std::size_t, double> align_steps(double duration, double dt) {
  const std::size_t n = covering_steps(duration, dt);
  return {n, duration / static_cast<double>(n)};
}

StepperPlan::StepperPlan(const StructuralSystem& sys, const StepperConfig& cfg)
    : sys_(&sys), scheme_(cfg.order, cfg.rho_inf, cfg.load_order), dt_(cfg.dt) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ParameterError("dt must be positive and finite");
  const Mat& m = sys.mass();
  const Mat& k = sys.stiffness();
  const double dt2 = dt_ * dt_;

  for (const auto& f : scheme_.factors()) {
    const std::complex<double> r = f.root;
    try {
      if (f.conjugate_pair) {
        CMat s = (r * r) * m.cast<std::complex<double>>();
        s += dt2 * k.cast<std::complex<double>>();
        if (sys.damped()) s += (r * dt_) * sys.damping().cast<std::complex<double>>();
        shifted_.push_back({f, factor(s)});
      } else {
        const double rr = r.real();
        Mat s = (rr * rr) * m + dt2 * k;
        if (sys.damped()) s += (rr * dt_) * sys.damping();
        shifted_.push_back({f, factor(s, Structure::spd)});
      }
    } catch (const FactorizationError& e) {
      throw PlanError("cannot factor shifted system at root " + root_label(r) + ": " + e.what());
    }
  }

  for (const auto& term : sys.load().terms()) {
    minv_loads_.push_back(sys.mass_factor().solve(term.spatial));
  }
}

std::size_t StepperPlan::complex_factorizations() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      shifted_.begin(), shifted_.end(), [](const auto& s) { return s.factor.conjugate_pair; }));
}

std::size_t StepperPlan::real_factorizations() const noexcept {
  return shifted_.size() - complex_factorizations();
}

namespace {

// Top blocks of Phi_k = [dt^2 M^-1 f_k ; 0] for the step starting at t_prev.
std::vector<Vec> load_blocks(const StepperPlan& plan, double t_prev) {
  const StructuralSystem& sys = plan.system();
  std::vector<Vec> phi;
  if (sys.load().empty()) return phi;
  const double dt = plan.dt();
  const auto& c = plan.scheme().load_polynomials();
  const Mat a = load_time_coeffs(sys.load(), t_prev, dt, plan.scheme().load_order());
  const auto& minv = plan.mass_solved_loads();
  phi.assign(c.size(), Vec::Zero(sys.size()));
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t j = 0; j < minv.size(); ++j) {
      phi[k] += (dt * dt * a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))) * minv[j];
    }
  }
  return phi;
}

// sum_i A^i w_i with w_i = s_i z + sum_k c_{k,i} Phi_k, where s_i is the
// coefficient of x^i in `state_poly`. One Horner pass.
Vec horner_rhs(const StepperPlan& plan, const Polynomial& state_poly, const Vec& z,
               const std::vector<Vec>& phi) {
  const StructuralSystem& sys = plan.system();
  const auto n = sys.size();
  const auto& c = plan.scheme().load_polynomials();
  int deg = state_poly.degree();
  for (std::size_t k = 0; k < phi.size(); ++k) deg = std::max(deg, c[k].degree());

  auto w = [&](int i) {
    Vec out = (i <= state_poly.degree() ? state_poly[i] : 0.0) * z;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      if (i <= c[k].degree() && c[k][i] != 0.0) out.head(n) += c[k][i] * phi[k];
    }
    return out;
  };
  Vec acc = w(deg);
  for (int i = deg - 1; i >= 0; --i) acc = apply_state_operator(sys, plan.dt(), acc) + w(i);
  return acc;
}

}  // namespace

Vec build_rhs(const StepperPlan& plan, const Vec& z_prev, double t_prev) {
  if (z_prev.size() != 2 * plan.system().size()) {
    throw DimensionError("build_rhs: state vector size mismatch");
  }
  return horner_rhs(plan, plan.scheme().numerator(), z_prev, load_blocks(plan, t_prev));
}

Vec build_increment_rhs(const StepperPlan& plan, const Vec& z_prev, double t_prev) {
  if (z_prev.size() != 2 * plan.system().size()) {
    throw DimensionError("build_increment_rhs: state vector size mismatch");
  }
  // P - Q = x C_0, so the state polynomial is x C_0(x).
  const Polynomial& c0 = plan.scheme().load_polynomials().front();
  std::vector<double> shifted(c0.coeffs.size() + 1, 0.0);
  std::copy(c0.coeffs.begin(), c0.coeffs.end(), shifted.begin() + 1);
  return horner_rhs(plan, Polynomial(std::move(shifted)), z_prev, load_blocks(plan, t_prev));
}

Vec solve_real_root(const StepperPlan& plan, std::size_t index, const Vec& g) {
  const auto& entry = plan.shifted().at(index);
  if (entry.factor.conjugate_pair) throw ParameterError("solve_real_root: factor is complex");
  const StructuralSystem& sys = plan.system();
  const auto n = sys.size();
  if (g.size() != 2 * n) throw DimensionError("solve_real_root: vector size mismatch");
  const double r = entry.factor.root.real();
  const double dt = plan.dt();

  const auto g1 = g.head(n);
  const auto g2 = g.tail(n);
  const Vec rhs = r * (sys.mass() * g1) - (dt * dt) * (sys.stiffness() * g2);
  Vec x(2 * n);
  x.head(n) = entry.solver.solve(rhs);
  x.tail(n) = (x.head(n) + g2) / r;
  return x;
}

Vec solve_conjugate_pair(const StepperPlan& plan, std::size_t index, const Vec& g) {
  const auto& entry = plan.shifted().at(index);
  if (!entry.factor.conjugate_pair) throw ParameterError("solve_conjugate_pair: factor is real");
  const StructuralSystem& sys = plan.system();
  const auto n = sys.size();
  if (g.size() != 2 * n) throw DimensionError("solve_conjugate_pair: vector size mismatch");
  const std::complex<double> r = entry.factor.root;
  if (std::abs(r.imag()) < 1e-10 * std::abs(r)) {
    throw NumericalError("solve_conjugate_pair: root is numerically real");
  }
  const double dt = plan.dt();

  const auto g1 = g.head(n);
  const auto g2 = g.tail(n);
  const Vec mg1 = sys.mass() * g1;
  const Vec kg2 = (dt * dt) * (sys.stiffness() * g2);
  CVec rhs = r * mg1.cast<std::complex<double>>();
  rhs -= kg2.cast<std::complex<double>>();
  const CVec y1 = entry.solver.solve_complex(rhs);
  const CVec y2 = (y1 + g2.cast<std::complex<double>>()) / r;

  Vec x(2 * n);
  x.head(n) = -y1.imag() / r.imag();
  x.tail(n) = -y2.imag() / r.imag();
  return x;
}

StepIncrement step_increment(const StepperPlan& plan, const State& state) {
  const auto n = plan.system().size();
  if (state.u.size() != n || state.v.size() != n) {
    throw DimensionError("advance: state size does not match the system");
  }
  const double dt = plan.dt();
  Vec z(2 * n);
  z.head(n) = dt * state.v;
  z.tail(n) = state.u;

  Vec x = build_increment_rhs(plan, z, state.t);
  for (std::size_t i = 0; i < plan.shifted().size(); ++i) {
    x = plan.shifted()[i].factor.conjugate_pair ? solve_conjugate_pair(plan, i, x)
                                                : solve_real_root(plan, i, x);
  }
  return {x.tail(n), x.head(n) / dt};
}

State advance(const StepperPlan& plan, const State& state) {
  const StepIncrement d = step_increment(plan, state);
  return {state.t + plan.dt(), state.u + d.du, state.v + d.dv};
}

namespace {

// s += x keeping the rounding error of every addition in c (two-sum).
void compensated_add(Vec& s, Vec& c, const Vec& x) {
  const Vec t = s + x;
  const Vec z = t - s;
  c.array() += (s - (t - z)).array() + (x - z).array();
  s = t;
}

}  // namespace

History integrate(const StepperPlan& plan, std::size_t n_steps, const Vec& u0, const Vec& v0,
                  const RecordOptions& rec) {
  const StructuralSystem& sys = plan.system();
  check_initial(sys, u0, v0);
  check_probes(rec, sys.size());

  History out;
  out.reserve(n_steps / rec.every + 2);
  State s{0.0, u0, v0};
  // Running rounding error of s; the increments are small next to the
  // state, so plain accumulation would lose digits every step.
  Vec cu = Vec::Zero(sys.size());
  Vec cv = Vec::Zero(sys.size());
  out.push_back(make_record(0.0, s.u, s.v, sys.acceleration(0.0, s.u, s.v), rec));
  for (std::size_t i = 1; i <= n_steps; ++i) {
    const StepIncrement d = step_increment(plan, s);
    compensated_add(s.u, cu, d.du);
    compensated_add(s.v, cv, d.dv);
    // Recompute t from the index; repeated addition drifts.
    s.t = static_cast<double>(i) * plan.dt();
    if (!s.u.allFinite() || !s.v.allFinite()) {
      throw DivergenceError("state became non-finite", i);
    }
    if (keep(i, n_steps, rec)) {
      const Vec u = s.u + cu;
      const Vec v = s.v + cv;
      out.push_back(make_record(s.t, u, v, sys.acceleration(s.t, u, v), rec));
    }
  }
  return out;
}

History integrate(const StructuralSystem& sys, const StepperConfig& cfg, const Vec& u0,
                  const Vec& v0, const RecordOptions& rec) {
  const StepperPlan plan(sys, cfg);
  return integrate(plan, cfg.n_steps, u0, v0, rec);
}

}  // namespace mixpade

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mixpade/linear_kernel.hpp"
#include "mixpade/pade.hpp"
#include "mixpade/system.hpp"

namespace mixpade {

struct StepperConfig {
  int order = 2;          // M, in [1, 8]
  double rho_inf = 1.0;   // in [0, 1]
  double dt = 0.0;
  int load_order = -1;    // p_f; < 0 selects min(2M - 2, 4)
  std::size_t n_steps = 0;
};

/// Smallest number of steps of size dt reaching `duration`; a ratio within
/// 1e-9 of an integer is rounded.
std::size_t covering_steps(double duration, double dt);

/// covering_steps and the step size that makes them fit exactly. The step
/// is never enlarged.
std::pair<std::size_t, double> align_steps(double duration, double dt);

/// Factorizations for one (system, scheme, dt) triple. Holds a reference to
/// the system, which must outlive the plan.
class StepperPlan {
 public:
  /// One entry per RootFactor of the scheme, in the same order.
  struct ShiftedSystem {
    RootFactor factor;
    Factorization solver;  // of r^2 M + r dt C + dt^2 K
  };

  StepperPlan(const StructuralSystem& sys, const StepperConfig& cfg);

  const StructuralSystem& system() const noexcept { return *sys_; }
  const MixedPadeScheme& scheme() const noexcept { return scheme_; }
  double dt() const noexcept { return dt_; }
  const std::vector<ShiftedSystem>& shifted() const noexcept { return shifted_; }
  std::size_t complex_factorizations() const noexcept;
  std::size_t real_factorizations() const noexcept;

  /// M^-1 b_j for every load term.
  const std::vector<Vec>& mass_solved_loads() const noexcept { return minv_loads_; }

 private:
  const StructuralSystem* sys_;
  MixedPadeScheme scheme_;
  double dt_;
  std::vector<ShiftedSystem> shifted_;
  std::vector<Vec> minv_loads_;
};

/// P(A) z_prev + sum_k C_k(A) Phi_k with Phi_k = [dt^2 M^-1 f_k ; 0] and
/// f_k the expansion of the load over [t_prev, t_prev + dt].
Vec build_rhs(const StepperPlan& plan, const Vec& z_prev, double t_prev);

/// build_rhs minus Q(A) z_prev, i.e. Q(A) (z_n - z_prev). Evaluated as
/// A C_0(A) z_prev + sum_k C_k(A) Phi_k without forming P z_prev.
Vec build_increment_rhs(const StepperPlan& plan, const Vec& z_prev, double t_prev);

/// x = (r I - A)^-1 g for a real root r, using the factorization at
/// shifted()[index].
Vec solve_real_root(const StepperPlan& plan, std::size_t index, const Vec& g);

/// x = ((r I - A)(conj(r) I - A))^-1 g for the pair at shifted()[index].
Vec solve_conjugate_pair(const StepperPlan& plan, std::size_t index, const Vec& g);

struct StepIncrement {
  Vec du;
  Vec dv;
};

/// Change of (u, v) over one step: solves Q(A) (z_n - z_prev) = build_increment_rhs
/// one root factor at a time.
StepIncrement step_increment(const StepperPlan& plan, const State& state);

/// state advanced by step_increment.
State advance(const StepperPlan& plan, const State& state);

struct HistoryRecord {
  double t = 0.0;
  Vec u;
  Vec v;
  Vec a;
};

using History = std::vector<HistoryRecord>;

struct RecordOptions {
  /// DOF indices to keep; empty keeps the full vectors.
  std::vector<Eigen::Index> probes;
  /// Keep every n-th step. The initial and final states are always kept.
  std::size_t every = 1;
};

/// Runs cfg.n_steps steps from (u0, v0) at t = 0. The history starts with
/// the initial state. Increments are accumulated with compensated
/// summation. Throws DivergenceError on a non-finite state.
History integrate(const StructuralSystem& sys, const StepperConfig& cfg, const Vec& u0,
                  const Vec& v0, const RecordOptions& rec = {});

/// Continues an existing plan; same recording rules as above.
History integrate(const StepperPlan& plan, std::size_t n_steps, const Vec& u0, const Vec& v0,
                  const RecordOptions& rec = {});

/// HHT-alpha with beta = (1 - alpha)^2 / 4, gamma = 1/2 - alpha and the load
/// weighted as (1 + alpha) f_{n+1} - alpha f_n. alpha in [-1/3, 0].
class HhtStepper {
 public:
  HhtStepper(const StructuralSystem& sys, double alpha, double dt);

  double alpha() const noexcept { return alpha_; }
  double dt() const noexcept { return dt_; }

  /// Initial record with a_0 from the equation of motion.
  HistoryRecord start(const Vec& u0, const Vec& v0) const;
  HistoryRecord step(const HistoryRecord& prev) const;

 private:
  const StructuralSystem* sys_;
  double alpha_;
  double dt_;
  double beta_;
  double gamma_;
  Factorization effective_;
};

History hht_integrate(const StructuralSystem& sys, double alpha, double dt, std::size_t n_steps,
                      const Vec& u0, const Vec& v0, const RecordOptions& rec = {});

}  // namespace mixpade

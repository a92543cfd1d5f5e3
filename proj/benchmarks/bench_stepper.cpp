#include <benchmark/benchmark.h>

#include <algorithm>

#include "mixpade/problems.hpp"
#include "mixpade/stepper.hpp"

namespace {

using namespace mixpade;

// Rod sizes stay small enough that one plan builds in milliseconds.
void BM_PlanRod(benchmark::State& state) {
  const auto model = build_rod(static_cast<int>(state.range(0)));
  const int order = static_cast<int>(state.range(1));
  StepperConfig cfg;
  cfg.order = order;
  cfg.rho_inf = 0.8;
  cfg.dt = cfl_to_dt(10.0, model.wave_speed, model.element_size);
  for (auto _ : state) {
    StepperPlan plan(model.system, cfg);
    benchmark::DoNotOptimize(plan.shifted().data());
  }
}
BENCHMARK(BM_PlanRod)->Args({200, 2})->Args({200, 3})->Args({400, 2})->Args({400, 4});

void BM_PadeStepRod(benchmark::State& state) {
  const auto model = build_rod(static_cast<int>(state.range(0)));
  StepperConfig cfg;
  cfg.order = static_cast<int>(state.range(1));
  cfg.rho_inf = 0.8;
  cfg.dt = cfl_to_dt(10.0, model.wave_speed, model.element_size);
  const StepperPlan plan(model.system, cfg);
  State s{0.0, model.u0, model.v0};
  for (auto _ : state) {
    s = advance(plan, s);
    benchmark::DoNotOptimize(s.u.data());
  }
}
BENCHMARK(BM_PadeStepRod)->Args({200, 1})->Args({200, 2})->Args({200, 3})->Args({200, 4});

void BM_HhtStepRod(benchmark::State& state) {
  const auto model = build_rod(static_cast<int>(state.range(0)));
  const double dt = cfl_to_dt(1.0, model.wave_speed, model.element_size);
  const HhtStepper hht(model.system, -0.1, dt);
  HistoryRecord r = hht.start(model.u0, model.v0);
  for (auto _ : state) {
    r = hht.step(r);
    benchmark::DoNotOptimize(r.u.data());
  }
}
BENCHMARK(BM_HhtStepRod)->Arg(200);

// Cost of covering one transit of the rod: a Pade run at CFL 10(M-1)
// against HHT at CFL 1, plans included.
void BM_RodTransit(benchmark::State& state) {
  const auto model = build_rod(200);
  const int order = static_cast<int>(state.range(0));
  const double transit = RodParams{}.length / model.wave_speed;
  for (auto _ : state) {
    if (order == 0) {
      const auto [n, dt] = align_steps(transit, cfl_to_dt(1.0, model.wave_speed, model.element_size));
      auto h = hht_integrate(model.system, -0.1, dt, n, model.u0, model.v0, {model.probes});
      benchmark::DoNotOptimize(h.back().v.data());
    } else {
      const double cfl = 10.0 * std::max(1, order - 1);
      const auto [n, dt] = align_steps(transit, cfl_to_dt(cfl, model.wave_speed, model.element_size));
      StepperConfig cfg{order, 0.8, dt, -1, n};
      auto h = integrate(model.system, cfg, model.u0, model.v0, {model.probes});
      benchmark::DoNotOptimize(h.back().v.data());
    }
  }
}
// Argument 0 is HHT-alpha; 1..4 is the Pade order M.
BENCHMARK(BM_RodTransit)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

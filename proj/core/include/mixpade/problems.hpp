#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mixpade/stepper.hpp"
#include "mixpade/system.hpp"

namespace mixpade {

/// A benchmark system with its initial state, probes and (optionally)
/// exact probe histories.
struct MeshedModel {
  MeshedModel(StructuralSystem sys, Mat node_coords, std::vector<Eigen::Index> probe_dofs,
              std::vector<std::string> names, Vec u_init, Vec v_init)
      : system(std::move(sys)),
        nodes(std::move(node_coords)),
        probes(std::move(probe_dofs)),
        probe_names(std::move(names)),
        u0(std::move(u_init)),
        v0(std::move(v_init)) {}

  StructuralSystem system;
  Mat nodes;  // one row per node (all nodes, including constrained ones)
  std::vector<Eigen::Index> probes;  // DOF indices
  std::vector<std::string> probe_names;
  Vec u0;
  Vec v0;
  double wave_speed = 0.0;    // speed used to convert CFL to dt
  double element_size = 0.0;  // element length used to convert CFL to dt
  /// Exact values at the probes; empty when not available.
  std::function<Vec(double)> reference_u;
  std::function<Vec(double)> reference_v;
};

/// dt = cfl * dx / c
double cfl_to_dt(double cfl, double wave_speed, double dx);

/// Single mass-spring(-damper) system with an optional time function load.
MeshedModel build_sdof(double m, double c, double k, double u0, double v0,
                       LoadModel::TimeFunction load = {});

// --- Two masses driven through a stiff spring by a prescribed displacement ---

struct ThreeDofParams {
  double k1 = 1e7;
  double k2 = 1.0;
  double m2 = 1.0;
  double m3 = 1.0;
  double omega_p = 1.2;
};

/// Reduced 2-DOF system for (u2, u3); the prescribed u1 = sin(omega_p t)
/// enters as the load k1 u1 on u2. Zero initial state.
MeshedModel build_three_dof(const ThreeDofParams& params = {});

/// Mode-superposition solution with the stiff mode reduced to its forced
/// (quasi-static) part. The soft mode keeps its full response for zero
/// initial conditions.
class ThreeDofReference {
 public:
  explicit ThreeDofReference(const ThreeDofParams& params = {});

  double omega(int mode) const { return omega_.at(static_cast<std::size_t>(mode)); }
  HistoryRecord at(double t) const;

 private:
  ThreeDofParams params_;
  std::vector<double> omega_;
  Mat phi_;
  Vec force_;  // modal load amplitudes
};

History three_dof_reference(const std::vector<double>& t_grid, const ThreeDofParams& params = {});

/// k1 (u1(t) - u2); the massless node contributes no inertia.
double reaction_force(const ThreeDofParams& params, double t, double u2);

// --- Fixed-free rods under an end step load ---

enum class Grading { uniform, sinusoidal };

struct RodParams {
  double length = 200.0;
  double youngs = 3e7;
  double density = 0.00073;
  double area = 1.0;
  double load = 1e4;
};

/// Node positions 0 = x_0 < ... < x_ne = l.
Vec rod_nodes(int n_elements, Grading grading, double length);

/// Linear bar elements with consistent mass; node 0 is fixed, the step
/// load acts on the last node. The probe is the node nearest to l/2.
/// element_size is the largest element, which sets the CFL number.
MeshedModel build_rod(int n_elements, Grading grading = Grading::uniform,
                      const RodParams& params = {});

/// Exact velocity of the continuum rod at x, from d'Alembert's solution
/// with reflections. Period 4 l / c.
double rod_reference_velocity(double x, double t, const RodParams& params = {});

/// Times in [0, t_max] at which a wavefront passes x.
std::vector<double> rod_wavefront_times(double x, double t_max, const RodParams& params = {});

struct BimaterialParams {
  double segment_length = 2.0;
  double c_left = 40.0 * 2.2360679774997896964;   // 40 sqrt(5)
  double c_right = 20.0 * 1.4142135623730950488;  // 20 sqrt(2)
  double density_left = 1.0;
  double density_right = 1.0;
  double load = 1.0;
};

/// Two uniform segments joined at x = segment_length; left end fixed,
/// step traction on the right end. The probe is the interface node.
/// wave_speed/element_size refer to the slower segment.
MeshedModel build_bimaterial_rod(int n_elements_per_segment, const BimaterialParams& params = {});

/// Exact interface velocity at each time in t (ascending), by tracing every
/// wavefront through reflections and transmissions.
std::vector<double> bimaterial_interface_velocity(const std::vector<double>& t,
                                                  const BimaterialParams& params = {});

// --- Scalar wave in a fixed square ---

struct ScalarWaveParams {
  double length = 1.0;
  double wave_speed = 1.0;
  double amplitude = 1.0;  // initial velocity inside the central patch
};

/// n x n bilinear quadrilaterals with consistent mass, all edges fixed.
/// DOF (i-1) + (j-1)(n-1) is the interior node at (i h, j h). The probe is
/// the node nearest the centre.
MeshedModel build_scalar_wave(int n_per_side, const ScalarWaveParams& params = {});

/// Partial sums of the separation-of-variables solution using all odd
/// m, n <= n_max. Returns (u, v).
std::pair<double, double> scalar_wave_reference(double x, double y, double t, int n_max = 199,
                                                const ScalarWaveParams& params = {});

}  // namespace mixpade

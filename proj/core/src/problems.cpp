#include "mixpade/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mixpade/errors.hpp"

namespace mixpade {

namespace {

constexpr double kPi = std::numbers::pi;

void assemble_bar(Mat& m, Mat& k, const Vec& x, const Vec& rho, const Vec& youngs, double area) {
  const auto ne = x.size() - 1;
  for (Eigen::Index e = 0; e < ne; ++e) {
    const double h = x[e + 1] - x[e];
    const double me = rho[e] * area * h / 6.0;
    const double ke = youngs[e] * area / h;
    m(e, e) += 2 * me;
    m(e, e + 1) += me;
    m(e + 1, e) += me;
    m(e + 1, e + 1) += 2 * me;
    k(e, e) += ke;
    k(e, e + 1) -= ke;
    k(e + 1, e) -= ke;
    k(e + 1, e + 1) += ke;
  }
}

Eigen::Index nearest(const Vec& x, double target) {
  Eigen::Index best = 0;
  (x.array() - target).abs().minCoeff(&best);
  return best;
}

}  // namespace

double cfl_to_dt(double cfl, double wave_speed, double dx) {
  if (!(cfl > 0.0) || !(wave_speed > 0.0) || !(dx > 0.0)) {
    throw ParameterError("cfl_to_dt needs positive cfl, wave speed and element size");
  }
  return cfl * dx / wave_speed;
}

MeshedModel build_sdof(double m, double c, double k, double u0, double v0,
                       LoadModel::TimeFunction load) {
  if (!(m > 0.0) || !(k >= 0.0) || !(c >= 0.0)) {
    throw ParameterError("sdof needs m > 0, c >= 0, k >= 0");
  }
  LoadModel lm(1);
  if (load) lm.add(Vec::Ones(1), std::move(load));
  Mat cm = c > 0.0 ? Mat::Constant(1, 1, c) : Mat();
  MeshedModel out(StructuralSystem(Mat::Constant(1, 1, m), cm, Mat::Constant(1, 1, k), lm),
                  Mat::Zero(1, 1),
                  {0},
                  {"x"},
                  Vec::Constant(1, u0),
                  Vec::Constant(1, v0));
  return out;
}

// --- three-DOF ---

MeshedModel build_three_dof(const ThreeDofParams& p) {
  Mat m(2, 2);
  m << p.m2, 0.0, 0.0, p.m3;
  Mat k(2, 2);
  k << p.k1 + p.k2, -p.k2, -p.k2, p.k2;
  Vec b(2);
  b << p.k1, 0.0;
  const double wp = p.omega_p;
  MeshedModel out(StructuralSystem(m, Mat(), k, sine_load(b, wp)),
                  (Mat(3, 1) << 0.0, 1.0, 2.0).finished(),
                  {0, 1},
                  {"u2", "u3"},
                  Vec::Zero(2),
                  Vec::Zero(2));
  const ThreeDofReference ref(p);
  out.reference_u = [ref](double t) { return ref.at(t).u; };
  out.reference_v = [ref](double t) { return ref.at(t).v; };
  return out;
}

ThreeDofReference::ThreeDofReference(const ThreeDofParams& params) : params_(params) {
  Mat m(2, 2);
  m << params.m2, 0.0, 0.0, params.m3;
  Mat k(2, 2);
  k << params.k1 + params.k2, -params.k2, -params.k2, params.k2;
  const auto eig = generalized_eig(k, m);
  omega_ = {std::sqrt(eig.omega_sq[0]), std::sqrt(eig.omega_sq[1])};
  phi_ = eig.vectors;
  Vec b(2);
  b << params.k1, 0.0;
  force_ = phi_.transpose() * b;
}

HistoryRecord ThreeDofReference::at(double t) const {
  const double wp = params_.omega_p;
  const double w1 = omega_[0];
  const double w2 = omega_[1];
  const double s = std::sin(wp * t);
  const double c = std::cos(wp * t);

  // Soft mode: forced plus free response, zero initial state.
  const double g1 = force_[0] / (w1 * w1 - wp * wp);
  const double q1 = g1 * (s - (wp / w1) * std::sin(w1 * t));
  const double dq1 = g1 * wp * (c - std::cos(w1 * t));
  const double ddq1 = g1 * (-wp * wp * s + wp * w1 * std::sin(w1 * t));

  // Stiff mode: forced part only.
  const double g2 = force_[1] / (w2 * w2 - wp * wp);
  const double q2 = g2 * s;
  const double dq2 = g2 * wp * c;
  const double ddq2 = -g2 * wp * wp * s;

  HistoryRecord r;
  r.t = t;
  r.u = phi_.col(0) * q1 + phi_.col(1) * q2;
  r.v = phi_.col(0) * dq1 + phi_.col(1) * dq2;
  r.a = phi_.col(0) * ddq1 + phi_.col(1) * ddq2;
  return r;
}

History three_dof_reference(const std::vector<double>& t_grid, const ThreeDofParams& params) {
  const ThreeDofReference ref(params);
  History out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw ParameterError("three_dof_reference needs t >= 0");
    out.push_back(ref.at(t));
  }
  return out;
}

double reaction_force(const ThreeDofParams& params, double t, double u2) {
  return params.k1 * (std::sin(params.omega_p * t) - u2);
}

// --- rods ---

Vec rod_nodes(int n_elements, Grading grading, double length) {
  if (n_elements < 2) throw ParameterError("rod needs at least 2 elements");
  if (!(length > 0.0)) throw ParameterError("rod length must be positive");
  Vec x(n_elements + 1);
  for (int i = 0; i <= n_elements; ++i) {
    const double s = static_cast<double>(i) / n_elements;
    if (grading == Grading::uniform) {
      x[i] = length * s;
    } else {
      const double w = std::sin(20.0 * kPi * s);
      x[i] = length * (s + 9.0 / (11.0 * 20.0 * kPi) * w * w);
    }
  }
  x[0] = 0.0;
  x[n_elements] = length;
  return x;
}

MeshedModel build_rod(int n_elements, Grading grading, const RodParams& p) {
  if (!(p.youngs > 0.0) || !(p.density > 0.0) || !(p.area > 0.0)) {
    throw ParameterError("rod material constants must be positive");
  }
  const Vec x = rod_nodes(n_elements, grading, p.length);
  const Eigen::Index nn = x.size();
  Mat m = Mat::Zero(nn, nn);
  Mat k = Mat::Zero(nn, nn);
  assemble_bar(m, k, x, Vec::Constant(nn - 1, p.density), Vec::Constant(nn - 1, p.youngs), p.area);

  const Eigen::Index n = nn - 1;
  Vec b = Vec::Zero(n);
  b[n - 1] = p.load * p.area;
  const Eigen::Index probe_node = nearest(x, 0.5 * p.length);

  Vec h = x.tail(n) - x.head(n);
  MeshedModel out(StructuralSystem(m.bottomRightCorner(n, n), Mat(), k.bottomRightCorner(n, n),
                                   step_load(b)),
                  x,
                  {probe_node - 1},
                  {"mid"},
                  Vec::Zero(n),
                  Vec::Zero(n));
  out.wave_speed = std::sqrt(p.youngs / p.density);
  out.element_size = grading == Grading::uniform ? p.length / n_elements : h.maxCoeff();
  const double xp = x[probe_node];
  out.reference_v = [xp, p](double t) { return Vec::Constant(1, rod_reference_velocity(xp, t, p)); };
  return out;
}

double rod_reference_velocity(double x, double t, const RodParams& p) {
  if (x < 0.0 || x > p.length) throw ParameterError("rod_reference_velocity needs 0 <= x <= l");
  if (t < 0.0) return 0.0;
  const double c = std::sqrt(p.youngs / p.density);
  const double l = p.length;
  const double v0 = p.load / (p.density * c);
  const double period = 4.0 * l / c;
  const double tau = std::fmod(t, period);
  if (tau >= (l - x) / c && tau < (l + x) / c) return v0;
  if (tau >= (3 * l - x) / c && tau < (3 * l + x) / c) return -v0;
  return 0.0;
}

std::vector<double> rod_wavefront_times(double x, double t_max, const RodParams& p) {
  const double c = std::sqrt(p.youngs / p.density);
  const double l = p.length;
  const double period = 4.0 * l / c;
  std::vector<double> out;
  for (double base = 0.0; base <= t_max; base += period) {
    for (double d : {l - x, l + x, 3 * l - x, 3 * l + x}) {
      const double t = base + d / c;
      if (t <= t_max) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MeshedModel build_bimaterial_rod(int n_per_segment, const BimaterialParams& p) {
  if (n_per_segment < 2) throw ParameterError("bi-material rod needs >= 2 elements per segment");
  if (!(p.c_left > 0.0) || !(p.c_right > 0.0) || !(p.density_left > 0.0) ||
      !(p.density_right > 0.0) || !(p.segment_length > 0.0)) {
    throw ParameterError("bi-material rod constants must be positive");
  }
  const int ne = 2 * n_per_segment;
  const double h = p.segment_length / n_per_segment;
  Vec x(ne + 1);
  for (int i = 0; i <= ne; ++i) x[i] = h * i;
  x[ne] = 2.0 * p.segment_length;

  Vec rho(ne);
  Vec youngs(ne);
  for (int e = 0; e < ne; ++e) {
    const bool left = e < n_per_segment;
    rho[e] = left ? p.density_left : p.density_right;
    const double c = left ? p.c_left : p.c_right;
    youngs[e] = rho[e] * c * c;
  }
  Mat m = Mat::Zero(ne + 1, ne + 1);
  Mat k = Mat::Zero(ne + 1, ne + 1);
  assemble_bar(m, k, x, rho, youngs, 1.0);

  const Eigen::Index n = ne;
  Vec b = Vec::Zero(n);
  b[n - 1] = p.load;
  MeshedModel out(StructuralSystem(m.bottomRightCorner(n, n), Mat(), k.bottomRightCorner(n, n),
                                   step_load(b)),
                  x,
                  {n_per_segment - 1},
                  {"interface"},
                  Vec::Zero(n),
                  Vec::Zero(n));
  out.wave_speed = std::min(p.c_left, p.c_right);
  out.element_size = h;
  out.reference_v = [p](double t) {
    return Vec::Constant(1, bimaterial_interface_velocity({t}, p).front());
  };
  return out;
}

// --- scalar wave ---

MeshedModel build_scalar_wave(int n, const ScalarWaveParams& p) {
  if (n < 4) throw ParameterError("scalar wave needs at least 4 elements per side");
  if (!(p.length > 0.0) || !(p.wave_speed > 0.0)) {
    throw ParameterError("scalar wave length and speed must be positive");
  }
  const double h = p.length / n;
  const int ni = n - 1;
  const Eigen::Index ndof = static_cast<Eigen::Index>(ni) * ni;

  // Counter-clockwise from the lower-left corner.
  Eigen::Matrix4d me;
  me << 4, 2, 1, 2, 2, 4, 2, 1, 1, 2, 4, 2, 2, 1, 2, 4;
  me *= h * h / 36.0;
  Eigen::Matrix4d ke;
  ke << 4, -1, -2, -1, -1, 4, -1, -2, -2, -1, 4, -1, -1, -2, -1, 4;
  ke *= p.wave_speed * p.wave_speed / 6.0;

  auto dof = [&](int i, int j) -> Eigen::Index {
    if (i <= 0 || j <= 0 || i >= n || j >= n) return -1;
    return static_cast<Eigen::Index>(i - 1) + static_cast<Eigen::Index>(j - 1) * ni;
  };

  Mat m = Mat::Zero(ndof, ndof);
  Mat k = Mat::Zero(ndof, ndof);
  for (int ej = 0; ej < n; ++ej) {
    for (int ei = 0; ei < n; ++ei) {
      const Eigen::Index d[4] = {dof(ei, ej), dof(ei + 1, ej), dof(ei + 1, ej + 1),
                                 dof(ei, ej + 1)};
      for (int a = 0; a < 4; ++a) {
        if (d[a] < 0) continue;
        for (int c = 0; c < 4; ++c) {
          if (d[c] < 0) continue;
          m(d[a], d[c]) += me(a, c);
          k(d[a], d[c]) += ke(a, c);
        }
      }
    }
  }

  Mat nodes(static_cast<Eigen::Index>(n + 1) * (n + 1), 2);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      nodes(i + j * (n + 1), 0) = i * h;
      nodes(i + j * (n + 1), 1) = j * h;
    }
  }

  Vec v0 = Vec::Zero(ndof);
  const double half = 0.5 * p.length;
  const double quarter = 0.25 * p.length;
  const double tol = 1e-12 * p.length;
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      if (std::abs(i * h - half) <= quarter + tol && std::abs(j * h - half) <= quarter + tol) {
        v0[dof(i, j)] = p.amplitude;
      }
    }
  }

  const int ic = static_cast<int>(std::lround(0.5 * n));
  const double xc = ic * h;
  MeshedModel out(StructuralSystem(std::move(m), Mat(), std::move(k), LoadModel(ndof)),
                  std::move(nodes),
                  {dof(ic, ic)},
                  {"center"},
                  Vec::Zero(ndof),
                  std::move(v0));
  out.wave_speed = p.wave_speed;
  out.element_size = h;
  out.reference_u = [xc, p](double t) {
    return Vec::Constant(1, scalar_wave_reference(xc, xc, t, 199, p).first);
  };
  out.reference_v = [xc, p](double t) {
    return Vec::Constant(1, scalar_wave_reference(xc, xc, t, 199, p).second);
  };
  return out;
}

std::pair<double, double> scalar_wave_reference(double x, double y, double t, int n_max,
                                                const ScalarWaveParams& p) {
  if (n_max < 1) throw ParameterError("scalar_wave_reference needs n_max >= 1");
  const double l = p.length;
  std::vector<double> ax;
  std::vector<double> ay;
  // Only odd indices contribute: sin(m pi / 2) vanishes for even m.
  for (int m = 1; m <= n_max; m += 2) {
    const double s = std::sin(m * kPi / 2) * std::sin(m * kPi / 4) / m;
    ax.push_back(s * std::sin(m * kPi * x / l));
    ay.push_back(s * std::sin(m * kPi * y / l));
  }
  double u = 0.0;
  double v = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const int m = 2 * static_cast<int>(i) + 1;
    for (std::size_t j = 0; j < ay.size(); ++j) {
      const int nn = 2 * static_cast<int>(j) + 1;
      const double mu = p.wave_speed * kPi / l * std::sqrt(double(m) * m + double(nn) * nn);
      const double w = ax[i] * ay[j];
      u += w * std::sin(mu * t) / mu;
      v += w * std::cos(mu * t);
    }
  }
  const double scale = 16.0 * p.amplitude / (kPi * kPi);
  return {scale * u, scale * v};
}

}  // namespace mixpade

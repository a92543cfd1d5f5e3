#pragma once
// Dense reference computations shared by the unit and acceptance tests.
// Everything here forms matrices explicitly, which the library avoids.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mixpade/pade.hpp"
#include "mixpade/system.hpp"

namespace oracle {

using mixpade::Mat;
using mixpade::Vec;

inline Mat random_spd(int n, std::mt19937& rng, double shift = 1.0) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Mat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = d(rng);
  return b * b.transpose() + shift * Mat::Identity(n, n);
}

inline Vec random_vec(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

/// Explicit 2n x 2n state matrix with z = [dt v; u].
inline Mat state_matrix(const Mat& m, const Mat& c, const Mat& k, double dt) {
  const auto n = m.rows();
  const Mat minv = m.inverse();
  Mat a = Mat::Zero(2 * n, 2 * n);
  if (c.size() != 0) a.topLeftCorner(n, n) = -dt * minv * c;
  a.topRightCorner(n, n) = -dt * dt * minv * k;
  a.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return a;
}

template <class S>
using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// sum_i c_i A^i by explicit powers.
template <class S>
MatT<S> matrix_poly(const mixpade::Polynomial& p, const MatT<S>& a) {
  MatT<S> out = MatT<S>::Zero(a.rows(), a.cols());
  MatT<S> power = MatT<S>::Identity(a.rows(), a.cols());
  for (int i = 0; i <= p.degree(); ++i) {
    out += static_cast<S>(p[static_cast<std::size_t>(i)]) * power;
    power = power * a;
  }
  return out;
}

/// The load-coefficient matrices by the recursion with a dense inverse:
///   C_0 = A^-1 (P - Q),  C_k = A^-1 (k C_{k-1} + (-1/2)^k (P - (-1)^k Q)).
/// Each step cancels leading terms, so the error grows like cond(A)^k;
/// use S = long double for a reference at k = 4.
template <class S>
std::vector<MatT<S>> load_matrices(const mixpade::Polynomial& p, const mixpade::Polynomial& q,
                                   const MatT<S>& a, int p_f) {
  const MatT<S> ainv = a.inverse();
  const MatT<S> pa = matrix_poly(p, a);
  const MatT<S> qa = matrix_poly(q, a);
  std::vector<MatT<S>> c;
  c.push_back(ainv * (pa - qa));
  for (int k = 1; k <= p_f; ++k) {
    const S h = std::pow(S(-0.5), k);
    const S sgn = (k % 2 == 0) ? S(1) : S(-1);
    c.push_back(ainv * (S(k) * c.back() + h * (pa - sgn * qa)));
  }
  return c;
}

/// n! as a double for small n.
inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace oracle

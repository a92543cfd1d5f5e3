#include "mixpade/pade.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mixpade/errors.hpp"

namespace mixpade {

namespace {

void check_orders(int L, int M) {
  if (L < 0 || M < L || M > kMaxPadeOrder) {
    throw ParameterError("Pade order (" + std::to_string(L) + "," + std::to_string(M) +
                         ") outside 0 <= L <= M <= " + std::to_string(kMaxPadeOrder));
  }
}

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

template <class C, class T>
T horner(const std::vector<C>& c, T x) {
  T acc = c.back();
  for (auto i = c.size() - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

template <class C, class T>
T horner_derivative(const std::vector<C>& c, T x) {
  if (c.size() < 2) return T(0);
  T acc = static_cast<C>(c.size() - 1) * c.back();
  for (auto i = c.size() - 1; i-- > 1;) acc = acc * x + static_cast<C>(i) * c[i];
  return acc;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) coeffs.push_back(0.0);
}

double Polynomial::operator()(double x) const { return horner(coeffs, x); }

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
  return horner(coeffs, x);
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

Polynomial pade_numerator(int L, int M) {
  check_orders(L, M);
  std::vector<double> c(static_cast<std::size_t>(L) + 1);
  // c_0 = (M+L)!/L! = (L+1)(L+2)...(M+L)
  double c0 = 1.0;
  for (int j = L + 1; j <= M + L; ++j) c0 *= j;
  c[0] = c0;
  for (int i = 0; i < L; ++i) {
    c[i + 1] = c[i] * (L - i) / (static_cast<double>(i + 1) * (M + L - i));
  }
  return Polynomial(std::move(c));
}

Polynomial pade_denominator(int L, int M) {
  check_orders(L, M);
  std::vector<double> c(static_cast<std::size_t>(M) + 1);
  double c0 = 1.0;
  for (int j = L + 1; j <= M + L; ++j) c0 *= j;
  c[0] = c0;
  for (int i = 0; i < M; ++i) {
    c[i + 1] = -c[i] * (M - i) / (static_cast<double>(i + 1) * (M + L - i));
  }
  c[M] = (M % 2 == 0) ? 1.0 : -1.0;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> mix(int M, double rho_inf) {
  if (M < 1 || M > kMaxPadeOrder) {
    throw ParameterError("scheme order M=" + std::to_string(M) + " outside [1, " +
                         std::to_string(kMaxPadeOrder) + "]");
  }
  if (!(rho_inf >= 0.0 && rho_inf <= 1.0)) {
    throw ParameterError("rho_inf=" + std::to_string(rho_inf) + " outside [0, 1]");
  }
  const Polynomial p_diag = pade_numerator(M, M);
  const Polynomial p_sub = pade_numerator(M - 1, M);
  const Polynomial q_diag = pade_denominator(M, M);
  const Polynomial q_sub = pade_denominator(M - 1, M);

  std::vector<double> p(static_cast<std::size_t>(M) + 1, 0.0);
  std::vector<double> q(static_cast<std::size_t>(M) + 1, 0.0);
  for (int i = 0; i <= M; ++i) {
    const double pd = p_diag[i];
    const double ps = i <= M - 1 ? p_sub[i] : 0.0;
    p[i] = rho_inf * pd + (1.0 - rho_inf) * ps;
    q[i] = rho_inf * q_diag[i] + (1.0 - rho_inf) * q_sub[i];
  }
  q[M] = (M % 2 == 0) ? 1.0 : -1.0;
  trim(p);
  return {Polynomial(std::move(p)), Polynomial(std::move(q))};
}

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw ParameterError("polynomial_roots needs degree >= 1");
  const double lead = p.coeffs.back();
  if (lead == 0.0 || !std::isfinite(lead)) {
    throw ParameterError("polynomial_roots: leading coefficient must be finite and nonzero");
  }

  // Rescale x = s y so the monic polynomial in y has unit constant term;
  // this balances the companion matrix for the Pade families.
  const double a0 = std::abs(p.coeffs.front() / lead);
  const double s = a0 > 0.0 ? std::pow(a0, 1.0 / n) : 1.0;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  double scale_pow = 1.0;  // s^(n-i) applied to coefficient i
  for (int i = n - 1; i >= 0; --i) {
    scale_pow *= s;
    companion(i, n - 1) = -(p.coeffs[i] / lead) / scale_pow;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("companion-matrix eigenvalue iteration did not converge");
  }

  // Newton polish in extended precision so each root ends up within about
  // half an ulp; the stepper's phase accuracy is limited by these digits.
  using LC = std::complex<long double>;
  std::vector<long double> lc(p.coeffs.begin(), p.coeffs.end());
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LC r = LC(solver.eigenvalues()[i] * s);
    long double best = std::abs(horner(lc, r));
    for (int it = 0; it < 8 && best > 0.0L; ++it) {
      const LC d = horner_derivative(lc, r);
      if (d == LC(0.0L)) break;
      const LC next = r - horner(lc, r) / d;
      const long double res = std::abs(horner(lc, next));
      if (!(res < best)) break;
      r = next;
      best = res;
    }
    roots[i] = std::complex<double>(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  }
  return roots;
}

std::vector<std::complex<double>> q_roots(const Polynomial& q) {
  const int m = q.degree();
  if (m < 1) throw ParameterError("q_roots needs degree >= 1");
  const double expected_lead = (m % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(q.coeffs.back() - expected_lead) > 1e-12) {
    throw ParameterError("q_roots: leading coefficient must be (-1)^M");
  }

  const auto raw = polynomial_roots(q);
  std::vector<std::complex<double>> upper;
  std::vector<std::complex<double>> lower;
  std::vector<double> real;
  for (const auto& r : raw) {
    if (std::abs(r) < 1e-8) throw NumericalError("denominator root too close to zero");
    if (std::abs(r.imag()) <= 1e-12 * std::abs(r)) {
      real.push_back(r.real());
    } else if (r.imag() > 0.0) {
      upper.push_back(r);
    } else {
      lower.push_back(r);
    }
  }
  if (upper.size() != lower.size()) {
    throw NumericalError("complex denominator roots do not form conjugate pairs");
  }

  std::vector<std::complex<double>> pairs;
  std::vector<bool> used(lower.size(), false);
  for (const auto& r : upper) {
    std::size_t best = lower.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(r - std::conj(lower[j]));
      if (best == lower.size() || dist < best_dist) {
        best = j;
        best_dist = dist;
      }
    }
    if (best == lower.size() || best_dist > 1e-10 * std::abs(r)) {
      throw NumericalError("unmatched complex denominator root");
    }
    used[best] = true;
    pairs.push_back(0.5 * (r + std::conj(lower[best])));
  }

  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  std::sort(real.begin(), real.end());

  std::vector<std::complex<double>> ordered;
  ordered.reserve(raw.size());
  for (const auto& r : pairs) {
    ordered.push_back(r);
    ordered.push_back(std::conj(r));
  }
  for (double r : real) ordered.emplace_back(r, 0.0);
  return ordered;
}

int max_load_order(int M) { return std::min(2 * M - 2, 4); }

std::vector<Polynomial> load_polys(const Polynomial& P, const Polynomial& Q, int p_f) {
  const int m = Q.degree();
  if (p_f < 0) throw ParameterError("load order p_f must be >= 0");
  if (p_f > max_load_order(m)) {
    throw ParameterError("load order p_f=" + std::to_string(p_f) + " exceeds min(2M-2, 4)=" +
                         std::to_string(max_load_order(m)));
  }
  const double tol = 1e-10 * P.max_abs_coeff();
  const std::size_t width = std::max(P.coeffs.size(), Q.coeffs.size());

  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(p_f) + 1);
  std::vector<double> prev;  // C_{k-1}
  for (int k = 0; k <= p_f; ++k) {
    std::vector<double> num(width, 0.0);
    const double weight = std::pow(-0.5, k);
    const double q_sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < width; ++i) {
      const double pi = i < P.coeffs.size() ? P.coeffs[i] : 0.0;
      const double qi = i < Q.coeffs.size() ? Q.coeffs[i] : 0.0;
      num[i] = weight * (pi - q_sign * qi);
    }
    for (std::size_t i = 0; i < prev.size(); ++i) num[i] += k * prev[i];

    if (std::abs(num[0]) > tol) {
      throw ConsistencyError("load polynomial C_" + std::to_string(k) +
                             " is not divisible by x (remainder " + std::to_string(num[0]) + ")");
    }
    std::vector<double> quotient(num.begin() + 1, num.end());
    trim(quotient);
    prev = quotient;
    out.emplace_back(std::move(quotient));
  }
  return out;
}

MixedPadeScheme::MixedPadeScheme(int M, double rho_inf, int load_order)
    : order_(M), rho_inf_(rho_inf), load_order_(load_order < 0 ? max_load_order(M) : load_order) {
  auto [p, q] = mix(M, rho_inf);
  numerator_ = std::move(p);
  denominator_ = std::move(q);

  const double p0 = numerator_[0];
  const double q0 = denominator_[0];
  if (std::abs(p0 - q0) > 1e-13 * std::abs(p0)) {
    throw NumericalError("mixed expansion violates P(0) = Q(0)");
  }
  const double p1 = numerator_.degree() >= 1 ? numerator_[1] : 0.0;
  if (std::abs((p1 - denominator_[1]) - p0) > 1e-12 * std::abs(p0)) {
    throw NumericalError("mixed expansion is not first-order consistent");
  }

  roots_ = q_roots(denominator_);
  for (const auto& r : roots_) {
    if (!(r.real() > 0.0)) throw NumericalError("denominator root with non-positive real part");
  }
  for (std::size_t i = 0; i < roots_.size();) {
    if (roots_[i].imag() != 0.0) {
      factors_.push_back({roots_[i], true});
      i += 2;
    } else {
      factors_.push_back({roots_[i], false});
      i += 1;
    }
  }
  load_polys_ = load_polys(numerator_, denominator_, load_order_);
}

std::complex<double> amplification_factor(const MixedPadeScheme& scheme, double x) {
  if (!(x >= 0.0)) throw ParameterError("amplification_factor needs x >= 0");
  const std::complex<double> lambda(0.0, 2.0 * std::numbers::pi * x);
  const std::complex<double> q = scheme.denominator()(lambda);
  const std::complex<double> p = scheme.numerator()(lambda);
  if (std::abs(q) <= 1e-300 || std::abs(q) < 1e-14 * std::abs(p)) {
    throw NumericalError("denominator vanishes at i*2*pi*x");
  }
  return p / q;
}

}  // namespace mixpade

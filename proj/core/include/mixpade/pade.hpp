#pragma once

// Rational approximations of exp(x) built by blending the diagonal (M,M)
// and first sub-diagonal (M-1,M) Pade expansions, plus the scalar
// polynomials that the time stepper evaluates as matrix polynomials.

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace mixpade {

/// Largest denominator degree supported by the coefficient recurrences.
inline constexpr int kMaxPadeOrder = 8;

/// Real polynomial c[0] + c[1] x + ... + c[N] x^N. Never empty; the zero
/// polynomial is stored as {0}.
struct Polynomial {
  std::vector<double> coeffs{0.0};

  Polynomial() = default;
  explicit Polynomial(std::vector<double> c);

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  double operator[](std::size_t i) const { return coeffs[i]; }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;

  /// max_i |c_i|
  double max_abs_coeff() const;
};

/// Numerator of the (L,M) Pade expansion of exp(x):
/// c_i = (M+L-i)! / (i! (L-i)!), i = 0..L. Requires 0 <= L <= M <= 8.
Polynomial pade_numerator(int L, int M);

/// Denominator of the (L,M) Pade expansion of exp(x):
/// c_i = (M!/L!) (M+L-i)! / (i! (M-i)!) (-1)^i, i = 0..M.
/// The leading coefficient is exactly (-1)^M.
Polynomial pade_denominator(int L, int M);

/// Blend of the (M,M) and (M-1,M) expansions weighted by rho_inf and
/// 1 - rho_inf. Returns {P, Q}; deg Q = M, deg P = M - 1 when rho_inf == 0
/// and M otherwise.
std::pair<Polynomial, Polynomial> mix(int M, double rho_inf);

/// All complex roots of p (degree >= 1) from the eigenvalues of its
/// balanced companion matrix, each refined by a few Newton steps.
/// Order is unspecified.
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);

/// Roots r_1..r_M of a denominator written as Q(x) = prod (r_i - x).
///
/// Conjugate pairs are snapped to exact conjugacy and placed adjacently,
/// pairs sorted by ascending |Im| with the Im > 0 member first; real roots
/// follow in ascending order. Throws NumericalError when a complex root has
/// no conjugate partner within 1e-10 relative, or a root is smaller than
/// 1e-8 in magnitude.
std::vector<std::complex<double>> q_roots(const Polynomial& q);

/// Highest force-expansion degree the scheme of denominator degree M
/// accepts: min(2M - 2, 4).
int max_load_order(int M);

/// Scalar forms of the load-coefficient matrices C_0..C_{p_f}:
///
///   C_0 = (P - Q) / x
///   C_k = (k C_{k-1} + (-1/2)^k (P - (-1)^k Q)) / x
///
/// Each division by x is exact; a constant term larger than
/// 1e-10 * max|p_i| raises ConsistencyError.
std::vector<Polynomial> load_polys(const Polynomial& P, const Polynomial& Q, int p_f);

/// One linear solve of the stepping scheme. For a conjugate pair the root
/// stored is the member with positive imaginary part.
struct RootFactor {
  std::complex<double> root;
  bool conjugate_pair = false;
};

/// Immutable description of a mixed-order scheme.
class MixedPadeScheme {
 public:
  /// load_order < 0 selects max_load_order(M).
  MixedPadeScheme(int M, double rho_inf, int load_order = -1);

  int order() const noexcept { return order_; }
  int sub_order() const noexcept { return order_ - 1; }
  double rho_inf() const noexcept { return rho_inf_; }
  int load_order() const noexcept { return load_order_; }

  const Polynomial& numerator() const noexcept { return numerator_; }
  const Polynomial& denominator() const noexcept { return denominator_; }
  std::span<const std::complex<double>> roots() const noexcept { return roots_; }
  const std::vector<Polynomial>& load_polynomials() const noexcept { return load_polys_; }

  /// Successive solves in execution order: one entry per conjugate pair,
  /// then one per real root.
  const std::vector<RootFactor>& factors() const noexcept { return factors_; }

 private:
  int order_;
  double rho_inf_;
  int load_order_;
  Polynomial numerator_;
  Polynomial denominator_;
  std::vector<std::complex<double>> roots_;
  std::vector<Polynomial> load_polys_;
  std::vector<RootFactor> factors_;
};

/// R = P(i 2 pi x) / Q(i 2 pi x), the per-step multiplier of a mode with
/// period T when x = dt / T. Requires x >= 0.
std::complex<double> amplification_factor(const MixedPadeScheme& scheme, double x);

}  // namespace mixpade

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>

namespace mixpade {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

enum class Structure { general, spd };

/// Reusable factorization of a square real or complex matrix.
///
/// Copies share the underlying factors. Concurrent solves are safe.
class Factorization {
 public:
  Factorization() = default;

  Eigen::Index size() const noexcept { return n_; }
  bool is_complex() const noexcept;
  /// FNV-1a hash of the factored matrix entries.
  std::uint64_t checksum() const noexcept { return checksum_; }

  /// Real solve. Throws DimensionError for a complex factorization; use
  /// solve_complex instead.
  Vec solve(const Vec& b) const;
  Mat solve(const Mat& b) const;
  CVec solve_complex(const CVec& b) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  Eigen::Index n_ = 0;
  std::uint64_t checksum_ = 0;

  friend Factorization factor(const Mat& a, Structure s);
  friend Factorization factor(const CMat& a);
};

/// Cholesky for Structure::spd, LU with partial pivoting otherwise.
/// Throws FactorizationError on a zero or non-positive pivot.
Factorization factor(const Mat& a, Structure s = Structure::general);
Factorization factor(const CMat& a);

struct EigenPairs {
  Vec omega_sq;  // ascending
  Mat vectors;   // M-orthonormal columns
};

/// Solves K phi = omega^2 M phi for symmetric K and SPD M.
EigenPairs generalized_eig(const Mat& k, const Mat& m);

/// max |a_ij - a_ji| <= tol * ||A||_inf
bool is_symmetric(const Mat& a, double tol = 1e-12);

}  // namespace mixpade

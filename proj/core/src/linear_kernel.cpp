#include "mixpade/linear_kernel.hpp"

#include <Eigen/Eigenvalues>

#include <cstring>
#include <limits>
#include <string>
#include <variant>

#include "mixpade/errors.hpp"

namespace mixpade {

struct Factorization::Impl {
  std::variant<Eigen::LLT<Mat>, Eigen::PartialPivLU<Mat>, Eigen::PartialPivLU<CMat>> f;
};

namespace {

template <class Derived>
std::uint64_t fnv1a(const Eigen::MatrixBase<Derived>& a) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(a.derived().data());
  const std::size_t len = static_cast<std::size_t>(a.size()) * sizeof(typename Derived::Scalar);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <class Derived>
void check_square_finite(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError("factor: matrix must be square and non-empty, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw ParameterError("factor: matrix has non-finite entries");
}

template <class LU>
void check_lu_pivots(const LU& lu, double norm) {
  const auto& m = lu.matrixLU();
  const double tol = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() * norm;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(std::abs(m(i, i)) > tol)) {
      throw FactorizationError("matrix is singular to working precision", i);
    }
  }
}

}  // namespace

bool Factorization::is_complex() const noexcept {
  return impl_ && std::holds_alternative<Eigen::PartialPivLU<CMat>>(impl_->f);
}

Vec Factorization::solve(const Vec& b) const {
  if (!impl_) throw ParameterError("solve on an empty factorization");
  if (b.size() != n_) {
    throw DimensionError("solve: rhs has length " + std::to_string(b.size()) + ", expected " +
                         std::to_string(n_));
  }
  if (auto* llt = std::get_if<Eigen::LLT<Mat>>(&impl_->f)) return llt->solve(b);
  if (auto* lu = std::get_if<Eigen::PartialPivLU<Mat>>(&impl_->f)) return lu->solve(b);
  throw DimensionError("real solve requested from a complex factorization");
}

Mat Factorization::solve(const Mat& b) const {
  if (!impl_) throw ParameterError("solve on an empty factorization");
  if (b.rows() != n_) throw DimensionError("solve: rhs row count mismatch");
  if (auto* llt = std::get_if<Eigen::LLT<Mat>>(&impl_->f)) return llt->solve(b);
  if (auto* lu = std::get_if<Eigen::PartialPivLU<Mat>>(&impl_->f)) return lu->solve(b);
  throw DimensionError("real solve requested from a complex factorization");
}

CVec Factorization::solve_complex(const CVec& b) const {
  if (!impl_) throw ParameterError("solve on an empty factorization");
  if (b.size() != n_) {
    throw DimensionError("solve: rhs has length " + std::to_string(b.size()) + ", expected " +
                         std::to_string(n_));
  }
  if (auto* lu = std::get_if<Eigen::PartialPivLU<CMat>>(&impl_->f)) return lu->solve(b);
  // Real factor, complex rhs: solve real and imaginary parts separately.
  Mat parts(n_, 2);
  parts.col(0) = b.real();
  parts.col(1) = b.imag();
  const Mat x = solve(parts);
  CVec out(n_);
  out.real() = x.col(0);
  out.imag() = x.col(1);
  return out;
}

Factorization factor(const Mat& a, Structure s) {
  check_square_finite(a);
  Factorization out;
  out.n_ = a.rows();
  out.checksum_ = fnv1a(a);
  auto impl = std::make_shared<Factorization::Impl>();
  if (s == Structure::spd) {
    Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success) {
      // Locate the first failing leading minor for the error message.
      Eigen::Index pivot = a.rows() - 1;
      for (Eigen::Index k = 1; k <= a.rows(); ++k) {
        if (Eigen::LLT<Mat>(a.topLeftCorner(k, k)).info() != Eigen::Success) {
          pivot = k - 1;
          break;
        }
      }
      throw FactorizationError("matrix is not symmetric positive definite", pivot);
    }
    impl->f = std::move(llt);
  } else {
    Eigen::PartialPivLU<Mat> lu(a);
    check_lu_pivots(lu, a.cwiseAbs().rowwise().sum().maxCoeff());
    impl->f = std::move(lu);
  }
  out.impl_ = std::move(impl);
  return out;
}

Factorization factor(const CMat& a) {
  check_square_finite(a);
  Factorization out;
  out.n_ = a.rows();
  out.checksum_ = fnv1a(a);
  auto impl = std::make_shared<Factorization::Impl>();
  Eigen::PartialPivLU<CMat> lu(a);
  check_lu_pivots(lu, a.cwiseAbs().rowwise().sum().maxCoeff());
  impl->f = std::move(lu);
  out.impl_ = std::move(impl);
  return out;
}

EigenPairs generalized_eig(const Mat& k, const Mat& m) {
  if (k.rows() != k.cols() || m.rows() != m.cols() || k.rows() != m.rows() || k.rows() == 0) {
    throw DimensionError("generalized_eig: K and M must be square and the same size");
  }
  if (Eigen::LLT<Mat>(m).info() != Eigen::Success) {
    throw FactorizationError("generalized_eig: M is not positive definite", 0);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(k, m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("generalized_eig: eigenvalue iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

bool is_symmetric(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * norm;
}

}  // namespace mixpade

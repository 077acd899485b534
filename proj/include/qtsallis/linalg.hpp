#pragma once

// Dense Hermitian matrices: eigendecomposition, spectral calculus,
// Schatten norms and operator-order comparison.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "qtsallis/errors.hpp"

namespace qtsallis {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr int kMaxDim = 256;
inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolPsd = 1e-8;

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double max_asymmetry(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

}  // namespace detail

/// Index p of a Schatten norm, p in [1, inf].
class SchattenIndex {
 public:
  explicit SchattenIndex(double p) : p_(p) {
    if (!(p >= 1.0)) throw DomainViolation("Schatten index must satisfy p >= 1, got " + detail::fmt_double(p));
  }
  static SchattenIndex infinity() { return SchattenIndex(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const { return std::isinf(p_); }
  double value() const { return p_; }
  std::string label() const { return is_infinite() ? "inf" : detail::fmt_double(p_); }

 private:
  double p_;
};

struct Eigensystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary
};

/// Immutable Hermitian matrix with a lazily computed, shared eigensystem.
///
/// Construction symmetrizes the input as (H + H^dagger)/2 and rejects inputs
/// whose entrywise asymmetry exceeds tol * max(1, |H|_F). The Frobenius norm
/// is used as the scale because it bounds the spectral norm without an
/// eigendecomposition.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m, double tol = kTolHerm) {
    if (m.rows() != m.cols()) throw DimensionMismatch("Hermitian operator must be square");
    if (m.rows() < 1 || m.rows() > kMaxDim)
      throw DimensionMismatch("dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                              std::to_string(m.rows()));
    if (!m.allFinite()) throw DomainViolation("matrix has non-finite entries");
    asymmetry_ = detail::max_asymmetry(m);
    const double scale = std::max(1.0, m.norm());
    if (asymmetry_ > tol * scale)
      throw NonHermitianInput("asymmetry " + detail::fmt_double(asymmetry_) + " exceeds tolerance " +
                              detail::fmt_double(tol * scale));
    m_ = (m + m.adjoint()) * 0.5;
  }

  static HermitianOperator diagonal(const RealVector& d) {
    return HermitianOperator(Matrix(d.cast<Complex>().asDiagonal()));
  }
  static HermitianOperator diagonal(std::initializer_list<double> d) {
    RealVector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return diagonal(v);
  }
  static HermitianOperator identity(int d) { return HermitianOperator(Matrix::Identity(d, d)); }
  static HermitianOperator zero(int d) { return HermitianOperator(Matrix::Zero(d, d)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double asymmetry() const { return asymmetry_; }

  /// Eigenvalues ascending with orthonormal eigenvectors; computed at most once.
  const Eigensystem& eigensystem() const {
    std::call_once(cache_->once, [this] { cache_->value = decompose(m_); });
    return cache_->value;
  }
  const RealVector& eigenvalues() const { return eigensystem().eigenvalues; }
  double min_eigenvalue() const { return eigenvalues()(0); }
  double max_eigenvalue() const { return eigenvalues()(dim() - 1); }
  double spectral_norm() const { return std::max(std::abs(min_eigenvalue()), std::abs(max_eigenvalue())); }

  /// Eigenvalues with magnitude below this are treated as exact zeros.
  double zero_threshold() const {
    return dim() * std::numeric_limits<double>::epsilon() * std::max(1.0, max_eigenvalue());
  }
  RealVector thresholded_eigenvalues() const {
    RealVector ev = eigenvalues();
    const double tz = zero_threshold();
    for (auto& x : ev)
      if (std::abs(x) <= tz) x = 0.0;
    return ev;
  }

  Complex trace() const { return m_.trace(); }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    check_same_dim(a, b);
    return HermitianOperator(a.m_ + b.m_);
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    check_same_dim(a, b);
    return HermitianOperator(a.m_ - b.m_);
  }
  friend HermitianOperator operator*(double c, const HermitianOperator& a) { return HermitianOperator(c * a.m_); }

  static void check_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim())
      throw DimensionMismatch("dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }

 private:
  struct Cache {
    std::once_flag once;
    Eigensystem value;
  };

  static Eigensystem decompose(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      throw ConvergenceFailure("Hermitian eigensolver did not converge at d=" + std::to_string(m.rows()));
    return {solver.eigenvalues(), solver.eigenvectors()};
  }

  Matrix m_;
  double asymmetry_ = 0.0;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline const Eigensystem& eigh(const HermitianOperator& h) { return h.eigensystem(); }

inline Matrix from_eigensystem(const Matrix& u, const RealVector& values) {
  return u * values.cast<Complex>().asDiagonal() * u.adjoint();
}

/// Spectral calculus f(H) = U diag(f(lambda)) U^dagger. Eigenvalues are
/// zero-thresholded before `guard` sees them; a rejected eigenvalue raises
/// DomainViolation.
template <class F, class Guard>
HermitianOperator apply_function(const HermitianOperator& h, F&& f, Guard&& guard) {
  const RealVector ev = h.thresholded_eigenvalues();
  RealVector mapped(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!guard(ev(i)))
      throw DomainViolation("eigenvalue " + detail::fmt_double(ev(i)) + " outside the function's domain");
    mapped(i) = f(ev(i));
    if (!std::isfinite(mapped(i)))
      throw DomainViolation("function is not finite at eigenvalue " + detail::fmt_double(ev(i)));
  }
  return HermitianOperator(from_eigensystem(h.eigensystem().eigenvectors, mapped));
}

template <class F>
HermitianOperator apply_function(const HermitianOperator& h, F&& f) {
  return apply_function(h, std::forward<F>(f), [](double) { return true; });
}

/// H^t for real t. Negative t requires strictly positive H; t > 0 allows PSD H.
inline HermitianOperator power(const HermitianOperator& h, double t) {
  if (t < 0.0)
    return apply_function(h, [t](double x) { return std::pow(x, t); }, [](double x) { return x > 0.0; });
  return apply_function(h, [t](double x) { return x == 0.0 ? (t == 0.0 ? 1.0 : 0.0) : std::pow(x, t); },
                        [](double x) { return x >= 0.0; });
}

namespace detail {

inline double lp_norm(const RealVector& s, const SchattenIndex& p) {
  if (s.size() == 0) return 0.0;
  const double smax = s.cwiseAbs().maxCoeff();
  if (p.is_infinite() || smax == 0.0) return smax;
  if (p.value() == 1.0) return s.cwiseAbs().sum();
  double acc = 0.0;
  for (double x : s) acc += std::pow(std::abs(x) / smax, p.value());
  return smax * std::pow(acc, 1.0 / p.value());
}

}  // namespace detail

inline RealVector singular_values(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

/// Schatten p-norm of an arbitrary square matrix.
inline double schatten_norm(const Matrix& x, const SchattenIndex& p) {
  return detail::lp_norm(singular_values(x), p);
}

/// Hermitian case: singular values are the absolute eigenvalues.
inline double schatten_norm(const HermitianOperator& x, const SchattenIndex& p) {
  return detail::lp_norm(x.eigenvalues(), p);
}

inline double trace_norm(const HermitianOperator& x) { return schatten_norm(x, SchattenIndex(1.0)); }
inline double spectral_norm(const HermitianOperator& x) { return x.spectral_norm(); }

/// Minimum eigenvalue of B - A; non-negative iff A <= B in operator order.
inline double psd_gap(const HermitianOperator& a, const HermitianOperator& b) {
  return (b - a).min_eigenvalue();
}

inline bool operator_leq(const HermitianOperator& a, const HermitianOperator& b, double tol_psd = kTolPsd) {
  const double scale = std::max({1.0, a.spectral_norm(), b.spectral_norm()});
  return psd_gap(a, b) >= -tol_psd * scale;
}

}  // namespace qtsallis

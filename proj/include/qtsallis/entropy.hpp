#pragma once

// q-logarithm, Tsallis entropy and relative q-entropies.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qtsallis/states.hpp"

namespace qtsallis {

inline constexpr double kMaxQ = 40.0;

/// Finite non-negative real or +infinity. Never NaN.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) {
    if (std::isnan(v)) throw InternalError("NaN reached an extended-real value");
    if (std::isinf(v)) throw InternalError("overflow: finite extended-real value is not representable");
    return ExtendedReal(v, false);
  }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  bool is_finite() const { return !inf_; }
  bool is_infinite() const { return inf_; }
  double value() const {
    if (inf_) throw DomainViolation("value() of +infinity");
    return v_;
  }
  /// +inf maps to std::numeric_limits<double>::infinity().
  double as_double() const { return inf_ ? std::numeric_limits<double>::infinity() : v_; }
  std::string to_string() const { return inf_ ? "inf" : detail::fmt_double(v_); }

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal(double v, bool inf) : v_(v), inf_(inf) {}
  double v_;
  bool inf_;
};

/// Probability vector: non-negative entries summing to 1 within 1e-12.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw DomainViolation("empty probability vector");
    double s = 0.0;
    for (double x : p_) {
      if (!(x >= 0.0)) throw DomainViolation("negative probability " + detail::fmt_double(x));
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainViolation("probabilities sum to " + detail::fmt_double(s));
  }
  ProbVector(std::initializer_list<double> p) : ProbVector(std::vector<double>(p)) {}

  std::span<const double> entries() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  std::vector<double> p_;
};

/// ln_q x = (x^(1-q) - 1)/(1-q), evaluated as expm1((1-q) ln x)/(1-q).
inline double q_log(double x, double q) {
  if (!(x > 0.0)) throw DomainViolation("q-logarithm needs x > 0, got " + detail::fmt_double(x));
  if (q == 1.0) throw DomainViolation("q = 1 is the natural logarithm; call std::log explicitly");
  return std::expm1((1.0 - q) * std::log(x)) / (1.0 - q);
}

/// (sum p_i^q - 1)/(1 - q), with 0^q = 0.
inline double tsallis_entropy(const ProbVector& p, double q) {
  if (q == 1.0) throw DomainViolation("Tsallis entropy is defined for q != 1");
  double s = 0.0;
  for (double x : p.entries())
    if (x > 0.0) s += std::pow(x, q);
  return (s - 1.0) / (1.0 - q);
}

/// Classical D_q(a||b) = (1 - sum_{a_i>0} a_i^q b_i^(1-q))/(1-q) for q >= 0,
/// q != 1. For q > 1 a positive a_i against a zero b_i gives +infinity.
inline ExtendedReal classical_relative_q(const ProbVector& a, const ProbVector& b, double q) {
  if (a.size() != b.size()) throw DimensionMismatch("probability vectors differ in length");
  if (!(q >= 0.0) || q == 1.0) throw QOutOfRange("classical relative q-entropy needs q >= 0, q != 1");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    if (b[i] == 0.0) {
      if (q > 1.0) return ExtendedReal::infinity();
      continue;
    }
    s += std::pow(a[i], q) * std::pow(b[i], 1.0 - q);
  }
  return ExtendedReal::finite(std::max((1.0 - s) / (1.0 - q), 0.0));
}

/// Overlaps |<a|b>|^2 between eigenvectors of rho (rows) and sigma (columns).
inline Eigen::MatrixXd overlap_weights(const DensityMatrix& rho, const DensityMatrix& sigma) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  return (rho.eigenvectors().adjoint() * sigma.eigenvectors()).cwiseAbs2();
}

/// Restricted double sum sum_{a>0} sum_{b>0} |<a|b>|^2 a^q b^(1-q).
inline double restricted_trace(const DensityMatrix& rho, const DensityMatrix& sigma, double q) {
  const Eigen::MatrixXd w = overlap_weights(rho, sigma);
  const RealVector& a = rho.spectrum();
  const RealVector& b = sigma.spectrum();
  double s = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    if (a(i) == 0.0) continue;
    const double aq = std::pow(a(i), q);
    for (int j = 0; j < sigma.dim(); ++j)
      if (b(j) > 0.0) s += w(i, j) * aq * std::pow(b(j), 1.0 - q);
  }
  return s;
}

/// tr(rho^q sigma^(1-q)) with sigma^(1-q) taken on supp(sigma): the
/// operator-level counterpart of restricted_trace.
inline double operator_route_trace(const DensityMatrix& rho, const DensityMatrix& sigma, double q) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  const auto rho_q = rho.map_spectrum([q](double x) { return x > 0.0 ? std::pow(x, q) : 0.0; });
  const auto sigma_pow = sigma.map_spectrum([q](double x) { return x > 0.0 ? std::pow(x, 1.0 - q) : 0.0; });
  return (rho_q.matrix() * sigma_pow.matrix()).trace().real();
}

namespace detail {

inline void check_finite(double v, const char* what) {
  if (std::isnan(v)) throw InternalError(std::string("NaN in ") + what);
}

}  // namespace detail

/// Quantum relative q-entropy for 1 < q <= 40.
///
/// Rounding below zero is clamped to 0.
///
/// Infinite unless ker(sigma) lies in ker(rho). Otherwise the trace runs over
/// nonzero eigenvalues of both states; it is summed as
///   sum w a expm1((q-1) ln(a/b)) + (sum w a - 1),
/// which equals tr(rho^q sigma^(1-q)) - 1 without cancellation near q = 1.
inline ExtendedReal quantum_relative_q(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                                       double tol_incl = kTolIncl) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  if (!(q > 1.0 && q <= kMaxQ))
    throw QOutOfRange("quantum relative q-entropy needs 1 < q <= 40, got " + detail::fmt_double(q));
  if (!kernel_included(sigma, rho, tol_incl)) return ExtendedReal::infinity();
  const Eigen::MatrixXd w = overlap_weights(rho, sigma);
  const RealVector& a = rho.spectrum();
  const RealVector& b = sigma.spectrum();
  double excess = 0.0;
  double mass = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    if (a(i) == 0.0) continue;
    const double la = std::log(a(i));
    for (int j = 0; j < sigma.dim(); ++j) {
      if (b(j) == 0.0) continue;
      const double wa = w(i, j) * a(i);
      mass += wa;
      excess += wa * std::expm1((q - 1.0) * (la - std::log(b(j))));
    }
  }
  const double value = (excess + (mass - 1.0)) / (q - 1.0);
  detail::check_finite(value, "quantum_relative_q");
  return ExtendedReal::finite(std::max(value, 0.0));
}

/// D_p for 0 <= p < 1 by the same restricted double sum; always finite.
inline ExtendedReal quantum_relative_sub1(const DensityMatrix& rho, const DensityMatrix& sigma, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw QOutOfRange("sub-unit order must lie in [0,1)");
  const double t = restricted_trace(rho, sigma, p);
  const double value = (1.0 - t) / (1.0 - p);
  detail::check_finite(value, "quantum_relative_sub1");
  return ExtendedReal::finite(std::max(value, 0.0));
}

/// Umegaki relative entropy tr(rho ln rho - rho ln sigma) with the same
/// support conventions.
inline ExtendedReal relative_entropy_vn(const DensityMatrix& rho, const DensityMatrix& sigma,
                                        double tol_incl = kTolIncl) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  if (!kernel_included(sigma, rho, tol_incl)) return ExtendedReal::infinity();
  const Eigen::MatrixXd w = overlap_weights(rho, sigma);
  const RealVector& a = rho.spectrum();
  const RealVector& b = sigma.spectrum();
  double s = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    if (a(i) == 0.0) continue;
    const double la = std::log(a(i));
    for (int j = 0; j < sigma.dim(); ++j)
      if (b(j) > 0.0) s += w(i, j) * a(i) * (la - std::log(b(j)));
  }
  detail::check_finite(s, "relative_entropy_vn");
  return ExtendedReal::finite(std::max(s, 0.0));
}

}  // namespace qtsallis

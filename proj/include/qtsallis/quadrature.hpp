#pragma once

// Fractional powers by resolvent quadrature, independent of the eigensolver.
//
//   a^r = sin(r pi)/pi * int_0^inf x^(r-1) a/(a+x) dx
//       = sin(r pi)/pi * int_0^inf y^(-r) (y + 1/a)^(-1) dy,   0 < r < 1.
//
// Integrals of the form int_0^inf y^alpha g(y) dy, with g smooth on [0, inf)
// and g(y) ~ y^(-k) at infinity, are split into three parts:
//   (0, lo]      y = lo*u,  Gauss-Jacobi with weight u^alpha
//   [lo, hi]     y = e^t,   Gauss-Legendre panels of bounded ratio
//   [hi, inf)    y = hi/u,  Gauss-Jacobi with weight u^(k-alpha-2)
// where [lo, hi] brackets the spectrum of the operator. In the log variable
// the resolvent poles sit at distance pi from the real axis independently of
// the eigenvalue, so every panel converges geometrically.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "qtsallis/linalg.hpp"

namespace qtsallis {

struct QuadratureRule {
  double r;
  int nodes_per_panel = 64;
  // Largest ratio y_{j+1}/y_j allowed for an interior panel.
  double panel_ratio = 100.0;

  explicit QuadratureRule(double exponent, int nodes = 64, double ratio = 100.0)
      : r(exponent), nodes_per_panel(nodes), panel_ratio(ratio) {
    if (!(r > 0.0 && r < 1.0))
      throw DomainViolation("quadrature exponent must lie in (0,1), got " + detail::fmt_double(r));
    if (nodes_per_panel < 4) throw DomainViolation("nodes_per_panel must be >= 4");
    if (!(panel_ratio > 1.0)) throw DomainViolation("panel_ratio must exceed 1");
  }

  double prefactor() const { return std::sin(r * std::numbers::pi) / std::numbers::pi; }
};

enum class PowerForm { first, second };

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

/// Golub-Welsch for weight (1-t)^alpha (1+t)^beta on [-1, 1].
inline GaussRule golub_welsch_jacobi(int n, double alpha, double beta) {
  RealVector diag(n);
  RealVector sub(n > 1 ? n - 1 : 0);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    if (k == 0)
      diag(k) = (beta - alpha) / (ab + 2.0);
    else
      diag(k) = (beta * beta - alpha * alpha) / denom;
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
    sub(k - 1) = std::sqrt(num / (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("Golub-Welsch eigensolver failed");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// n-point rule on [0, 1] for weight u^beta (beta > -1). Cached per (n, beta).
inline const GaussRule& jacobi_unit_rule(int n, double beta) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find({n, beta});
  if (it != cache.end()) return it->second;
  GaussRule ref = detail::golub_welsch_jacobi(n, 0.0, beta);
  const double scale = std::pow(0.5, beta + 1.0);
  for (int i = 0; i < n; ++i) {
    ref.nodes[i] = 0.5 * (1.0 + ref.nodes[i]);
    ref.weights[i] *= scale;
  }
  return cache.emplace(std::make_pair(n, beta), std::move(ref)).first->second;
}

inline const GaussRule& legendre_unit_rule(int n) { return jacobi_unit_rule(n, 0.0); }

/// int_0^inf y^alpha g(y) dy where g(y) = O(y^-decay) at infinity and the
/// features of g lie in [lo, hi]. Requires alpha > -1 and alpha - decay < -1.
/// Summation order is fixed, so the result is reproducible bit for bit.
template <class G>
auto integrate_half_line(G&& g, double alpha, int decay, double lo, double hi, const QuadratureRule& rule)
    -> decltype(g(1.0)) {
  using T = decltype(g(1.0));
  if (!(alpha > -1.0 && alpha - decay < -1.0))
    throw DomainViolation("integrand exponents do not give a convergent half-line integral");
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainViolation("bad integration scale bracket");
  const int n = rule.nodes_per_panel;

  const GaussRule& head = jacobi_unit_rule(n, alpha);
  const double head_scale = std::pow(lo, alpha + 1.0);
  T acc = (head.weights[0] * head_scale) * g(lo * head.nodes[0]);
  for (int i = 1; i < n; ++i) acc += (head.weights[i] * head_scale) * g(lo * head.nodes[i]);

  if (hi > lo) {
    const double span = std::log(hi / lo);
    const int panels = std::max(1, static_cast<int>(std::ceil(span / std::log(rule.panel_ratio))));
    const double width = span / panels;
    const GaussRule& leg = legendre_unit_rule(n);
    const double t0 = std::log(lo);
    for (int p = 0; p < panels; ++p) {
      const double a = t0 + p * width;
      for (int i = 0; i < n; ++i) {
        const double t = a + width * leg.nodes[i];
        const double y = std::exp(t);
        acc += (leg.weights[i] * width * std::exp((alpha + 1.0) * t)) * g(y);
      }
    }
  }

  const GaussRule& tail = jacobi_unit_rule(n, decay - alpha - 2.0);
  const double tail_scale = std::pow(hi, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    const double u = tail.nodes[i];
    acc += (tail.weights[i] * tail_scale * std::pow(u, -decay)) * g(hi / u);
  }
  return acc;
}

/// a^r by the first integral representation.
inline double frac_power_scalar(double a, const QuadratureRule& rule) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainViolation("fractional power needs a > 0, got " + detail::fmt_double(a));
  const double integral = integrate_half_line([a](double x) { return a / (a + x); }, rule.r - 1.0, 1, a, a, rule);
  return rule.prefactor() * integral;
}

namespace detail {

struct PdFactors {
  Matrix inverse;
  double lo;  // <= lambda_min
  double hi;  // >= lambda_max
};

// Spectral bracket from Frobenius norms of A and A^-1, via Cholesky only.
inline PdFactors pd_bracket(const HermitianOperator& a) {
  const Matrix& m = a.matrix();
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw DomainViolation("operator is not strictly positive");
  PdFactors f{llt.solve(Matrix::Identity(m.rows(), m.cols())), 0.0, m.norm()};
  const double inv_norm = f.inverse.norm();
  f.lo = 1.0 / inv_norm;
  const double tz = a.dim() * std::numeric_limits<double>::epsilon() * std::max(1.0, f.hi);
  if (!(f.lo > tz) || !std::isfinite(inv_norm)) throw DomainViolation("operator is numerically singular");
  return f;
}

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace detail

/// A^r for strictly positive A. Resolvents use Cholesky solves only.
inline HermitianOperator frac_power_operator(const HermitianOperator& a, const QuadratureRule& rule,
                                             PowerForm form = PowerForm::first) {
  const auto f = detail::pd_bracket(a);
  const Matrix& m = a.matrix();
  const auto eye = Matrix::Identity(m.rows(), m.cols());
  Matrix integral;
  if (form == PowerForm::first) {
    auto g = [&](double x) -> Matrix {
      Eigen::LLT<Matrix> llt(m + x * eye);
      return llt.solve(m);
    };
    integral = integrate_half_line(g, rule.r - 1.0, 1, f.lo, f.hi, rule);
  } else {
    auto g = [&](double y) -> Matrix {
      Eigen::LLT<Matrix> llt(f.inverse + y * eye);
      return llt.solve(Matrix(eye));
    };
    integral = integrate_half_line(g, -rule.r, 1, 1.0 / f.hi, 1.0 / f.lo, rule);
  }
  return HermitianOperator(detail::hermitian_part(rule.prefactor() * integral));
}

/// sin(r pi)/pi int_0^inf y^-r (y+A)^-1 D (y+A)^-1 dy: the Frechet derivative
/// of t -> -t^-r at A in direction D.
inline HermitianOperator frechet_integral_rhs(const HermitianOperator& a, const HermitianOperator& d,
                                              const QuadratureRule& rule) {
  HermitianOperator::check_same_dim(a, d);
  const auto f = detail::pd_bracket(a);
  const Matrix& m = a.matrix();
  const Matrix& dm = d.matrix();
  const auto eye = Matrix::Identity(m.rows(), m.cols());
  auto g = [&](double y) -> Matrix {
    Eigen::LLT<Matrix> llt(m + y * eye);
    const Matrix res = llt.solve(Matrix(eye));
    return res * dm * res;
  };
  const Matrix integral = integrate_half_line(g, -rule.r, 2, f.lo, f.hi, rule);
  return HermitianOperator(detail::hermitian_part(rule.prefactor() * integral));
}

/// Quadrature of sin(r pi)/pi int_0^inf y^-r / ((y+b0)(y+a0)) dy.
inline double resolvent_product_integral(double a0, double b0, const QuadratureRule& rule) {
  if (!(a0 > 0.0 && b0 > 0.0)) throw DomainViolation("resolvent product integral needs a0, b0 > 0");
  auto g = [a0, b0](double y) { return 1.0 / ((y + b0) * (y + a0)); };
  return rule.prefactor() * integrate_half_line(g, -rule.r, 2, std::min(a0, b0), std::max(a0, b0), rule);
}

/// Closed form (b0^-r - a0^-r)/(a0 - b0), with the limit r b0^(-r-1) at a0 = b0.
inline double resolvent_product_closed_form(double a0, double b0, double r) {
  if (!(a0 > 0.0 && b0 > 0.0)) throw DomainViolation("closed form needs a0, b0 > 0");
  const double diff = a0 - b0;
  if (std::abs(diff) <= 1e-14 * std::max(a0, b0)) return r * std::pow(b0, -r - 1.0);
  // b0^-r - a0^-r = -b0^-r * expm1(-r log(a0/b0)), stable for a0 close to b0
  const double log_ratio = std::log1p(diff / b0);
  return -std::pow(b0, -r) * std::expm1(-r * log_ratio) / diff;
}

/// |quadrature(4^0.5) - 2|, the harness start-up check.
inline double scalar_self_test_error(int nodes_per_panel) {
  return std::abs(frac_power_scalar(4.0, QuadratureRule(0.5, nodes_per_panel)) - 2.0);
}

}  // namespace qtsallis

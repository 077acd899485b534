#pragma once

// Continuity bounds on the relative q-entropy. Each evaluator computes the
// right-hand side from spectral constants and norm distances, evaluates the
// left-hand side directly, and reports the slack.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtsallis/entropy.hpp"
#include "qtsallis/quadrature.hpp"

namespace qtsallis {

inline constexpr double kTolBound = 1e-9;
// Allowance for quadrature error in the operator-order check of the
// Frechet-derivative inequality.
inline constexpr double kQuadratureAllowance = 1e-7;

struct SpectralSummary {
  double a1 = 0.0;       // max eigenvalue of rho
  double b1 = 0.0;       // max eigenvalue of sigma
  double b0 = 0.0;       // min nonzero eigenvalue of sigma
  double lambda0 = 0.0;  // min over spc(rho) U spc(sigma)
  double lambda1 = 0.0;  // max over spc(rho) U spc(sigma)
};

inline SpectralSummary summarize(const DensityMatrix& rho, const DensityMatrix& sigma) {
  SpectralSummary s;
  s.a1 = rho.max_eigenvalue();
  s.b1 = sigma.max_eigenvalue();
  s.b0 = sigma.min_nonzero_eigenvalue();
  s.lambda0 = std::min(rho.min_eigenvalue(), sigma.min_eigenvalue());
  s.lambda1 = std::max(s.a1, s.b1);
  return s;
}

struct Distances {
  double trace_norm = 0.0;
  double spectral_norm = 0.0;
};

inline Distances distances(const HermitianOperator& x, const HermitianOperator& y) {
  const HermitianOperator delta = x - y;
  return {trace_norm(delta), spectral_norm(delta)};
}

inline Distances distances(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return distances(rho.op(), sigma.op());
}

struct BoundReport {
  std::string name;
  ExtendedReal lhs = ExtendedReal::finite(0.0);
  ExtendedReal rhs = ExtendedReal::infinity();
  std::optional<double> slack;  // rhs - lhs when both finite
  bool holds = true;
  bool vacuous = false;  // hypotheses failed; rhs is +infinity
  SpectralSummary constants;
  Distances dist;
  std::vector<std::pair<std::string, double>> terms;  // named intermediate values
  std::string note;
};

namespace detail {

inline void settle(BoundReport& r, double tol) {
  if (r.vacuous) {
    r.rhs = ExtendedReal::infinity();
    r.slack.reset();
    r.holds = true;
    return;
  }
  if (r.lhs.is_finite() && r.rhs.is_finite()) {
    r.slack = r.rhs.value() - r.lhs.value();
    r.holds = r.lhs.value() <= r.rhs.value() + tol * (1.0 + r.rhs.value());
  } else {
    r.slack.reset();
    r.holds = r.rhs.is_infinite();
  }
}

inline BoundReport vacuous_report(std::string name, std::string why, const ExtendedReal& lhs) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.vacuous = true;
  r.note = std::move(why);
  settle(r, 0.0);
  return r;
}

inline ExtendedReal lhs_or_inf(const DensityMatrix& rho, const DensityMatrix& sigma, double q) {
  if (!(q > 1.0 && q <= kMaxQ)) return ExtendedReal::infinity();
  return quantum_relative_q(rho, sigma, q);
}

// Under kernel inclusion the restricted trace is finite; +inf here means a
// tolerance bug, not a counterexample.
inline void require_finite_lhs(const BoundReport& r) {
  if (r.lhs.is_infinite())
    throw InternalError(r.name + ": left-hand side is infinite although the kernel-inclusion hypothesis holds");
}

}  // namespace detail

/// Three bounds for strictly positive rho, sigma and 1 < q <= 2:
///   rhs1 = a1^(q-1)/lambda0^q * |D|_inf / (q-1)
///   rhs2 = a1^(q-1)/lambda0^q * |D|_1 / (2(q-1))
///   rhs3 = a1^q/lambda0^q * |D|_1 / (q-1)
inline std::array<BoundReport, 3> thm1_bounds(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                                              double tol = kTolBound) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  const char* names[3] = {"thm1_rhs1", "thm1_rhs2", "thm1_rhs3"};
  std::array<BoundReport, 3> out;
  if (!(q > 1.0 && q <= 2.0) || !rho.full_rank() || !sigma.full_rank()) {
    const ExtendedReal lhs = detail::lhs_or_inf(rho, sigma, q);
    const std::string why = !(q > 1.0 && q <= 2.0) ? "q outside (1,2]" : "a state is not strictly positive";
    for (int i = 0; i < 3; ++i) out[i] = detail::vacuous_report(names[i], why, lhs);
    return out;
  }
  const SpectralSummary c = summarize(rho, sigma);
  const Distances dist = distances(rho, sigma);
  const ExtendedReal lhs = quantum_relative_q(rho, sigma, q);
  const double ratio = std::pow(c.a1, q - 1.0) / std::pow(c.lambda0, q);
  const double rhs[3] = {ratio * dist.spectral_norm / (q - 1.0), ratio * dist.trace_norm / (2.0 * (q - 1.0)),
                         c.a1 * ratio * dist.trace_norm / (q - 1.0)};
  for (int i = 0; i < 3; ++i) {
    BoundReport& r = out[i];
    r.name = names[i];
    r.lhs = lhs;
    r.rhs = ExtendedReal::finite(rhs[i]);
    r.constants = c;
    r.dist = dist;
    detail::require_finite_lhs(r);
    detail::settle(r, tol);
  }
  return out;
}

/// ln_q(x)/(1 - 1/x) with x = b1/b0; its limit 1 is substituted when
/// |x - 1| < 1e-8.
inline double thm2_prefactor(double b0, double b1, double q) {
  const double x = b1 / b0;
  if (std::abs(x - 1.0) < 1e-8) return 1.0;
  return q_log(x, q) / (1.0 - b0 / b1);
}

enum class Thm2Variant { general, traceless };

/// Bound involving only the extreme eigenvalues of sigma, 1 < q <= 2:
///   P * a1^(q-1)/b0^(q-1) * |D|_1 + a1^(q-1)/b0^q * |D|_inf * |D|_1
/// where P = ln_q(b1/b0)/(1 - b0/b1). The traceless variant replaces
/// |D|_inf by |D|_1 / 2.
inline BoundReport thm2_bound(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                              Thm2Variant variant = Thm2Variant::general, double tol = kTolBound,
                              double tol_incl = kTolIncl) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  const std::string name = variant == Thm2Variant::general ? "thm2_rhs" : "thm2tl_rhs";
  if (!(q > 1.0 && q <= 2.0)) return detail::vacuous_report(name, "q outside (1,2]", detail::lhs_or_inf(rho, sigma, q));
  if (!kernel_included(sigma, rho, tol_incl))
    return detail::vacuous_report(name, "ker(sigma) not contained in ker(rho)", ExtendedReal::infinity());
  BoundReport r;
  r.name = name;
  r.constants = summarize(rho, sigma);
  r.dist = distances(rho, sigma);
  r.lhs = quantum_relative_q(rho, sigma, q, tol_incl);
  const auto& c = r.constants;
  const double pref = thm2_prefactor(c.b0, c.b1, q);
  if (std::abs(c.b1 / c.b0 - 1.0) < 1e-8) r.note = "prefactor replaced by its limit 1 (b0 = b1)";
  const double a1q = std::pow(c.a1, q - 1.0);
  const double linear = pref * a1q / std::pow(c.b0, q - 1.0) * r.dist.trace_norm;
  const double second_factor = variant == Thm2Variant::general ? r.dist.spectral_norm : 0.5 * r.dist.trace_norm;
  const double quadratic = a1q / std::pow(c.b0, q) * second_factor * r.dist.trace_norm;
  r.rhs = ExtendedReal::finite(linear + quadratic);
  r.terms = {{"prefactor", pref}, {"linear_term", linear}, {"quadratic_term", quadratic}};
  detail::require_finite_lhs(r);
  detail::settle(r, tol);
  return r;
}

/// (ceil(q) - 1)/(q - 1); at integer q the ceiling is q itself.
inline double thm3_ceiling_factor(double q) {
  if (!(q > 1.0)) throw QOutOfRange("ceiling factor needs q > 1");
  return (std::ceil(q) - 1.0) / (q - 1.0);
}

enum class Thm3Variant { general, q2 };

/// Bound with b0^(1-q) dependence:
///   general: (ceil(q)-1)/(q-1) * lambda1^(q-1)/b0^(q-1) * |D|_1, any q > 1
///   q2:      1/(q-1) * a1^(q-1)/b0^(q-1) * |D|_1,               1 < q <= 2
inline BoundReport thm3_bound(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                              Thm3Variant variant = Thm3Variant::general, double tol = kTolBound,
                              double tol_incl = kTolIncl) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  const std::string name = variant == Thm3Variant::general ? "thm3_rhs" : "thm3q2_rhs";
  const bool q_ok = variant == Thm3Variant::general ? (q > 1.0 && q <= kMaxQ) : (q > 1.0 && q <= 2.0);
  if (!q_ok) return detail::vacuous_report(name, "q outside the admissible range", detail::lhs_or_inf(rho, sigma, q));
  if (!kernel_included(sigma, rho, tol_incl))
    return detail::vacuous_report(name, "ker(sigma) not contained in ker(rho)", ExtendedReal::infinity());
  BoundReport r;
  r.name = name;
  r.constants = summarize(rho, sigma);
  r.dist = distances(rho, sigma);
  r.lhs = quantum_relative_q(rho, sigma, q, tol_incl);
  const auto& c = r.constants;
  double factor = 0.0;
  double top = 0.0;
  if (variant == Thm3Variant::general) {
    factor = thm3_ceiling_factor(q);
    top = c.lambda1;
  } else {
    factor = 1.0 / (q - 1.0);
    top = c.a1;
  }
  r.rhs = ExtendedReal::finite(factor * std::pow(top / c.b0, q - 1.0) * r.dist.trace_norm);
  r.terms = {{"factor", factor}};
  detail::require_finite_lhs(r);
  detail::settle(r, tol);
  return r;
}

/// Lower-bound chain D_p <= D_1 <= D_q and the Pinsker inequality
/// |D|_1^2 / 2 <= D_1 <= D_q, for 1 < q <= 2 and 0 <= p < 1.
inline std::array<BoundReport, 2> lower_bounds(const DensityMatrix& rho, const DensityMatrix& sigma, double q,
                                               double p, double tol = kTolBound) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  std::array<BoundReport, 2> out;
  if (!(q > 1.0 && q <= 2.0) || !(p >= 0.0 && p < 1.0)) {
    const ExtendedReal lhs = ExtendedReal::finite(0.0);
    out[0] = detail::vacuous_report("lower_chain", "q outside (1,2] or p outside [0,1)", lhs);
    out[1] = detail::vacuous_report("pinsker", "q outside (1,2] or p outside [0,1)", lhs);
    return out;
  }
  const SpectralSummary c = summarize(rho, sigma);
  const Distances dist = distances(rho, sigma);
  const ExtendedReal dp = quantum_relative_sub1(rho, sigma, p);
  const ExtendedReal d1 = relative_entropy_vn(rho, sigma);
  const ExtendedReal dq = quantum_relative_q(rho, sigma, q);
  auto leq = [tol](const ExtendedReal& x, const ExtendedReal& y) {
    if (y.is_infinite()) return true;
    if (x.is_infinite()) return false;
    return x.value() <= y.value() + tol * (1.0 + std::abs(y.value()));
  };

  BoundReport& chain = out[0];
  chain.name = "lower_chain";
  chain.lhs = dp;
  chain.rhs = d1;
  chain.constants = c;
  chain.dist = dist;
  chain.terms = {{"D_p", dp.as_double()}, {"D_1", d1.as_double()}, {"D_q", dq.as_double()}};
  if (dp.is_finite() && d1.is_finite()) chain.slack = d1.value() - dp.value();
  chain.holds = leq(dp, d1) && leq(d1, dq);

  BoundReport& pin = out[1];
  const double pinsker = 0.5 * dist.trace_norm * dist.trace_norm;
  pin.name = "pinsker";
  pin.lhs = ExtendedReal::finite(pinsker);
  pin.rhs = d1;
  pin.constants = c;
  pin.dist = dist;
  pin.terms = {{"pinsker_lhs", pinsker}, {"D_1", d1.as_double()}, {"D_q", dq.as_double()}};
  if (d1.is_finite()) pin.slack = d1.value() - pinsker;
  pin.holds = leq(pin.lhs, d1) && leq(d1, dq);
  return out;
}

enum class PowerDiffMode {
  spectral,  // lambda1 = max(|X|_inf, |Y|_inf)
  same_norm  // theta = max(|X|_p, |Y|_p), for a submultiplicative norm
};

namespace detail {

inline Matrix matrix_power(const Matrix& x, int n) {
  Matrix out = Matrix::Identity(x.rows(), x.cols());
  for (int i = 0; i < n; ++i) out = out * x;
  return out;
}

}  // namespace detail

/// |X^n - Y^n|_p <= n c^(n-1) |X - Y|_p with c the larger operator norm.
inline BoundReport power_diff_bound(const HermitianOperator& x, const HermitianOperator& y, int n,
                                    const SchattenIndex& p, PowerDiffMode mode = PowerDiffMode::spectral,
                                    double tol = kTolBound) {
  HermitianOperator::check_same_dim(x, y);
  if (n < 1) throw DomainViolation("power_diff_bound needs n >= 1");
  BoundReport r;
  r.name = mode == PowerDiffMode::spectral ? "lemma2" : "remark1";
  const HermitianOperator diff_n(detail::matrix_power(x.matrix(), n) - detail::matrix_power(y.matrix(), n));
  const HermitianOperator diff = x - y;
  const double c = mode == PowerDiffMode::spectral ? std::max(x.spectral_norm(), y.spectral_norm())
                                                   : std::max(schatten_norm(x, p), schatten_norm(y, p));
  const double dist_p = schatten_norm(diff, p);
  r.lhs = ExtendedReal::finite(n == 1 ? dist_p : schatten_norm(diff_n, p));
  r.rhs = ExtendedReal::finite(n * std::pow(c, n - 1) * dist_p);
  r.dist = {trace_norm(diff), spectral_norm(diff)};
  r.terms = {{"norm_constant", c}, {"p", p.value()}, {"n", static_cast<double>(n)}};
  detail::settle(r, tol);
  return r;
}

/// |tr(B^(1-s) A^s) - tau| <= a1^s / b0^s * |A - B|_1 for PSD A, strictly
/// positive B, tr A = tr B = tau and 0 < s < 1.
inline BoundReport lemma3_bound(const HermitianOperator& a, const HermitianOperator& b, double s,
                                double tol = kTolBound) {
  HermitianOperator::check_same_dim(a, b);
  const char* name = "lemma3";
  const double tau = a.trace().real();
  if (!(s > 0.0 && s < 1.0)) return detail::vacuous_report(name, "s outside (0,1)", ExtendedReal::finite(0.0));
  if (std::abs(tau - b.trace().real()) > 1e-10)
    return detail::vacuous_report(name, "traces differ", ExtendedReal::finite(0.0));
  if (!(b.min_eigenvalue() > b.zero_threshold()))
    return detail::vacuous_report(name, "B is not strictly positive", ExtendedReal::finite(0.0));
  if (a.min_eigenvalue() < -std::max(a.zero_threshold(), kTolPsd))
    return detail::vacuous_report(name, "A is not positive semidefinite", ExtendedReal::finite(0.0));

  const auto a_s = apply_function(a, [s](double x) { return x > 0.0 ? std::pow(x, s) : 0.0; });
  const auto b_1s = power(b, 1.0 - s);
  BoundReport r;
  r.name = name;
  const double trace = (b_1s.matrix() * a_s.matrix()).trace().real();
  r.lhs = ExtendedReal::finite(std::abs(trace - tau));
  const double a1 = std::max(0.0, a.max_eigenvalue());
  const double b0 = b.min_eigenvalue();
  const Distances dist = distances(a, b);
  r.rhs = ExtendedReal::finite(std::pow(a1 / b0, s) * dist.trace_norm);
  r.dist = dist;
  r.terms = {{"tau", tau}, {"a1", a1}, {"b0", b0}};
  detail::settle(r, tol);
  return r;
}

/// Operator-order check A^-r - B^-r <= sin(r pi)/pi int y^-r (y+A)^-1 (B-A) (y+A)^-1 dy.
/// The report's rhs is the minimum eigenvalue of (right side - left side).
inline BoundReport frechet_check(const HermitianOperator& a, const HermitianOperator& b, const QuadratureRule& rule,
                                 double tol_psd = kTolPsd) {
  HermitianOperator::check_same_dim(a, b);
  const char* name = "lemma1";
  if (!(a.min_eigenvalue() > a.zero_threshold()) || !(b.min_eigenvalue() > b.zero_threshold()))
    return detail::vacuous_report(name, "A and B must be strictly positive", ExtendedReal::finite(0.0));
  const double r = rule.r;
  const HermitianOperator lhs_op = power(a, -r) - power(b, -r);
  const HermitianOperator rhs_op = frechet_integral_rhs(a, b - a, rule);
  const double gap = psd_gap(lhs_op, rhs_op);
  BoundReport out;
  out.name = name;
  out.lhs = ExtendedReal::finite(0.0);
  out.rhs = ExtendedReal::finite(gap);
  out.slack = gap;
  out.holds = gap >= -(tol_psd + kQuadratureAllowance);
  out.dist = distances(a, b);
  out.terms = {{"psd_gap", gap}, {"r", r}};
  return out;
}

}  // namespace qtsallis

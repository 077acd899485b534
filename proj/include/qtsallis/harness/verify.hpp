#pragma once

// Randomized verification suites. Every suite draws its instances from
// per-trial RNG streams, so a report depends only on the configuration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtsallis/bounds.hpp"
#include "qtsallis/harness/config.hpp"
#include "qtsallis/harness/generators.hpp"
#include "qtsallis/harness/parallel.hpp"
#include "qtsallis/state_io.hpp"

namespace qtsallis::harness {

struct Counterexample {
  std::vector<std::pair<std::string, Matrix>> operators;
  nlohmann::ordered_json context;
};

/// Outcome of one trial: how many checks ran, how many failed, the smallest
/// slack seen and the first failing instance.
struct TrialResult {
  long checks = 0;
  long failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::optional<Counterexample> counterexample;

  /// Records one check. `make_cex` is only invoked for the first failure.
  template <class MakeCex>
  void check(bool ok, double slack, MakeCex&& make_cex) {
    ++checks;
    if (!std::isnan(slack)) worst_slack = std::min(worst_slack, slack);
    if (!ok) {
      ++failures;
      if (!counterexample) counterexample = make_cex();
    }
  }
  void check(bool ok, double slack) {
    check(ok, slack, [] { return Counterexample{}; });
  }
};

struct SuiteResult {
  std::string name;
  long instances_run = 0;
  long failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string counterexample_path;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.failures == 0; });
  }
  const SuiteResult* find(const std::string& name) const {
    for (const auto& s : suites)
      if (s.name == name) return &s;
    return nullptr;
  }
};

using TrialFn = std::function<TrialResult(Rng&, int trial, const SweepConfig&)>;

struct Suite {
  std::string name;
  int trials;
  TrialFn run;
};

inline std::uint64_t name_salt(const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::filesystem::path counterexample_dir(const SweepConfig& cfg) {
  if (cfg.output_path.empty()) return "counterexamples";
  return std::filesystem::path(cfg.output_path).parent_path() / "counterexamples";
}

inline std::string write_counterexample(const SweepConfig& cfg, const std::string& suite, int trial,
                                        const Counterexample& cex) {
  const auto dir = counterexample_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IOError("cannot create " + dir.string() + ": " + ec.message());
  const std::string stem = suite + "_trial" + std::to_string(trial);
  nlohmann::ordered_json ctx;
  ctx["suite"] = suite;
  ctx["trial"] = trial;
  ctx["root_seed"] = cfg.seed;
  ctx["context"] = cex.context;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& [label, m] : cex.operators) {
    const auto path = dir / (stem + "_" + label + ".json");
    write_state(path, m);
    files.push_back(path.filename().string());
  }
  ctx["operator_files"] = files;
  const auto ctx_path = dir / (stem + "_context.json");
  write_text_file(ctx_path, ctx.dump(2) + "\n");
  return ctx_path.string();
}

/// Runs `suite.trials` trials; trial t draws from Rng(seed ^ salt(name) ^ t).
inline SuiteResult run_suite(const Suite& suite, const SweepConfig& cfg) {
  const std::uint64_t root = cfg.seed ^ name_salt(suite.name);
  auto results = parallel_map(suite.trials, [&](int t) {
    Rng rng = trial_stream(root, static_cast<std::uint64_t>(t));
    return suite.run(rng, t, cfg);
  });
  SuiteResult out;
  out.name = suite.name;
  for (int t = 0; t < suite.trials; ++t) {
    const TrialResult& r = results[t];
    out.instances_run += r.checks;
    out.failures += r.failures;
    out.worst_slack = std::min(out.worst_slack, r.worst_slack);
    if (r.counterexample && out.counterexample_path.empty())
      out.counterexample_path = write_counterexample(cfg, suite.name, t, *r.counterexample);
  }
  return out;
}

namespace suites {

inline int scaled(const SweepConfig& cfg, int per_thousand) {
  return std::max(1, static_cast<int>((static_cast<long>(cfg.trials) * per_thousand + 999) / 1000));
}

inline int random_dim(Rng& rng) { return uniform_int(rng, 2, 8); }

inline Counterexample pair_cex(const DensityMatrix& rho, const DensityMatrix& sigma, nlohmann::ordered_json ctx) {
  return {{{"rho", rho.matrix()}, {"sigma", sigma.matrix()}}, std::move(ctx)};
}

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

inline nlohmann::ordered_json report_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs.to_string();
  j["rhs"] = r.rhs.to_string();
  j["vacuous"] = r.vacuous;
  j["note"] = r.note;
  return j;
}

// ---- linalg -------------------------------------------------------------

inline std::vector<Suite> linalg_suites(const SweepConfig& cfg) {
  const SchattenIndex ps[3] = {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex::infinity()};
  std::vector<Suite> out;
  out.push_back({"linalg.holder", cfg.trials, [ps](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const Matrix x = ginibre(d, d, rng), y = ginibre(d, d, rng), z = ginibre(d, d, rng);
                   const SchattenIndex inf = SchattenIndex::infinity();
                   for (const auto& p : ps) {
                     const double lhs = schatten_norm(Matrix(x * y * z), p);
                     const double rhs = schatten_norm(x, inf) * schatten_norm(y, p) * schatten_norm(z, inf);
                     tr.check(lhs <= rhs + 1e-10 * std::max(1.0, rhs), rhs - lhs, [&] {
                       return Counterexample{{{"X", x}, {"Y", y}, {"Z", z}}, {{"p", p.label()}}};
                     });
                   }
                   return tr;
                 }});
  out.push_back({"linalg.trace_holder", cfg.trials, [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const Matrix x = ginibre(d, d, rng), y = ginibre(d, d, rng), z = ginibre(d, d, rng);
                   const SchattenIndex inf = SchattenIndex::infinity();
                   const double lhs = std::abs((x * y * z).trace());
                   const double rhs = schatten_norm(x, inf) * schatten_norm(z, inf) * schatten_norm(y, SchattenIndex(1.0));
                   tr.check(lhs <= rhs + 1e-10 * std::max(1.0, rhs), rhs - lhs,
                            [&] { return Counterexample{{{"X", x}, {"Y", y}, {"Z", z}}, {}}; });
                   return tr;
                 }});
  out.push_back({"linalg.norm_monotone", cfg.trials, [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const Matrix x = ginibre(d, d, rng);
                   const double p_lo = uniform(rng, 1.0, 4.0);
                   const double p_hi = p_lo + uniform(rng, 0.0, 4.0);
                   const double n_lo = schatten_norm(x, SchattenIndex(p_lo));
                   const double n_hi = schatten_norm(x, SchattenIndex(p_hi));
                   const double n_inf = schatten_norm(x, SchattenIndex::infinity());
                   tr.check(n_hi <= n_lo * (1.0 + 1e-12), n_lo - n_hi);
                   tr.check(n_inf <= n_hi * (1.0 + 1e-12), n_hi - n_inf);
                   return tr;
                 }});
  out.push_back({"linalg.submultiplicative", cfg.trials, [ps](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const Matrix x = ginibre(d, d, rng), y = ginibre(d, d, rng);
                   for (const auto& p : ps) {
                     const double lhs = schatten_norm(Matrix(x * y), p);
                     const double rhs = schatten_norm(x, p) * schatten_norm(y, p);
                     tr.check(lhs <= rhs + 1e-10 * std::max(1.0, rhs), rhs - lhs);
                   }
                   return tr;
                 }});
  out.push_back({"linalg.traceless_half", cfg.trials, [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_kernel_pair(d, rng);
                   const HermitianOperator delta = rho.op() - sigma.op();
                   const double lhs = spectral_norm(delta);
                   const double rhs = 0.5 * trace_norm(delta);
                   tr.check(lhs <= rhs + 1e-12, rhs - lhs, [&] { return pair_cex(rho, sigma, {}); });
                   return tr;
                 }});
  out.push_back({"linalg.spectral_homomorphism", cfg.trials, [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const HermitianOperator h = random_hermitian(d, uniform(rng, 0.1, 2.0), rng);
                   auto g = [](double x) { return std::exp(x); };
                   auto f = [](double x) { return x * x + std::sin(x); };
                   const auto composed = apply_function(h, [&](double x) { return f(g(x)); });
                   const auto nested = apply_function(apply_function(h, g), f);
                   const double scale = std::max(1.0, composed.spectral_norm());
                   const double err = (composed.matrix() - nested.matrix()).cwiseAbs().maxCoeff();
                   tr.check(err <= 1e-10 * scale, 1e-10 * scale - err,
                            [&] { return Counterexample{{{"H", h.matrix()}}, {{"error", err}}}; });
                   return tr;
                 }});
  return out;
}

// ---- quadrature ---------------------------------------------------------

inline std::vector<Suite> quadrature_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  out.push_back({"quadrature.oracle_agreement", scaled(cfg, 200), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const HermitianOperator a = random_positive(d, 6.0, std::pow(10.0, uniform(rng, -2.0, 2.0)), rng);
                   for (double r : {0.1, 0.5, 0.9}) {
                     const QuadratureRule rule(r, c.tol.quad_nodes);
                     const auto spectral = power(a, r);
                     const double scale = std::pow(a.spectral_norm(), r);
                     for (auto form : {PowerForm::first, PowerForm::second}) {
                       const auto quad = frac_power_operator(a, rule, form);
                       const double err = spectral_norm(HermitianOperator(quad.matrix() - spectral.matrix()));
                       tr.check(err <= 1e-8 * scale, 1e-8 * scale - err, [&] {
                         return Counterexample{{{"A", a.matrix()}},
                                               {{"r", r}, {"form", form == PowerForm::first ? "first" : "second"}}};
                       });
                     }
                   }
                   return tr;
                 }});
  out.push_back({"quadrature.forms_agree", scaled(cfg, 200), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const HermitianOperator a = random_positive(d, 6.0, 1.0, rng);
                   const QuadratureRule rule(uniform(rng, 0.05, 0.95), c.tol.quad_nodes);
                   const auto first = frac_power_operator(a, rule, PowerForm::first);
                   const auto second = frac_power_operator(a, rule, PowerForm::second);
                   const double err = spectral_norm(HermitianOperator(first.matrix() - second.matrix()));
                   tr.check(err <= 1e-8, 1e-8 - err, [&] { return Counterexample{{{"A", a.matrix()}}, {{"r", rule.r}}}; });
                   return tr;
                 }});
  out.push_back({"quadrature.resolvent_identity", scaled(cfg, 200), [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   const double r = uniform(rng, 0.05, 0.95);
                   const double b0 = std::pow(10.0, -uniform(rng, 0.0, 6.0));
                   // every fourth trial exercises the a0 = b0 limit
                   const double a0 = t % 4 == 0 ? b0 : b0 * std::pow(10.0, uniform(rng, 0.0, 6.0));
                   const QuadratureRule rule(r, c.tol.quad_nodes);
                   const double quad = resolvent_product_integral(a0, b0, rule);
                   const double closed = resolvent_product_closed_form(a0, b0, r);
                   const double q = r + 1.0;
                   const double envelope = std::pow(std::min(a0, b0), -q);
                   nlohmann::ordered_json ctx{{"a0", a0}, {"b0", b0}, {"r", r}};
                   tr.check(std::abs(quad - closed) <= 1e-10 * std::abs(closed), 1e-10 * std::abs(closed) - std::abs(quad - closed),
                            [&] { return Counterexample{{}, ctx}; });
                   tr.check(closed <= envelope * (1.0 + 1e-12), envelope - closed, [&] { return Counterexample{{}, ctx}; });
                   return tr;
                 }});
  out.push_back({"quadrature.scalar_fixtures", 1, [](Rng&, int, const SweepConfig& c) {
                   TrialResult tr;
                   const double v1 = frac_power_scalar(4.0, QuadratureRule(0.5, c.tol.quad_nodes));
                   const double v2 = frac_power_scalar(8.0, QuadratureRule(1.0 / 3.0, c.tol.quad_nodes));
                   const double v3 = frac_power_scalar(1.0, QuadratureRule(0.37, c.tol.quad_nodes));
                   tr.check(std::abs(v1 - 2.0) <= 1e-10, 1e-10 - std::abs(v1 - 2.0));
                   tr.check(std::abs(v2 - 2.0) <= 1e-10, 1e-10 - std::abs(v2 - 2.0));
                   tr.check(std::abs(v3 - 1.0) <= 1e-10, 1e-10 - std::abs(v3 - 1.0));
                   return tr;
                 }});
  return out;
}

// ---- states -------------------------------------------------------------

inline void check_density_invariants(TrialResult& tr, const DensityMatrix& rho) {
  const RealVector& s = rho.spectrum();
  const double sum_err = std::abs(s.sum() - 1.0);
  tr.check(s.minCoeff() >= 0.0, s.minCoeff());
  tr.check(sum_err <= 1e-10, 1e-10 - sum_err);
  const HermitianOperator proj = rho.support_projector();
  const double idem = (proj.matrix() * proj.matrix() - proj.matrix()).cwiseAbs().maxCoeff();
  tr.check(idem <= kTolPsd, kTolPsd - idem);
  const double tr_err = std::abs(proj.trace().real() - rho.rank());
  tr.check(tr_err <= kTolPsd, kTolPsd - tr_err);
  int nonzero = 0;
  for (double x : s) nonzero += x > 0.0;
  tr.check(nonzero == rho.rank(), 0.0);
}

inline std::vector<Suite> states_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  out.push_back({"states.invariants", cfg.trials, [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const int rank = uniform_int(rng, 1, d);
                   const DensityMatrix a = sample_density(d, rank, rng);
                   check_density_invariants(tr, a);
                   tr.check(a.rank() == rank, 0.0, [&] { return Counterexample{{{"rho", a.matrix()}}, {{"rank", rank}}}; });
                   const auto spec = log_uniform_spectrum(d, 5.0, rng);
                   const DensityMatrix b = density_with_spectrum(spec, rng);
                   check_density_invariants(tr, b);
                   std::vector<double> sorted = spec;
                   std::sort(sorted.begin(), sorted.end());
                   double err = 0.0;
                   for (int i = 0; i < d; ++i) err = std::max(err, std::abs(sorted[i] - b.spectrum()(i)));
                   tr.check(err <= 1e-10, 1e-10 - err);
                   auto [rho, sigma] = random_kernel_pair(d, rng);
                   check_density_invariants(tr, rho);
                   check_density_invariants(tr, sigma);
                   tr.check(kernel_included(sigma, rho), 0.0, [&] { return pair_cex(rho, sigma, {}); });
                   tr.check(kernel_included(rho, rho) && kernel_included(sigma, sigma), 0.0);
                   const DensityMatrix m = mix(rho, sigma, uniform(rng, 0.0, 1.0));
                   check_density_invariants(tr, m);
                   return tr;
                 }});
  return out;
}

// ---- entropy ------------------------------------------------------------

inline std::vector<Suite> entropy_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  out.push_back({"entropy.positivity", cfg.trials, [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_kernel_pair(d, rng);
                   if (t % 10 == 0) rho = sigma;
                   const double q = uniform(rng, 1.0, 6.0) + 1e-9;
                   const ExtendedReal dq = quantum_relative_q(rho, sigma, q, c.tol.tol_incl);
                   const double dist = trace_norm(rho.op() - sigma.op());
                   auto cex = [&] { return pair_cex(rho, sigma, {{"q", q}, {"D_q", dq.to_string()}}); };
                   tr.check(dq.is_finite(), 0.0, cex);
                   if (dq.is_infinite()) return tr;
                   tr.check(dq.value() >= -1e-10, dq.value(), cex);
                   if (dist > 1e-8)
                     tr.check(dq.value() > 0.0, dq.value(), cex);
                   else
                     tr.check(std::abs(dq.value()) <= 1e-10, 1e-10 - std::abs(dq.value()), cex);
                   return tr;
                 }});
  out.push_back({"entropy.pseudoadditivity", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   auto [r1, s1] = random_kernel_pair(uniform_int(rng, 2, 4), rng);
                   auto [r2, s2] = random_kernel_pair(uniform_int(rng, 2, 4), rng);
                   const double q = uniform(rng, 1.0, 3.0) + 1e-9;
                   const auto d1 = quantum_relative_q(r1, s1, q, c.tol.tol_incl);
                   const auto d2 = quantum_relative_q(r2, s2, q, c.tol.tol_incl);
                   const auto d12 = quantum_relative_q(tensor(r1, r2), tensor(s1, s2), q, c.tol.tol_incl);
                   if (d1.is_infinite() || d2.is_infinite()) {
                     tr.check(d12.is_infinite(), 0.0);
                     return tr;
                   }
                   const double expected = d1.value() + d2.value() + (q - 1.0) * d1.value() * d2.value();
                   const bool ok = d12.is_finite() && rel_close(d12.value(), expected, 1e-9);
                   tr.check(ok, d12.is_finite() ? -std::abs(d12.value() - expected) : 0.0, [&] {
                     return Counterexample{{{"rho1", r1.matrix()}, {"sigma1", s1.matrix()}, {"rho2", r2.matrix()}, {"sigma2", s2.matrix()}},
                                           {{"q", q}}};
                   });
                   return tr;
                 }});
  out.push_back({"entropy.joint_convexity", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [r1, s1] = random_full_rank_pair(d, rng);
                   auto [r2, s2] = random_full_rank_pair(d, rng);
                   const double q = uniform(rng, 1.0, 2.0) + 1e-9;
                   const double lam = uniform(rng, 0.0, 1.0);
                   const double lhs = quantum_relative_q(mix(r1, r2, lam), mix(s1, s2, lam), q, c.tol.tol_incl).value();
                   const double rhs = lam * quantum_relative_q(r1, s1, q).value() +
                                      (1.0 - lam) * quantum_relative_q(r2, s2, q).value();
                   tr.check(lhs <= rhs + 1e-9 * (1.0 + rhs), rhs - lhs, [&] {
                     return Counterexample{{{"rho1", r1.matrix()}, {"sigma1", s1.matrix()}, {"rho2", r2.matrix()}, {"sigma2", s2.matrix()}},
                                           {{"q", q}, {"lambda", lam}}};
                   });
                   return tr;
                 }});
  out.push_back({"entropy.partial_trace_monotonicity", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int da = uniform_int(rng, 2, 3);
                   const int db = uniform_int(rng, 2, 3);
                   auto [rho, sigma] = random_full_rank_pair(da * db, rng);
                   const double q = uniform(rng, 1.0, 2.0) + 1e-9;
                   const Subsystem keep = uniform_int(rng, 0, 1) ? Subsystem::A : Subsystem::B;
                   const double full = quantum_relative_q(rho, sigma, q, c.tol.tol_incl).value();
                   const double reduced = quantum_relative_q(partial_trace(rho, da, db, keep),
                                                             partial_trace(sigma, da, db, keep), q, c.tol.tol_incl)
                                              .value();
                   tr.check(reduced <= full + 1e-9 * (1.0 + full), full - reduced, [&] {
                     return pair_cex(rho, sigma, {{"q", q}, {"dA", da}, {"dB", db}, {"keep", keep == Subsystem::A ? "A" : "B"}});
                   });
                   return tr;
                 }});
  out.push_back({"entropy.q_to_one", scaled(cfg, 20), [](Rng& rng, int, const SweepConfig&) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_full_rank_pair(d, rng);
                   const double d1 = relative_entropy_vn(rho, sigma).value();
                   double first_ratio = 0.0;
                   for (int k = 2; k <= 5; ++k) {
                     const double eps = std::pow(10.0, -k);
                     const double ratio = std::abs(quantum_relative_q(rho, sigma, 1.0 + eps).value() - d1) / eps;
                     if (k == 2) first_ratio = ratio;
                     // 1e-10 absolute is the rounding floor of the two sums
                     const double bound = 2.0 * first_ratio + 1e-10 * (1.0 + d1) / eps;
                     tr.check(ratio <= bound, bound - ratio, [&] { return pair_cex(rho, sigma, {{"k", k}, {"ratio", ratio}}); });
                   }
                   return tr;
                 }});
  out.push_back({"entropy.classical_reduction", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   std::vector<double> a = log_uniform_spectrum(d, 3.0, rng);
                   std::vector<double> b = log_uniform_spectrum(d, 3.0, rng);
                   if (uniform_int(rng, 0, 2) == 0) {
                     // a shared zero keeps the finite branch; a zero of b alone gives +inf
                     const int z = uniform_int(rng, 0, d - 1);
                     const bool shared = uniform_int(rng, 0, 1);
                     auto renorm = [](std::vector<double>& p, int zero) {
                       p[zero] = 0.0;
                       double s = 0.0;
                       for (double x : p) s += x;
                       for (double& x : p) x /= s;
                     };
                     renorm(b, z);
                     if (shared) renorm(a, z);
                   }
                   const double q = uniform(rng, 1.0, 4.0) + 1e-9;
                   const Matrix u = haar_unitary(d, rng);
                   auto embed = [&](const std::vector<double>& p) {
                     RealVector v = Eigen::Map<const RealVector>(p.data(), d);
                     return DensityMatrix::from_matrix(from_eigensystem(u, v));
                   };
                   const DensityMatrix rho = embed(a), sigma = embed(b);
                   const auto quantum = quantum_relative_q(rho, sigma, q, c.tol.tol_incl);
                   const auto classical = classical_relative_q(ProbVector(a), ProbVector(b), q);
                   bool ok = quantum.is_infinite() == classical.is_infinite();
                   double slack = 0.0;
                   if (ok && quantum.is_finite()) {
                     ok = rel_close(quantum.value(), classical.value(), 1e-10);
                     slack = -std::abs(quantum.value() - classical.value());
                   }
                   tr.check(ok, slack, [&] {
                     return pair_cex(rho, sigma, {{"q", q}, {"quantum", quantum.to_string()}, {"classical", classical.to_string()}});
                   });
                   return tr;
                 }});
  out.push_back({"entropy.unitary_invariance", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_kernel_pair(d, rng);
                   const double q = uniform(rng, 1.0, 4.0) + 1e-9;
                   const Matrix u = haar_unitary(d, rng);
                   const auto before = quantum_relative_q(rho, sigma, q, c.tol.tol_incl);
                   const auto after = quantum_relative_q(conjugate(rho, u), conjugate(sigma, u), q, c.tol.tol_incl);
                   bool ok = before.is_infinite() == after.is_infinite();
                   double slack = 0.0;
                   if (ok && before.is_finite()) {
                     ok = rel_close(after.value(), before.value(), 1e-9);
                     slack = -std::abs(after.value() - before.value());
                   }
                   tr.check(ok, slack, [&] { return pair_cex(rho, sigma, {{"q", q}}); });
                   return tr;
                 }});
  out.push_back({"entropy.operator_route", cfg.trials, [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_kernel_pair(d, rng);
                   const double q = uniform(rng, 1.0, 4.0) + 1e-9;
                   const double v = quantum_relative_q(rho, sigma, q, c.tol.tol_incl).value();
                   const double op = (1.0 - operator_route_trace(rho, sigma, q)) / (1.0 - q);
                   // both routes carry an absolute error of order eps d |rho^q| |sigma^(1-q)|
                   const double conditioning = 64.0 * std::numeric_limits<double>::epsilon() * d *
                                               std::pow(rho.max_eigenvalue(), q) *
                                               std::pow(sigma.min_nonzero_eigenvalue(), 1.0 - q) / (q - 1.0);
                   const double tol = 1e-9 * (1.0 + std::abs(v)) + conditioning;
                   const double err = std::abs(op - v);
                   tr.check(err <= tol, tol - err, [&] { return pair_cex(rho, sigma, {{"q", q}, {"error", err}}); });
                   return tr;
                 }});
  return out;
}

// ---- bounds -------------------------------------------------------------

inline double sample_q_unit(Rng& rng, int t) { return t % 10 == 0 ? 2.0 : uniform(rng, 1.0, 2.0) + 1e-9; }

inline void check_report(TrialResult& tr, const BoundReport& r, const DensityMatrix& rho, const DensityMatrix& sigma,
                         double q) {
  tr.check(r.holds && !r.vacuous, r.slack.value_or(0.0),
           [&] { return pair_cex(rho, sigma, {{"q", q}, {"report", report_json(r)}}); });
}

inline std::vector<Suite> bound_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  out.push_back({"bounds.thm1", cfg.trials, [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   auto [rho, sigma] = random_full_rank_pair(d, rng);
                   const double q = sample_q_unit(rng, t);
                   const auto reps = thm1_bounds(rho, sigma, q, c.tol.tol_bound);
                   for (const auto& r : reps) check_report(tr, r, rho, sigma, q);
                   const double r1 = reps[0].rhs.as_double(), r2 = reps[1].rhs.as_double();
                   tr.check(r1 <= r2 * (1.0 + 1e-10), r2 - r1,
                            [&] { return pair_cex(rho, sigma, {{"q", q}, {"ordering", "rhs1 > rhs2"}}); });
                   return tr;
                 }});
  for (auto variant : {Thm2Variant::general, Thm2Variant::traceless}) {
    const std::string name = variant == Thm2Variant::general ? "bounds.thm2" : "bounds.thm2_traceless";
    out.push_back({name, cfg.trials, [variant](Rng& rng, int t, const SweepConfig& c) {
                     TrialResult tr;
                     auto [rho, sigma] = random_kernel_pair(random_dim(rng), rng);
                     const double q = sample_q_unit(rng, t);
                     check_report(tr, thm2_bound(rho, sigma, q, variant, c.tol.tol_bound, c.tol.tol_incl), rho, sigma, q);
                     return tr;
                   }});
  }
  out.push_back({"bounds.thm3", cfg.trials, [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   auto [rho, sigma] = random_kernel_pair(random_dim(rng), rng);
                   double q = 0.0;
                   if (t % 10 == 0)
                     q = static_cast<double>(uniform_int(rng, 2, 6));
                   else if (t % 2 == 0)
                     q = uniform(rng, 1.0, 2.0) + 1e-9;
                   else
                     q = uniform(rng, 2.0, 6.0) + 1e-9;
                   check_report(tr, thm3_bound(rho, sigma, q, Thm3Variant::general, c.tol.tol_bound, c.tol.tol_incl), rho,
                                sigma, q);
                   return tr;
                 }});
  out.push_back({"bounds.thm3_q2", cfg.trials, [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   auto [rho, sigma] = random_kernel_pair(random_dim(rng), rng);
                   const double q = sample_q_unit(rng, t);
                   check_report(tr, thm3_bound(rho, sigma, q, Thm3Variant::q2, c.tol.tol_bound, c.tol.tol_incl), rho, sigma,
                                q);
                   return tr;
                 }});
  out.push_back({"bounds.lower_chain_pinsker", cfg.trials, [](Rng& rng, int t, const SweepConfig& c) {
                   TrialResult tr;
                   auto [rho, sigma] = random_kernel_pair(random_dim(rng), rng);
                   const double q = sample_q_unit(rng, t);
                   const double p = t % 7 == 0 ? 0.0 : uniform(rng, 0.0, 1.0);
                   for (const auto& r : lower_bounds(rho, sigma, q, p, c.tol.tol_bound)) check_report(tr, r, rho, sigma, q);
                   return tr;
                 }});
  out.push_back({"bounds.lemma1", scaled(cfg, 200), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = uniform_int(rng, 2, 6);
                   const double scale = std::pow(10.0, uniform(rng, -1.0, 1.0));
                   const HermitianOperator a = random_positive(d, 3.0, scale, rng);
                   const HermitianOperator b = random_positive(d, 3.0, scale, rng);
                   for (double r : {0.1, 0.5, 0.9}) {
                     const auto rep = frechet_check(a, b, QuadratureRule(r, c.tol.quad_nodes), c.tol.tol_psd);
                     tr.check(rep.holds && !rep.vacuous, rep.slack.value_or(0.0), [&] {
                       return Counterexample{{{"A", a.matrix()}, {"B", b.matrix()}}, {{"r", r}, {"report", report_json(rep)}}};
                     });
                   }
                   return tr;
                 }});
  out.push_back({"bounds.lemma2", scaled(cfg, 500), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const HermitianOperator x = random_hermitian(d, uniform(rng, 0.1, 2.0), rng);
                   const HermitianOperator y = uniform_int(rng, 0, 2) == 0
                                                   ? HermitianOperator(x.matrix() + 1e-4 * random_hermitian(d, 1.0, rng).matrix())
                                                   : random_hermitian(d, uniform(rng, 0.1, 2.0), rng);
                   const SchattenIndex ps[3] = {SchattenIndex(1.0), SchattenIndex(2.0), SchattenIndex::infinity()};
                   for (int n = 1; n <= 6; ++n)
                     for (const auto& p : ps)
                       for (auto mode : {PowerDiffMode::spectral, PowerDiffMode::same_norm}) {
                         const auto rep = power_diff_bound(x, y, n, p, mode, c.tol.tol_bound);
                         tr.check(rep.holds, rep.slack.value_or(0.0), [&] {
                           return Counterexample{{{"X", x.matrix()}, {"Y", y.matrix()}}, {{"n", n}, {"report", report_json(rep)}}};
                         });
                       }
                   return tr;
                 }});
  out.push_back({"bounds.lemma2_homogeneity", scaled(cfg, 500), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const HermitianOperator x = random_hermitian(d, 1.0, rng);
                   const HermitianOperator y = random_hermitian(d, 1.0, rng);
                   const int n = uniform_int(rng, 1, 6);
                   const double k = uniform(rng, 0.2, 3.0);
                   const SchattenIndex p(2.0);
                   const auto base = power_diff_bound(x, y, n, p, PowerDiffMode::spectral, c.tol.tol_bound);
                   const auto scaled_rep =
                       power_diff_bound(k * x, k * y, n, p, PowerDiffMode::spectral, c.tol.tol_bound);
                   const double kn = std::pow(k, n);
                   const bool ok = rel_close(scaled_rep.lhs.value(), kn * base.lhs.value(), 1e-9) &&
                                   rel_close(scaled_rep.rhs.value(), kn * base.rhs.value(), 1e-9) &&
                                   scaled_rep.holds == base.holds;
                   tr.check(ok, 0.0);
                   return tr;
                 }});
  out.push_back({"bounds.lemma3", scaled(cfg, 500), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const int d = random_dim(rng);
                   const double tau = uniform(rng, 0.5, 3.0);
                   const int rank = uniform_int(rng, 1, d);
                   const DensityMatrix a_state = sample_density(d, rank, rng);
                   const DensityMatrix b_state = uniform_int(rng, 0, 2) == 0 ? mix(random_full_rank(d, rng), a_state, 0.01)
                                                                            : random_full_rank(d, rng);
                   const HermitianOperator a(tau * a_state.matrix());
                   const HermitianOperator b(tau * b_state.matrix());
                   for (double s : {0.25, 0.5, 0.75}) {
                     const auto rep = lemma3_bound(a, b, s, c.tol.tol_bound);
                     tr.check(rep.holds && !rep.vacuous, rep.slack.value_or(0.0), [&] {
                       return Counterexample{{{"A", a.matrix()}, {"B", b.matrix()}}, {{"s", s}, {"report", report_json(rep)}}};
                     });
                   }
                   return tr;
                 }});
  return out;
}

// ---- sweeps over the sigma(b0) family -----------------------------------

/// D_q <= thm3 rhs at every (q, b0), i.e. D_q b0^(q-1) stays under the
/// constant (ceil(q)-1)/(q-1) lambda1^(q-1) |D|_1; for q <= 2 also
/// D_q lambda0^q <= a1^(q-1) |D|_inf / (q-1).
inline std::vector<Suite> sweep_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  constexpr int d = 4;
  out.push_back({"sweep.divergence_envelope", scaled(cfg, 10), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const DensityMatrix rho = sample_density(d, d, rng);
                   for (double q : c.q_grid)
                     for (double b0 : c.b0_grid) {
                       if (b0 > 1.0 / d) continue;
                       const DensityMatrix sigma = sigma_family(d, b0);
                       const auto rep = thm3_bound(rho, sigma, q, Thm3Variant::general, c.tol.tol_bound, c.tol.tol_incl);
                       const double dq = rep.lhs.value();
                       const double ratio = dq * std::pow(b0, q - 1.0);
                       const double constant = thm3_ceiling_factor(q) * std::pow(rep.constants.lambda1, q - 1.0) * rep.dist.trace_norm;
                       const double allowance = c.tol.tol_bound * (std::pow(b0, q - 1.0) + constant);
                       auto cex = [&] { return pair_cex(rho, sigma, {{"q", q}, {"b0", b0}, {"ratio", ratio}, {"constant", constant}}); };
                       tr.check(rep.holds && !rep.vacuous, rep.slack.value_or(0.0), cex);
                       tr.check(ratio <= constant + allowance, constant - ratio, cex);
                       if (q <= 2.0) {
                         const double lam0 = rep.constants.lambda0;
                         const double envelope = std::pow(rep.constants.a1, q - 1.0) * rep.dist.spectral_norm / (q - 1.0);
                         const double scaled_dq = dq * std::pow(lam0, q);
                         tr.check(scaled_dq <= envelope + c.tol.tol_bound * (std::pow(lam0, q) + envelope), envelope - scaled_dq, cex);
                       }
                     }
                   return tr;
                 }});
  out.push_back({"sweep.tightness_crossover", scaled(cfg, 10), [](Rng& rng, int, const SweepConfig& c) {
                   TrialResult tr;
                   const DensityMatrix rho = sample_density(d, d, rng);
                   const double q = 2.0;
                   for (double b0 : c.b0_grid) {
                     if (b0 > 1e-3) continue;
                     const DensityMatrix sigma = sigma_family(d, b0);
                     const auto q2_form = thm3_bound(rho, sigma, q, Thm3Variant::q2, c.tol.tol_bound, c.tol.tol_incl);
                     const auto b0_b1_form = thm2_bound(rho, sigma, q, Thm2Variant::general, c.tol.tol_bound, c.tol.tol_incl);
                     const double a = q2_form.rhs.value(), b = b0_b1_form.rhs.value();
                     tr.check(a < b, b - a, [&] { return pair_cex(rho, sigma, {{"b0", b0}, {"thm3q2_rhs", a}, {"thm2_rhs", b}}); });
                   }
                   return tr;
                 }});
  return out;
}

}  // namespace suites

inline std::vector<Suite> all_suites(const SweepConfig& cfg) {
  std::vector<Suite> out;
  for (auto&& group : {suites::linalg_suites(cfg), suites::quadrature_suites(cfg), suites::states_suites(cfg),
                       suites::entropy_suites(cfg), suites::bound_suites(cfg), suites::sweep_suites(cfg)})
    for (auto& s : group) out.push_back(s);
  return out;
}

inline VerifyReport cmd_verify(const SweepConfig& cfg) {
  validate(cfg);
  VerifyReport report;
  report.seed = cfg.seed;
  for (const auto& suite : all_suites(cfg)) report.suites.push_back(run_suite(suite, cfg));
  return report;
}

inline std::string verify_report_json(const VerifyReport& r) {
  nlohmann::ordered_json j;
  j["root_seed"] = r.seed;
  j["passed"] = r.passed();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : r.suites) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["instances_run"] = s.instances_run;
    e["failures"] = s.failures;
    if (std::isfinite(s.worst_slack))
      e["worst_slack"] = s.worst_slack;
    else
      e["worst_slack"] = nullptr;
    if (!s.counterexample_path.empty()) e["counterexample_path"] = s.counterexample_path;
    arr.push_back(e);
  }
  j["suites"] = arr;
  return j.dump(2) + "\n";
}

}  // namespace qtsallis::harness

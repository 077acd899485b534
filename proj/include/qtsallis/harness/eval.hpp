#pragma once

// Single-pair evaluation and random state generation.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtsallis/bounds.hpp"
#include "qtsallis/harness/generators.hpp"

namespace qtsallis::harness {

namespace detail {

inline nlohmann::ordered_json ext(const ExtendedReal& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

inline nlohmann::ordered_json rhs_or_null(const BoundReport& r) {
  if (r.vacuous) return nullptr;
  return ext(r.rhs);
}

inline nlohmann::ordered_json report_to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["lhs"] = ext(r.lhs);
  j["rhs"] = ext(r.rhs);
  if (r.slack)
    j["slack"] = *r.slack;
  else
    j["slack"] = nullptr;
  j["holds"] = r.holds;
  j["vacuous"] = r.vacuous;
  nlohmann::ordered_json terms = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.terms) terms[k] = v;
  j["terms"] = terms;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace detail

struct EvalOptions {
  std::vector<double> q_values{2.0};
  double p = 0.5;
  double tol_bound = kTolBound;
  double tol_incl = kTolIncl;
};

/// Every divergence and bound for one pair, as a JSON document.
inline nlohmann::ordered_json cmd_eval(const DensityMatrix& rho, const DensityMatrix& sigma, const EvalOptions& opt = {}) {
  HermitianOperator::check_same_dim(rho.op(), sigma.op());
  if (opt.q_values.empty()) throw ConfigError("eval needs at least one q");
  for (double q : opt.q_values)
    if (!(q > 1.0 && q <= kMaxQ)) throw QOutOfRange("q must lie in (1, 40], got " + qtsallis::detail::fmt_double(q));
  const SpectralSummary c = summarize(rho, sigma);
  const Distances dist = distances(rho, sigma);
  nlohmann::ordered_json j;
  j["dim"] = rho.dim();
  j["spectral_summary"] = {{"a1", c.a1}, {"b1", c.b1}, {"b0", c.b0}, {"lambda0", c.lambda0}, {"lambda1", c.lambda1}};
  j["distances"] = {{"trace_norm", dist.trace_norm}, {"spectral_norm", dist.spectral_norm}};
  j["kernel_included"] = kernel_included(sigma, rho, opt.tol_incl);
  j["D1"] = detail::ext(relative_entropy_vn(rho, sigma, opt.tol_incl));
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (double q : opt.q_values) {
    std::vector<BoundReport> reps;
    for (auto& r : thm1_bounds(rho, sigma, q, opt.tol_bound)) reps.push_back(r);
    reps.push_back(thm2_bound(rho, sigma, q, Thm2Variant::general, opt.tol_bound, opt.tol_incl));
    reps.push_back(thm2_bound(rho, sigma, q, Thm2Variant::traceless, opt.tol_bound, opt.tol_incl));
    reps.push_back(thm3_bound(rho, sigma, q, Thm3Variant::general, opt.tol_bound, opt.tol_incl));
    reps.push_back(thm3_bound(rho, sigma, q, Thm3Variant::q2, opt.tol_bound, opt.tol_incl));
    for (auto& r : lower_bounds(rho, sigma, q, opt.p, opt.tol_bound)) reps.push_back(r);
    bool holds = true;
    for (const auto& r : reps) holds = holds && r.holds;
    nlohmann::ordered_json e;
    e["q"] = q;
    e["D_q"] = detail::ext(quantum_relative_q(rho, sigma, q, opt.tol_incl));
    e["holds"] = holds;
    e["thm1_rhs1"] = detail::rhs_or_null(reps[0]);
    e["thm1_rhs2"] = detail::rhs_or_null(reps[1]);
    e["thm1_rhs3"] = detail::rhs_or_null(reps[2]);
    e["thm2_rhs"] = detail::rhs_or_null(reps[3]);
    e["thm2_traceless_rhs"] = detail::rhs_or_null(reps[4]);
    e["thm3_rhs"] = detail::rhs_or_null(reps[5]);
    e["thm3_q2_rhs"] = detail::rhs_or_null(reps[6]);
    e["pinsker_lhs"] = 0.5 * dist.trace_norm * dist.trace_norm;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reps) arr.push_back(detail::report_to_json(r));
    e["reports"] = arr;
    results.push_back(e);
  }
  j["results"] = results;
  return j;
}

/// Random state of dimension d and the given rank, drawn from Rng(seed).
inline DensityMatrix cmd_gen(int d, int rank, std::uint64_t seed) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  if (rank < 1 || rank > d) throw ConfigError("rank must lie in [1, d]");
  Rng rng(seed);
  return sample_density(d, rank, rng);
}

}  // namespace qtsallis::harness

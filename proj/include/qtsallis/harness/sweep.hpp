#pragma once

// CSV sweep over dimension, q and the sigma(b0) family.

#include <cmath>
#include <optional>
#include <string>

#include "qtsallis/bounds.hpp"
#include "qtsallis/harness/config.hpp"
#include "qtsallis/harness/generators.hpp"

namespace qtsallis::harness {

inline constexpr const char* kSweepColumns =
    "d,q,b0,trial,seed,Dq,D1,dist_tr,dist_sp,thm1_rhs1,thm1_rhs2,thm1_rhs3,thm2_rhs,thm2tl_rhs,thm3_rhs,thm3q2_rhs,"
    "pinsker_lhs,ratio_dq_b0,vacuous";

namespace detail {

inline std::string cell(const BoundReport& r) { return r.vacuous ? "nan" : qtsallis::detail::fmt_double(r.rhs.as_double()); }
inline std::string cell(double v) { return qtsallis::detail::fmt_double(v); }
inline std::string cell(const ExtendedReal& v) { return v.to_string(); }

}  // namespace detail

/// One CSV row per (d, q, b0, trial), in that nesting order. The state rho
/// for (d, trial) is drawn from stream seed ^ trial unless `rho_override`
/// is given, in which case only its dimension is swept.
inline std::string cmd_sweep(const SweepConfig& cfg, const std::optional<DensityMatrix>& rho_override = std::nullopt) {
  SweepConfig checked = cfg;
  if (rho_override) checked.dims = {rho_override->dim()};
  validate(checked);
  std::string out = "# root_seed=" + std::to_string(cfg.seed) + "\n";
  auto echo = to_json(checked);
  echo.erase("output_path");
  out += "# config=" + echo.dump() + "\n";
  out += kSweepColumns;
  out += "\n";
  std::vector<int> dims = cfg.dims;
  if (rho_override) dims = {rho_override->dim()};
  for (int d : dims) {
    for (double q : cfg.q_grid) {
      for (double b0 : cfg.b0_grid) {
        if (b0 > 1.0 / d) throw ConfigError("b0 " + qtsallis::detail::fmt_double(b0) + " exceeds 1/d for d = " + std::to_string(d));
        const DensityMatrix sigma = sigma_family(d, b0);
        for (int t = 0; t < cfg.trials; ++t) {
          const std::uint64_t stream = cfg.seed ^ static_cast<std::uint64_t>(t);
          Rng rng = trial_stream(cfg.seed, static_cast<std::uint64_t>(t));
          const DensityMatrix rho = rho_override ? *rho_override : sample_density(d, d, rng);
          const auto& tol = cfg.tol;
          const ExtendedReal dq = quantum_relative_q(rho, sigma, q, tol.tol_incl);
          const ExtendedReal d1 = relative_entropy_vn(rho, sigma, tol.tol_incl);
          const Distances dist = distances(rho, sigma);
          const auto t1 = thm1_bounds(rho, sigma, q, tol.tol_bound);
          const auto t2 = thm2_bound(rho, sigma, q, Thm2Variant::general, tol.tol_bound, tol.tol_incl);
          const auto t2tl = thm2_bound(rho, sigma, q, Thm2Variant::traceless, tol.tol_bound, tol.tol_incl);
          const auto t3 = thm3_bound(rho, sigma, q, Thm3Variant::general, tol.tol_bound, tol.tol_incl);
          const auto t3q2 = thm3_bound(rho, sigma, q, Thm3Variant::q2, tol.tol_bound, tol.tol_incl);
          std::string vacuous;
          for (const BoundReport* r : {&t1[0], &t1[1], &t1[2], &t2, &t2tl, &t3, &t3q2})
            if (r->vacuous) vacuous += (vacuous.empty() ? "" : ";") + r->name;
          if (vacuous.empty()) vacuous = "-";
          const std::string ratio = dq.is_finite() ? detail::cell(dq.value() * std::pow(b0, q - 1.0)) : "inf";
          out += std::to_string(d) + "," + detail::cell(q) + "," + detail::cell(b0) + "," + std::to_string(t) + "," +
                 std::to_string(stream) + "," + detail::cell(dq) + "," + detail::cell(d1) + "," +
                 detail::cell(dist.trace_norm) + "," + detail::cell(dist.spectral_norm) + "," + detail::cell(t1[0]) + "," +
                 detail::cell(t1[1]) + "," + detail::cell(t1[2]) + "," + detail::cell(t2) + "," + detail::cell(t2tl) + "," +
                 detail::cell(t3) + "," + detail::cell(t3q2) + "," +
                 detail::cell(0.5 * dist.trace_norm * dist.trace_norm) + "," + ratio + "," + vacuous + "\n";
        }
      }
    }
  }
  return out;
}

}  // namespace qtsallis::harness

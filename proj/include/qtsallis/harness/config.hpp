#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtsallis/bounds.hpp"

namespace qtsallis::harness {

struct Tolerances {
  double tol_incl = kTolIncl;
  double tol_bound = kTolBound;
  double tol_psd = kTolPsd;
  int quad_nodes = 64;
};

struct SweepConfig {
  std::vector<int> dims{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> q_grid{1.5, 2.0, 3.0};
  std::vector<double> b0_grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  int trials = 1000;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::string output_path;
};

inline nlohmann::ordered_json to_json(const SweepConfig& c) {
  nlohmann::ordered_json j;
  j["dims"] = c.dims;
  j["q_grid"] = c.q_grid;
  j["b0_grid"] = c.b0_grid;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["tolerances"] = {{"tol_incl", c.tol.tol_incl},
                     {"tol_bound", c.tol.tol_bound},
                     {"tol_psd", c.tol.tol_psd},
                     {"quad_nodes", c.tol.quad_nodes}};
  j["output_path"] = c.output_path;
  return j;
}

/// Overlays the keys present in `j` onto `base`. Unknown keys and wrong
/// types raise ConfigError.
inline SweepConfig merge_json(SweepConfig base, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dims") {
        base.dims = value.get<std::vector<int>>();
      } else if (key == "q_grid") {
        base.q_grid = value.get<std::vector<double>>();
      } else if (key == "b0_grid") {
        base.b0_grid = value.get<std::vector<double>>();
      } else if (key == "trials") {
        base.trials = value.get<int>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "output_path") {
        base.output_path = value.get<std::string>();
      } else if (key == "tolerances") {
        if (!value.is_object()) throw ConfigError("tolerances must be an object");
        for (const auto& [tk, tv] : value.items()) {
          if (tk == "tol_incl")
            base.tol.tol_incl = tv.get<double>();
          else if (tk == "tol_bound")
            base.tol.tol_bound = tv.get<double>();
          else if (tk == "tol_psd")
            base.tol.tol_psd = tv.get<double>();
          else if (tk == "quad_nodes")
            base.tol.quad_nodes = tv.get<int>();
          else
            throw ConfigError("unknown tolerance key '" + tk + "'");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  return base;
}

inline SweepConfig parse_config(const std::string& text, SweepConfig base = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return merge_json(std::move(base), j);
}

inline void validate(const SweepConfig& c) {
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.dims.empty()) throw ConfigError("dims must not be empty");
  int dmax = 0;
  for (int d : c.dims) {
    if (d < 2 || d > 64) throw ConfigError("dimensions must lie in [2, 64], got " + std::to_string(d));
    dmax = std::max(dmax, d);
  }
  if (c.q_grid.empty()) throw ConfigError("q grid must not be empty");
  for (double q : c.q_grid)
    if (!(q > 1.0 && q <= kMaxQ)) throw ConfigError("q values must lie in (1, 40], got " + qtsallis::detail::fmt_double(q));
  if (c.b0_grid.empty()) throw ConfigError("b0 grid must not be empty");
  for (double b : c.b0_grid)
    if (!(b > 0.0 && b <= 1.0 / dmax))
      throw ConfigError("b0 values must lie in (0, 1/" + std::to_string(dmax) + "], got " + qtsallis::detail::fmt_double(b));
  if (!(c.tol.tol_incl >= 0.0)) throw ConfigError("tol_incl must be >= 0");
  if (!(c.tol.tol_bound >= 0.0)) throw ConfigError("tol_bound must be >= 0");
  if (!(c.tol.tol_psd >= 0.0)) throw ConfigError("tol_psd must be >= 0");
  if (c.tol.quad_nodes < 4 || c.tol.quad_nodes > 512) throw ConfigError("quad_nodes must lie in [4, 512]");
}

}  // namespace qtsallis::harness

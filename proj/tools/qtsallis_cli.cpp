// qtsallis: verification suites, sweeps, single-pair evaluation and state
// generation for the relative q-entropy continuity bounds.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtsallis/harness/eval.hpp"
#include "qtsallis/harness/sweep.hpp"
#include "qtsallis/harness/verify.hpp"
#include "qtsallis/state_io.hpp"

namespace {

enum Exit { kPass = 0, kPropertyFailure = 1, kUsage = 2, kIo = 3 };

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out;
  std::optional<int> quad_nodes;
  std::optional<double> tol_bound;
  std::optional<int> trials;
  std::vector<int> dims;
  std::vector<double> q;
  std::vector<double> b0;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--seed", f.seed, "root seed");
  app->add_option("--config", f.config_path, "JSON config file");
  app->add_option("--out", f.out, "output path (stdout if omitted)");
  app->add_option("--quad-nodes", f.quad_nodes, "Gauss nodes per quadrature panel");
  app->add_option("--tol-bound", f.tol_bound, "relative tolerance for bound checks");
  app->add_option("--trials", f.trials, "trials per suite or grid point");
  app->add_option("--dims", f.dims, "dimensions, comma separated")->delimiter(',');
  app->add_option("--q", f.q, "q values, comma separated")->delimiter(',');
  app->add_option("--b0", f.b0, "b0 values, comma separated")->delimiter(',');
}

qtsallis::harness::SweepConfig build_config(const CommonFlags& f, std::optional<int> fixed_dim = std::nullopt) {
  qtsallis::harness::SweepConfig cfg;
  if (!f.config_path.empty()) cfg = qtsallis::harness::parse_config(qtsallis::read_text_file(f.config_path));
  if (f.seed) cfg.seed = *f.seed;
  if (f.quad_nodes) cfg.tol.quad_nodes = *f.quad_nodes;
  if (f.tol_bound) cfg.tol.tol_bound = *f.tol_bound;
  if (f.trials) cfg.trials = *f.trials;
  if (!f.dims.empty()) cfg.dims = f.dims;
  if (!f.q.empty()) cfg.q_grid = f.q;
  if (!f.b0.empty()) cfg.b0_grid = f.b0;
  if (!f.out.empty()) cfg.output_path = f.out;
  auto checked = cfg;
  if (fixed_dim) checked.dims = {*fixed_dim};
  qtsallis::harness::validate(checked);
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text << std::flush;
  else
    qtsallis::write_text_file(path, text);
}

void self_test(int nodes) {
  const double err = qtsallis::scalar_self_test_error(nodes);
  if (!(err <= 1e-9))
    throw qtsallis::InternalError("quadrature self-test failed: |4^0.5 - 2| = " + qtsallis::detail::fmt_double(err));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative q-entropy continuity bounds: verify, sweep, eval, gen"};
  app.require_subcommand(1);

  CommonFlags verify_flags, sweep_flags, eval_flags;
  auto* verify = app.add_subcommand("verify", "run every property suite");
  add_common(verify, verify_flags);

  auto* sweep = app.add_subcommand("sweep", "CSV sweep over d, q and the sigma(b0) family");
  add_common(sweep, sweep_flags);
  std::string sweep_rho;
  sweep->add_option("--rho", sweep_rho, "fixed rho state file instead of random states");

  auto* eval = app.add_subcommand("eval", "evaluate every bound for one pair");
  add_common(eval, eval_flags);
  std::string rho_path, sigma_path;
  double p = 0.5;
  eval->add_option("--rho", rho_path, "rho state file")->required();
  eval->add_option("--sigma", sigma_path, "sigma state file")->required();
  eval->add_option("--p", p, "order below one for the lower chain");

  auto* gen = app.add_subcommand("gen", "sample a random state");
  int gen_dim = 2;
  std::optional<int> gen_rank;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--dim", gen_dim, "dimension")->required();
  gen->add_option("--rank", gen_rank, "rank (defaults to full)");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*verify) {
      const auto cfg = build_config(verify_flags);
      self_test(cfg.tol.quad_nodes);
      const auto report = qtsallis::harness::cmd_verify(cfg);
      emit(verify_flags.out, qtsallis::harness::verify_report_json(report));
      for (const auto& s : report.suites)
        if (s.failures)
          std::cerr << "FAIL " << s.name << ": " << s.failures << " of " << s.instances_run
                    << (s.counterexample_path.empty() ? "" : " (" + s.counterexample_path + ")") << "\n";
      return report.passed() ? kPass : kPropertyFailure;
    }
    if (*sweep) {
      std::optional<qtsallis::DensityMatrix> rho;
      if (!sweep_rho.empty()) rho = qtsallis::read_state(sweep_rho);
      const auto cfg = build_config(sweep_flags, rho ? std::optional<int>(rho->dim()) : std::nullopt);
      self_test(cfg.tol.quad_nodes);
      emit(sweep_flags.out, qtsallis::harness::cmd_sweep(cfg, rho));
      return kPass;
    }
    if (*eval) {
      const auto cfg = build_config(eval_flags);
      qtsallis::harness::EvalOptions opt;
      if (!eval_flags.q.empty()) opt.q_values = eval_flags.q;
      opt.p = p;
      opt.tol_bound = cfg.tol.tol_bound;
      opt.tol_incl = cfg.tol.tol_incl;
      const auto rho = qtsallis::read_state(rho_path);
      const auto sigma = qtsallis::read_state(sigma_path);
      emit(eval_flags.out, qtsallis::harness::cmd_eval(rho, sigma, opt).dump(2) + "\n");
      return kPass;
    }
    if (*gen) {
      const auto rho = qtsallis::harness::cmd_gen(gen_dim, gen_rank.value_or(gen_dim), gen_seed);
      emit(gen_out, qtsallis::state_to_json(rho.matrix()));
      return kPass;
    }
  } catch (const qtsallis::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const qtsallis::QOutOfRange& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const qtsallis::IOError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const qtsallis::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIo;
  } catch (const qtsallis::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

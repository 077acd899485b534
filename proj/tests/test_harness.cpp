#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "qtsallis/harness/eval.hpp"
#include "qtsallis/harness/sweep.hpp"
#include "qtsallis/harness/verify.hpp"
#include "qtsallis/state_io.hpp"

using namespace qtsallis;
using namespace qtsallis::harness;
namespace fs = std::filesystem;

namespace {

DensityMatrix diag_state(std::initializer_list<double> v) { return density_from_matrix(HermitianOperator::diagonal(v).matrix()); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qtsallis_harness_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> rows;
  std::stringstream ss(csv);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QTSALLIS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

SweepConfig small_config() {
  SweepConfig c;
  c.trials = 20;
  c.dims = {2, 3};
  c.b0_grid = {0.1, 1e-3};
  return c;
}

}  // namespace

TEST(Config, Validation) {
  SweepConfig c;
  EXPECT_NO_THROW(validate(c));
  c.trials = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.tol.tol_bound = -1.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.b0_grid.clear();
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.q_grid = {1.0};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.b0_grid = {0.2};
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.tol.quad_nodes = 2;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, JsonRoundTripAndErrors) {
  SweepConfig c = small_config();
  c.seed = 99;
  const SweepConfig back = parse_config(to_json(c).dump());
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"trails": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"trials": "many"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"tolerances": {"tol_x": 1}})"), ConfigError);
  EXPECT_THROW(parse_config("[1,2]"), ConfigError);
  EXPECT_EQ(parse_config(R"({"trials": 7})").trials, 7);
}

TEST(Parallel, ResultsInIndexOrder) {
  const auto out = parallel_map(100, [](int i) { return i * i; }, 4);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(out[i], i * i);
  EXPECT_THROW(parallel_map(10, [](int i) -> int { if (i == 5) throw ConfigError("x"); return i; }, 3), ConfigError);
}

TEST(Generators, KernelPairsIncludeKernels) {
  Rng rng(17);
  int deficient = 0;
  for (int t = 0; t < 200; ++t) {
    auto [rho, sigma] = random_kernel_pair(uniform_int(rng, 2, 8), rng);
    EXPECT_TRUE(kernel_included(sigma, rho));
    deficient += !sigma.full_rank();
  }
  EXPECT_GT(deficient, 50);
}

TEST(Generators, SigmaFamily) {
  const auto s = sigma_family(4, 1e-3);
  EXPECT_NEAR(s.min_eigenvalue(), 1e-3, 1e-15);
  EXPECT_NEAR(s.max_eigenvalue(), 1.0 - 3e-3, 1e-15);
}

TEST(Sweep, FixtureRow) {
  SweepConfig c;
  c.q_grid = {2.0};
  c.b0_grid = {0.25};
  c.trials = 1;
  const std::string csv = cmd_sweep(c, diag_state({0.5, 0.5}));
  const auto rows = data_rows(csv);
  ASSERT_EQ(rows.size(), 1u);
  const auto cells = split(rows[0], ',');
  const auto header = split(kSweepColumns, ',');
  ASSERT_EQ(cells.size(), header.size());
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return cells[i];
    return std::string("missing");
  };
  EXPECT_NEAR(std::stod(col("Dq")), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::stod(col("thm3q2_rhs")), 1.0, 1e-12);
  EXPECT_NEAR(std::stod(col("thm3_rhs")), 1.5, 1e-12);
  EXPECT_NEAR(std::stod(col("pinsker_lhs")), 0.125, 1e-15);
  EXPECT_EQ(col("vacuous"), "-");
}

TEST(Sweep, CompletenessAndHeader) {
  const SweepConfig c = small_config();
  const std::string csv = cmd_sweep(c);
  EXPECT_EQ(data_rows(csv).size(), c.dims.size() * c.q_grid.size() * c.b0_grid.size() * c.trials);
  EXPECT_EQ(csv.rfind("# root_seed=1\n# config=", 0), 0u);
  EXPECT_NE(csv.find(std::string(kSweepColumns) + "\n"), std::string::npos);
}

TEST(Sweep, VacuousEntriesAreNan) {
  SweepConfig c = small_config();
  c.q_grid = {3.0};
  c.trials = 1;
  const auto rows = data_rows(cmd_sweep(c));
  const auto cells = split(rows[0], ',');
  EXPECT_EQ(cells[9], "nan");
  EXPECT_NE(cells.back().find("thm1_rhs1"), std::string::npos);
}

TEST(Sweep, Deterministic) {
  const SweepConfig c = small_config();
  EXPECT_EQ(cmd_sweep(c), cmd_sweep(c));
  SweepConfig other = c;
  other.seed = 2;
  EXPECT_NE(cmd_sweep(c), cmd_sweep(other));
}

TEST(Sweep, ConfigErrors) {
  SweepConfig c = small_config();
  c.b0_grid.clear();
  EXPECT_THROW(cmd_sweep(c), ConfigError);
}

TEST(Verify, SmallRunPassesAndIsDeterministic) {
  SweepConfig c;
  c.trials = 50;
  c.output_path = (scratch("verify") / "report.json").string();
  const auto a = cmd_verify(c);
  const auto b = cmd_verify(c);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(verify_report_json(a), verify_report_json(b));
  EXPECT_NE(a.find("bounds.thm3"), nullptr);
  EXPECT_EQ(a.find("no.such.suite"), nullptr);
}

TEST(Verify, ConfigErrors) {
  SweepConfig c;
  c.trials = 0;
  EXPECT_THROW(cmd_verify(c), ConfigError);
  c = {};
  c.tol.tol_bound = -1;
  EXPECT_THROW(cmd_verify(c), ConfigError);
}

TEST(Verify, FailingSuiteWritesCounterexample) {
  SweepConfig c;
  c.trials = 3;
  c.output_path = (scratch("cex") / "report.json").string();
  const Suite broken{"demo.broken", 3, [](Rng&, int t, const SweepConfig&) {
                       TrialResult tr;
                       tr.check(t != 1, -1.0, [] {
                         return Counterexample{{{"rho", diag_state({0.5, 0.5}).matrix()}}, {{"why", "demo"}}};
                       });
                       return tr;
                     }};
  const auto r = run_suite(broken, c);
  EXPECT_EQ(r.failures, 1);
  EXPECT_EQ(r.instances_run, 3);
  EXPECT_DOUBLE_EQ(r.worst_slack, -1.0);
  ASSERT_FALSE(r.counterexample_path.empty());
  EXPECT_TRUE(fs::exists(r.counterexample_path));
  const auto rho_file = fs::path(r.counterexample_path).parent_path() / "demo.broken_trial1_rho.json";
  EXPECT_NEAR(read_state(rho_file).max_eigenvalue(), 0.5, 1e-15);
}

TEST(Eval, Fixture) {
  EvalOptions opt;
  opt.q_values = {2.0};
  const auto j = cmd_eval(diag_state({0.5, 0.5}), diag_state({0.75, 0.25}), opt);
  const auto& r = j["results"][0];
  EXPECT_NEAR(r["D_q"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r["thm3_q2_rhs"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(r["holds"].get<bool>());
  EXPECT_NEAR(j["D1"].get<double>(), 0.5 * std::log(4.0 / 3.0), 1e-12);
}

TEST(Eval, SameStateIsZero) {
  Rng rng(3);
  const auto rho = sample_density(3, 2, rng);
  EvalOptions opt;
  opt.q_values = {1.5, 2.0, 4.0};
  const auto j = cmd_eval(rho, rho, opt);
  for (const auto& r : j["results"]) EXPECT_EQ(r["D_q"].get<double>(), 0.0);
}

TEST(Eval, KernelViolationGivesInfinity) {
  const auto j = cmd_eval(diag_state({0.5, 0.5}), diag_state({1.0, 0.0}));
  EXPECT_EQ(j["results"][0]["D_q"], "inf");
  EXPECT_FALSE(j["kernel_included"].get<bool>());
  for (const auto& rep : j["results"][0]["reports"])
    if (rep["name"] != "lower_chain" && rep["name"] != "pinsker") EXPECT_TRUE(rep["vacuous"].get<bool>());
}

TEST(Gen, RoundTripAndErrors) {
  const auto dir = scratch("gen");
  const auto a = cmd_gen(2, 2, 7);
  write_state(dir / "a.json", a);
  write_state(dir / "b.json", cmd_gen(2, 2, 7));
  EXPECT_EQ(read_text_file(dir / "a.json"), read_text_file(dir / "b.json"));
  const auto back = read_state(dir / "a.json");
  EXPECT_NO_THROW(cmd_eval(back, back));
  EXPECT_THROW(cmd_gen(2, 3, 7), ConfigError);
  EXPECT_THROW(cmd_gen(0, 1, 7), ConfigError);
}

TEST(Cli, ExitCodesAndDeterminism) {
  const auto dir = scratch("cli");
  const std::string d = dir.string();
  EXPECT_EQ(run_cli("gen --dim 3 --rank 2 --seed 5 --out " + d + "/g.json"), 0);
  EXPECT_EQ(run_cli("eval --rho " + d + "/g.json --sigma " + d + "/g.json --q 2,3 --out " + d + "/e.json"), 0);
  EXPECT_EQ(run_cli("gen --dim 2 --rank 3"), 2);
  EXPECT_EQ(run_cli("verify --trials 0"), 2);
  EXPECT_EQ(run_cli("verify --tol-bound -1"), 2);
  EXPECT_EQ(run_cli("sweep --b0 0.5"), 2);
  EXPECT_EQ(run_cli("nonsense"), 2);
  EXPECT_EQ(run_cli("eval --rho " + d + "/missing.json --sigma " + d + "/g.json"), 3);
  write_text_file(dir / "bad.json", "{\"dim\": 2, \"re\": [[0.6,0],[0,0.5]], \"im\": [[0,0],[0,0]]}");
  EXPECT_EQ(run_cli("eval --rho " + d + "/bad.json --sigma " + d + "/g.json"), 3);
  write_text_file(dir / "cfg.json", "{\"trials\": 5, \"dims\": [2, 3], \"b0_grid\": [0.1]}");
  const std::string sweep = "sweep --config " + d + "/cfg.json --q 1.5,2 --seed 11 --out ";
  EXPECT_EQ(run_cli(sweep + d + "/s1.csv"), 0);
  EXPECT_EQ(run_cli(sweep + d + "/s2.csv"), 0);
  const auto s1 = read_text_file(dir / "s1.csv");
  EXPECT_EQ(s1, read_text_file(dir / "s2.csv"));
  EXPECT_EQ(data_rows(s1).size(), 2u * 2u * 1u * 5u);
  EXPECT_NE(s1.find("\"seed\":11"), std::string::npos);
  write_text_file(dir / "badcfg.json", "{\"trials\": -4}");
  EXPECT_EQ(run_cli("sweep --config " + d + "/badcfg.json"), 2);
  EXPECT_EQ(run_cli("sweep --config " + d + "/nope.json"), 3);
}

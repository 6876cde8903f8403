// maris - sum-rate optimizer for RIS-aided multiuser MISO downlinks with
// movable transmit antennas.
//
// Subcommands:
//   run    solve one seeded instance, write the per-iteration trace CSV
//   sweep  Monte-Carlo parameter sweep over algorithm variants, paired seeds
//   check  built-in numerical oracle suites
//
// Exit codes: 0 success, 1 validation error, 2 oracle/solver failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maris/config_io.hpp"
#include "maris/errors.hpp"
#include "maris/selfcheck.hpp"
#include "maris/sweep.hpp"

namespace {

int cmd_run(const std::string& config_path, std::uint64_t seed,
            const std::string& out_path, bool timing) {
  maris::SystemConfig cfg = maris::parse_config(config_path);
  maris::RunOnceOptions opts;
  opts.include_timing = timing;
  const maris::SolverTrace trace =
      maris::run_once(cfg, seed, out_path, opts);
  if (trace.status == maris::SolveStatus::Failure) {
    std::cerr << "run: solver failed after "
              << trace.iterations.size() << " iterations: " << trace.message
              << '\n';
    return 2;
  }
  std::cout << "run: " << trace.iterations.size() << " iterations, final rate "
            << maris::format_number(trace.final_sum_rate())
            << " bits/s/Hz -> " << out_path << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values,
              const std::vector<std::string>& variant_tokens, int trials,
              const std::string& out_path, int workers, int restarts,
              std::uint64_t seed_override, bool seed_given) {
  maris::SweepSpec spec;
  spec.base = maris::parse_config(config_path);
  spec.param = maris::sweep_param_from_string(param);
  spec.values = values;
  spec.trials = trials;
  spec.workers = workers;
  spec.restarts = restarts;
  spec.master_seed = seed_given ? seed_override : spec.base.seed;
  for (const std::string& token : variant_tokens) {
    spec.variants.push_back(maris::parse_variant(token));
  }

  const maris::SweepResult result = maris::run_sweep(spec);
  maris::write_sweep_csv(result, out_path);
  std::cout << "sweep: " << result.rows.size() << " aggregate rows -> "
            << out_path << '\n';
  if (result.total_failures > 0) {
    std::cerr << "sweep: " << result.total_failures
              << " solve(s) failed and were excluded\n";
  }
  return 0;
}

int cmd_check(const std::string& suite) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = maris::self_check_suites();
  } else {
    suites.push_back(suite);
  }
  bool all_pass = true;
  for (const std::string& name : suites) {
    const maris::CheckReport rep = maris::self_check(name);
    std::cout << (rep.pass ? "[PASS] " : "[FAIL] ") << rep.suite << '\n';
    for (const std::string& line : rep.lines) {
      std::cout << "       " << line << '\n';
    }
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "maris: joint beamforming / RIS reflection / movable-antenna position "
      "optimization for multiuser MISO sum-rate"};
  app.require_subcommand(1);

  std::string config_path, out_path, param, suite;
  std::vector<double> values;
  std::vector<std::string> variants;
  std::uint64_t seed = 0;
  int trials = 50;
  int workers = 1;
  int restarts = 1;
  bool timing = false;

  CLI::App* run = app.add_subcommand("run", "solve one instance, write trace CSV");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "scenario and initialization seed")->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_flag("--timing", timing,
                "write measured cumulative wall time into cum_ms (output is "
                "then not reproducible byte-for-byte)");

  CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--param", param, "pmax_dbm | region_lambda | iterations")
      ->required();
  sweep->add_option("--values", values, "swept values (comma separated)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--trials", trials, "Monte-Carlo trials per value");
  sweep
      ->add_option("--variants", variants,
                   "variant tokens like MA-CPS,FPA-CPS,MA-DPS4,MA-FIXED")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--workers", workers, "concurrent solver threads");
  sweep->add_option("--restarts", restarts,
                    "initialization restarts per trial, best rate kept");
  CLI::Option* seed_opt =
      sweep->add_option("--seed", seed, "master seed (default: config seed)");

  CLI::App* check = app.add_subcommand("check", "run a numerical oracle suite");
  check
      ->add_option("suite", suite,
                   "gradients | mm | bisect | tightness | brute_dps | all")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, seed, out_path, timing);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, param, values, variants, trials, out_path,
                       workers, restarts, seed, !seed_opt->empty());
    }
    if (check->parsed()) {
      return cmd_check(suite);
    }
  } catch (const maris::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}

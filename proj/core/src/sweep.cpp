#include "maris/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "maris/errors.hpp"
#include "maris/rng.hpp"
#include "maris/scenario.hpp"

namespace maris {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

SweepVariant parse_variant(const std::string& token) {
  const auto dash = token.find('-');
  if (dash == std::string::npos) {
    throw ConfigError("variant '" + token +
                      "': expected <antenna>-<ris>, e.g. MA-CPS");
  }
  SweepVariant v;
  v.label = token;
  v.antenna = antenna_mode_from_string(token.substr(0, dash));
  std::string ris = token.substr(dash + 1);
  if (ris.size() > 3 && ris.rfind("DPS", 0) == 0) {
    v.dps_levels = std::stoi(ris.substr(3));
    if (v.dps_levels < 2) {
      throw ConfigError("variant '" + token + "': DPS levels must be >= 2");
    }
    ris = "DPS";
  }
  v.ris = ris_mode_from_string(ris);
  return v;
}

SweepParam sweep_param_from_string(const std::string& name) {
  if (name == "pmax_dbm") return SweepParam::PmaxDbm;
  if (name == "region_lambda") return SweepParam::RegionLambda;
  if (name == "iterations") return SweepParam::Iterations;
  throw ConfigError("param '" + name +
                    "': expected pmax_dbm, region_lambda or iterations");
}

std::string to_string(SweepParam p) {
  switch (p) {
    case SweepParam::PmaxDbm: return "pmax_dbm";
    case SweepParam::RegionLambda: return "region_lambda";
    case SweepParam::Iterations: return "iterations";
  }
  return "?";
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t value_index,
                         std::size_t trial_index) {
  std::uint64_t s = splitmix64(master ^ 0x53574545505345ULL);
  s = splitmix64(s ^ (0x9E3779B97F4A7C15ULL * (value_index + 1)));
  s = splitmix64(s ^ (0xC2B2AE3D27D4EB4FULL * (trial_index + 1)));
  return s;
}

SystemConfig apply_variant(const SystemConfig& base, const SweepVariant& v) {
  SystemConfig cfg = base;
  cfg.antenna_mode = v.antenna;
  cfg.ris_mode = v.ris;
  if (v.dps_levels > 0) cfg.dps_levels = v.dps_levels;
  return cfg;
}

SystemConfig apply_param(const SystemConfig& base, SweepParam param,
                         double value) {
  SystemConfig cfg = base;
  switch (param) {
    case SweepParam::PmaxDbm:
      cfg.pmax_dbm = value;
      break;
    case SweepParam::RegionLambda:
      cfg.region_lambda = value;
      break;
    case SweepParam::Iterations: {
      const int iters = static_cast<int>(value);
      if (iters < 1 || static_cast<double>(iters) != value) {
        throw ConfigError("iterations: swept values must be positive integers");
      }
      cfg.r_max = iters;
      cfg.tol = 0.0;  // run exactly r_max iterations
      break;
    }
  }
  return cfg;
}

SolverTrace run_once(SystemConfig config, std::uint64_t seed,
                     const std::string& out_csv,
                     const RunOnceOptions& options) {
  config.seed = seed;
  config.validate();
  const Scenario sc = sample_scenario(config, seed);
  SolveResult result = solve(sc, config);

  std::ofstream out(out_csv, std::ios::binary);
  if (!out) {
    throw std::runtime_error("run_once: cannot open '" + out_csv +
                             "' for writing");
  }
  out << "iter,sum_rate_bps_hz,cum_ms\n";
  double cum_ms = 0.0;
  for (const IterationRecord& rec : result.trace.iterations) {
    cum_ms += rec.wall_ms;
    out << rec.iteration << ',' << format_number(rec.sum_rate_bits) << ','
        << format_number(options.include_timing ? cum_ms : 0.0) << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("run_once: write to '" + out_csv + "' failed");
  }
  return result.trace;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.trials < 1) throw ConfigError("trials: must be >= 1");
  if (spec.values.empty()) throw ConfigError("values: must be nonempty");
  if (spec.variants.empty()) throw ConfigError("variants: must be nonempty");

  const std::size_t n_variants = spec.variants.size();
  const std::size_t n_values = spec.values.size();
  const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
  const std::size_t n_jobs = n_variants * n_values * n_trials;

  // One slot per job; workers never touch the same slot, so the aggregate is
  // independent of scheduling.
  std::vector<std::optional<double>> rates(n_jobs);
  std::vector<std::string> errors(n_jobs);

  const auto run_job = [&](std::size_t job) {
    const std::size_t vi = job / (n_values * n_trials);
    const std::size_t rest = job % (n_values * n_trials);
    const std::size_t xi = rest / n_trials;
    const std::size_t ti = rest % n_trials;
    SystemConfig cfg = apply_param(
        apply_variant(spec.base, spec.variants[vi]), spec.param,
        spec.values[xi]);
    const std::uint64_t seed = trial_seed(spec.master_seed, xi, ti);
    try {
      const Scenario sc = sample_scenario(cfg, seed);
      for (int restart = 0; restart < std::max(1, spec.restarts); ++restart) {
        cfg.seed = restart == 0
                       ? seed
                       : splitmix64(seed + 0x9E3779B97F4A7C15ULL * restart);
        const SolveResult res = solve(sc, cfg);
        if (res.trace.status == SolveStatus::Failure) {
          errors[job] = res.trace.message;
          continue;
        }
        const double rate = res.trace.final_sum_rate();
        if (!rates[job].has_value() || rate > *rates[job]) rates[job] = rate;
      }
    } catch (const std::exception& err) {
      errors[job] = err.what();
    }
  };

  const int workers = std::max(1, spec.workers);
  if (workers == 1) {
    for (std::size_t job = 0; job < n_jobs; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int wi = 0; wi < workers; ++wi) {
      pool.emplace_back([&] {
        for (std::size_t job = next.fetch_add(1); job < n_jobs;
             job = next.fetch_add(1)) {
          run_job(job);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  for (std::size_t vi = 0; vi < n_variants; ++vi) {
    for (std::size_t xi = 0; xi < n_values; ++xi) {
      SweepRow row;
      row.variant = spec.variants[vi].label;
      row.param = to_string(spec.param);
      row.value = spec.values[xi];
      double sum = 0.0, sum_sq = 0.0;
      int n = 0;
      for (std::size_t ti = 0; ti < n_trials; ++ti) {
        const std::size_t job = (vi * n_values + xi) * n_trials + ti;
        if (rates[job].has_value()) {
          sum += *rates[job];
          sum_sq += *rates[job] * *rates[job];
          ++n;
        } else {
          ++row.failures;
          std::cerr << "run_sweep: solve failed (variant " << row.variant
                    << ", value " << row.value << ", trial " << ti
                    << "): " << errors[job] << '\n';
        }
      }
      row.trials = n;
      if (n > 0) {
        row.mean_rate = sum / n;
        if (n > 1) {
          const double var =
              std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
          row.stderr_rate = std::sqrt(var / n);
        }
      }
      result.total_failures += row.failures;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_sweep_csv: cannot open '" + path + "'");
  }
  out << "variant,param,value,mean_rate,stderr,trials\n";
  for (const SweepRow& row : result.rows) {
    out << row.variant << ',' << row.param << ',' << format_number(row.value)
        << ',' << format_number(row.mean_rate) << ','
        << format_number(row.stderr_rate) << ',' << row.trials << '\n';
  }
  out.flush();
  if (!out) {
    throw std::runtime_error("write_sweep_csv: write to '" + path + "' failed");
  }
}

}  // namespace maris

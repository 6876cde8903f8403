#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maris/config.hpp"
#include "maris/solver.hpp"

namespace maris {

/// One antenna-mode x RIS-mode combination of a sweep. A DPS token may carry
/// an explicit level count ("MA-DPS8"); otherwise the base config's applies.
struct SweepVariant {
  AntennaMode antenna = AntennaMode::Movable;
  RisMode ris = RisMode::Cps;
  int dps_levels = 0;  ///< 0 = inherit from the base config
  std::string label;
};

/// Parses tokens like "MA-CPS", "FPA-IRC", "MA-DPS4", "MA-FIXED".
SweepVariant parse_variant(const std::string& token);

enum class SweepParam { PmaxDbm, RegionLambda, Iterations };

SweepParam sweep_param_from_string(const std::string& name);
std::string to_string(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::PmaxDbm;
  std::vector<double> values;
  int trials = 50;
  std::vector<SweepVariant> variants;
  SystemConfig base;
  std::uint64_t master_seed = 1;
  int workers = 1;
  /// Initialization restarts per trial (seed-level multi-start): each trial
  /// keeps the best final rate over this many Phi0 draws. The scenario is
  /// fixed by the trial seed, so pairing across variants is unaffected.
  int restarts = 1;
};

struct SweepRow {
  std::string variant;
  std::string param;
  double value = 0.0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  int trials = 0;    ///< successful trials aggregated
  int failures = 0;  ///< excluded solves
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int total_failures = 0;
};

/// Scenario seed of one trial. Depends only on (master seed, value index,
/// trial index) so that every variant sees the same channel draws and the
/// comparisons are paired.
std::uint64_t trial_seed(std::uint64_t master, std::size_t value_index,
                         std::size_t trial_index);

/// Returns the base config with a variant and a swept value applied.
SystemConfig apply_variant(const SystemConfig& base, const SweepVariant& v);
SystemConfig apply_param(const SystemConfig& base, SweepParam param,
                         double value);

struct RunOnceOptions {
  /// Wall-clock timings are not reproducible; the cum_ms column is written
  /// as 0 unless explicitly requested, keeping repeated runs byte-identical.
  bool include_timing = false;
};

/// Solves one seeded instance and writes the per-iteration trace CSV
/// (`iter,sum_rate_bps_hz,cum_ms`). Returns the trace.
SolverTrace run_once(SystemConfig config, std::uint64_t seed,
                     const std::string& out_csv,
                     const RunOnceOptions& options = {});

/// Runs the full grid (variant x value x trial), excluding failed solves
/// from the aggregates. Deterministic for a given spec regardless of the
/// worker count.
SweepResult run_sweep(const SweepSpec& spec);

/// `variant,param,value,mean_rate,stderr,trials` with 12 significant digits.
void write_sweep_csv(const SweepResult& result, const std::string& path);

/// printf("%.12g") formatting used by every CSV writer.
std::string format_number(double x);

}  // namespace maris

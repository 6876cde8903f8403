#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "maris/config.hpp"
#include "maris/scenario.hpp"
#include "maris/types.hpp"

namespace maris {

/// Current iterates of the block-coordinate loop.
struct SolverState {
  Beamformer w;            ///< N x K
  RisPhases phi;           ///< M
  AntennaPositions t;      ///< 2 x N
  Eigen::VectorXd alpha;   ///< K
  Eigen::VectorXcd beta;   ///< K
  Eigen::VectorXcd eps;    ///< K
  Eigen::VectorXcd delta;  ///< K
  int iteration = 0;
};

enum class SolveStatus { Converged, IterationCap, Failure };

struct IterationRecord {
  int iteration = 0;
  double sum_rate_bits = 0.0;
  double wall_ms = 0.0;
  double w_block_ms = 0.0;
  double phi_block_ms = 0.0;
  double t_block_ms = 0.0;
};

struct SolverTrace {
  std::vector<IterationRecord> iterations;
  SolveStatus status = SolveStatus::IterationCap;
  std::string message;

  double final_sum_rate() const {
    return iterations.empty() ? 0.0 : iterations.back().sum_rate_bits;
  }
};

struct SolveResult {
  SolverState state;
  SolverTrace trace;
};

/// Called after every completed outer iteration.
using IterationObserver = std::function<void(const SolverState&, int)>;

/// Starting point: T0 is the lambda/2 ULA shared with the FPA baseline
/// (falling back to a packed grid for movable antennas when the ULA exceeds
/// the region), Phi0 random unit-amplitude phases seeded from config.seed
/// (quantized in DPS mode), W0 matched-filter columns scaled to the full
/// power budget. Throws ConfigError when no feasible layout exists.
SolverState initialize(const Scenario& sc, const SystemConfig& config);

/// Runs the outer loop: (alpha, beta) -> W -> (eps, phi) -> (delta, T) per
/// iteration, skipping the phi block for FIXED RIS and the T block for fixed
/// antennas. Stops when the relative sum-rate change drops below config.tol
/// or after r_max iterations. A numerical failure in any block ends the run
/// with status Failure and the best state reached so far.
SolveResult solve(const Scenario& sc, const SystemConfig& config,
                  const IterationObserver& observer = {});

}  // namespace maris

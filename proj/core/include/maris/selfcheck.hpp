#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maris/positions.hpp"
#include "maris/ris.hpp"
#include "maris/solver.hpp"

namespace maris {

struct CheckReport {
  std::string suite;
  bool pass = true;
  double worst = 0.0;  ///< worst-case residual of the suite
  std::vector<std::string> lines;
};

/// Seeded random iterates with the invariants of the given phase mode:
/// feasible positions, full-power beamformer, consistent auxiliaries.
SolverState random_state(const Scenario& sc, const SystemConfig& config,
                         std::uint64_t seed);

/// Synthetic Hermitian-PSD quadratic form for the MM and IRC checks.
QuadraticForm random_quadratic(int m, std::uint64_t seed);

/// Central finite differences of position_objective, step in meters.
Eigen::Vector2d fd_position_gradient(const AntennaPositions& t, int n,
                                     const Beamformer& w,
                                     const PositionAuxiliaries& aux,
                                     const Scenario& sc,
                                     const Eigen::VectorXd& alpha,
                                     double wavelength, double step);

/// Exhaustive maximum of f2 over all kappa^M grid phase vectors. Guarded
/// against combinatorial blowup.
double brute_force_dps_optimum(const QuadraticForm& q, int kappa);

std::vector<std::string> self_check_suites();

/// Runs one oracle suite (gradients | mm | bisect | tightness | brute_dps)
/// over seeded instances and reports worst-case residuals. Throws
/// ConfigError for an unknown suite name.
CheckReport self_check(const std::string& suite);

}  // namespace maris

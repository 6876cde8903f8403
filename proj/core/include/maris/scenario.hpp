#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "maris/config.hpp"

namespace maris {

/// Elevation/azimuth pair of one propagation path, radians.
struct PathAngles {
  double theta = 0.0;
  double phi = 0.0;
};

/// One random channel draw. Immutable after construction; safe to share
/// read-only across concurrent solves.
struct Scenario {
  std::vector<PathAngles> angles;  ///< BS-side departure angles, one per path
  Eigen::VectorXcd nu;             ///< L complex path responses (diagonal of Lambda)
  Eigen::MatrixXcd g_r;            ///< L x M RIS receive response
  Eigen::MatrixXcd h;              ///< M x K RIS->user channels, column k = h_k

  int n_paths() const { return static_cast<int>(nu.size()); }
  int n_ris() const { return static_cast<int>(g_r.cols()); }
  int n_users() const { return static_cast<int>(h.cols()); }
};

/// Free-space path gain (linear) of the RIS-reflected link:
/// loss_dB = 92.5 + 20 log10 f0[GHz] + 20 log10 d[km] - gain_dB.
/// Rejects non-positive distance or frequency.
double path_loss(double distance_km, double f0_ghz, double reflection_gain_db);

/// Draws a scenario. Deterministic function of (config, seed): path angles
/// uniform on [0, angle_max], nu_l ~ CN(0, v/L), users uniform on a disk
/// around the drop center, h_{k,m} ~ CN(0, u_k).
Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed);

}  // namespace maris

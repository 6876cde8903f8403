#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "maris/config.hpp"

namespace maris {

/// Reflection-coefficient vector, stacking diag(Phi^H): entry m is the
/// conjugate of the m-th reflection coefficient psi_m.
using RisPhases = Eigen::VectorXcd;

/// N x K transmit beamformer, column k serves user k.
using Beamformer = Eigen::MatrixXcd;

/// 2 x N antenna coordinates in meters, column n = t_n.
using AntennaPositions = Eigen::Matrix2Xd;

inline double total_power(const Beamformer& w) { return w.squaredNorm(); }

inline bool power_feasible(const Beamformer& w, double pmax) {
  return total_power(w) <= pmax * (1.0 + 1e-9);
}

/// Checks the constraint set of the given RIS mode: IRC allows |phi_m| <= 1,
/// CPS/FIXED require unit modulus, DPS additionally requires phases on the
/// kappa-level grid (all up to 1e-9).
inline bool phases_feasible(const RisPhases& phi, RisMode mode, int kappa) {
  constexpr double kTol = 1e-9;
  for (Eigen::Index m = 0; m < phi.size(); ++m) {
    const double mag = std::abs(phi(m));
    if (mode == RisMode::Irc) {
      if (mag > 1.0 + kTol) return false;
      continue;
    }
    if (std::abs(mag - 1.0) > kTol) return false;
    if (mode == RisMode::Dps) {
      const double step = 2.0 * M_PI / kappa;
      double ang = std::arg(phi(m));
      if (ang < 0.0) ang += 2.0 * M_PI;
      const double frac = ang / step - std::round(ang / step);
      if (std::abs(frac) * step > kTol) return false;
    }
  }
  return true;
}

}  // namespace maris

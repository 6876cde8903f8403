#pragma once

#include <Eigen/Dense>

#include "maris/config.hpp"
#include "maris/scenario.hpp"
#include "maris/types.hpp"

namespace maris {

/// Auxiliaries of the antenna-position block.
struct PositionAuxiliaries {
  Eigen::VectorXcd delta;  ///< K complex
  Eigen::MatrixXcd p;      ///< L x K, column k = Lambda^H G_r S_k phi delta_k
  Eigen::MatrixXcd pi;     ///< N x N, sum_i w_i w_i^H (Hermitian PSD)
};

/// Same closed form as the epsilon update, evaluated after the phi block.
Eigen::VectorXcd update_delta(const Eigen::VectorXd& alpha,
                              const Eigen::MatrixXcd& z, double noise_w);

PositionAuxiliaries make_position_aux(const Scenario& sc, const RisPhases& phi,
                                      const Beamformer& w,
                                      const Eigen::VectorXcd& delta);

/// Position objective
/// f5(T) = sum_k 2 sqrt(1+alpha_k) Re{P_k^H G_t w_k} - P_k^H G_t Pi G_t^H P_k.
/// T need not be feasible; the line search evaluates candidates through this.
double position_objective(const AntennaPositions& t, const Beamformer& w,
                          const PositionAuxiliaries& aux, const Scenario& sc,
                          const Eigen::VectorXd& alpha, double wavelength);

/// Analytic gradient of f5 with respect to t_n (2-vector), shared per-path
/// angles. Matches central finite differences of position_objective.
Eigen::Vector2d position_gradient(const AntennaPositions& t, int n,
                                  const Beamformer& w,
                                  const PositionAuxiliaries& aux,
                                  const Scenario& sc,
                                  const Eigen::VectorXd& alpha,
                                  double wavelength);

/// Closed constraint set: every antenna inside [0, A lambda]^2 and every
/// pairwise distance >= D lambda (boundary counts as feasible).
bool feasible(const AntennaPositions& t, const SystemConfig& config);

/// Gauss-Seidel sweeps of per-antenna gradient ascent with backtracking:
/// a candidate t_n + mu grad is accepted when it is feasible and strictly
/// improves f5, otherwise mu halves until mu_min. Stops when f5 stalls
/// (relative change < 1e-6) or after q_max sweeps. Output is feasible and
/// never below the input's f5.
AntennaPositions optimize_positions(const Scenario& sc, const Beamformer& w,
                                    const PositionAuxiliaries& aux,
                                    const Eigen::VectorXd& alpha,
                                    const AntennaPositions& t0,
                                    const SystemConfig& config);

/// Uniform linear array along the region's lower edge. The spacing mantissa
/// is rounded up a few ulps so that small integer multiples are exact and
/// the array is feasible under the closed min-distance comparison.
AntennaPositions ula_positions(int n, double spacing);

/// Row-major packed grid inside [0, region]^2, used when the ULA does not
/// fit the region. Throws ConfigError when even the grid cannot hold n
/// points.
AntennaPositions packed_grid_positions(int n, double spacing, double region);

}  // namespace maris

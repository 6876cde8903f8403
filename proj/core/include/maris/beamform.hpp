#pragma once

#include <Eigen/Dense>

#include "maris/types.hpp"

namespace maris {

/// Lagrangian-dual / quadratic-transform auxiliaries of the beamforming
/// block, together with the per-user link statistics they are computed from.
struct BeamformAuxiliaries {
  Eigen::VectorXd alpha;  ///< K nonnegative reals
  Eigen::VectorXcd beta;  ///< K complex
  Eigen::VectorXcd a;     ///< A_k = H_k^H w_k
  Eigen::VectorXd b;      ///< B_k = noise + sum_i |H_k^H w_i|^2, always >= noise
};

/// Result of the power-constrained beamforming update.
struct PowerDualResult {
  double lambda0 = 0.0;
  Eigen::MatrixXcd w;
};

/// A_k and B_k from the gain matrix Z(k, i) = H_k^H w_i.
void refresh_link_stats(BeamformAuxiliaries& aux, const Eigen::MatrixXcd& z,
                        double noise_w);

/// alpha_k = gamma_k.
Eigen::VectorXd update_alpha(const Eigen::VectorXd& gamma);

/// beta_k = sqrt(1 + alpha_k) A_k / B_k; shared with the epsilon and delta
/// updates of the other blocks, which use the same expression.
Eigen::VectorXcd scaled_gain_ratio(const Eigen::VectorXd& alpha,
                                   const Eigen::MatrixXcd& z, double noise_w);

Eigen::VectorXcd update_beta(const Eigen::VectorXd& alpha,
                             const Eigen::MatrixXcd& z, double noise_w);

/// Closed-form beamformer at a given power dual variable:
/// w_k = sqrt(1 + alpha_k) beta_k (lambda0 I + sum_i |beta_i|^2 H_i H_i^H)^-1 H_k.
/// One factorization is shared across the K right-hand sides. At lambda0 = 0
/// the system matrix has rank at most K; throws NumericalError when it is not
/// invertible ("needs positive dual").
Eigen::MatrixXcd update_w(const Eigen::MatrixXcd& h_eff,
                          const Eigen::VectorXd& alpha,
                          const Eigen::VectorXcd& beta, double lambda0);

/// lambda0 = min{lambda0 >= 0 : total power <= pmax}. Returns lambda0 = 0
/// when the unconstrained update already fits the budget; otherwise bisects
/// (upper bracket found by doubling from 1) until the returned beamformer is
/// feasible and |power - pmax| <= bisect_tol * pmax. Iteration cap 200.
PowerDualResult solve_power_dual(const Eigen::MatrixXcd& h_eff,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXcd& beta, double pmax,
                                 double bisect_tol);

/// P2 objective in bits for the tightness checks:
/// sum_k [ln(1+a_k) - a_k + 2 sqrt(1+a_k) Re{beta_k^* A_k} - |beta_k|^2 B_k] / ln 2.
double p2_objective_bits(const Eigen::VectorXd& alpha,
                         const Eigen::VectorXcd& beta,
                         const Eigen::MatrixXcd& z, double noise_w);

}  // namespace maris

#pragma once

#include <Eigen/Dense>

#include "maris/scenario.hpp"
#include "maris/types.hpp"

namespace maris {

/// The phi-dependent part of the transformed objective as a concave
/// quadratic: f2(phi) = -phi^H U phi + 2 Re{V^H phi}.
struct QuadraticForm {
  Eigen::MatrixXcd u;       ///< M x M Hermitian PSD
  Eigen::VectorXcd v;       ///< M
  double lambda_max = 0.0;  ///< largest eigenvalue of U
};

/// Outcome of the IRC dual solve. When the ellipsoid hits its iteration cap
/// without certifying the duality gap, `converged` is false and `phi` holds
/// the best feasible iterate; callers decide whether to treat it as failure.
struct IrcResult {
  Eigen::VectorXcd phi;
  bool converged = true;
  double dual_gap = 0.0;
  int iterations = 0;
};

double f2_value(const QuadraticForm& q, const Eigen::VectorXcd& phi);

/// Quadratic-transform auxiliary of the phi block,
/// eps_k = sqrt(1+alpha_k) A_k / (sum_i |A_{k,i}|^2 + noise); identical
/// expression to the beta update, evaluated at the current iterates.
Eigen::VectorXcd update_epsilon(const Eigen::VectorXd& alpha,
                                const Eigen::MatrixXcd& z, double noise_w);

/// Builds U = sum_k |eps_k|^2 D_k W W^H D_k^H and
/// V = sum_k sqrt(1+alpha_k) conj(eps_k) D_k w_k with
/// D_k = S_k^H G_r^H Lambda G_t. U is symmetrized and its largest eigenvalue
/// cached.
QuadraticForm assemble_quadratic(const Scenario& sc,
                                 const AntennaPositions& t,
                                 const Beamformer& w,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXcd& eps,
                                 double wavelength);

/// Full transformed objective of the phi block (f2 minus the
/// sum_k |eps_k|^2 noise constant); equals R'' when eps is optimal.
double phi_transform_objective(const QuadraticForm& q,
                               const Eigen::VectorXcd& phi,
                               const Eigen::VectorXcd& eps, double noise_w);

/// Maximizes f2 over |phi_m| <= 1. Returns the pseudo-solution immediately
/// when it is feasible; otherwise minimizes the Lagrange dual by the
/// ellipsoid method (center 1, radius 10 sqrt(M), subgradient
/// 1 - |phi_m(eta)|^2, feasibility cuts on negative coordinates) until the
/// radius bound on the dual gap drops below tol, then polishes the primal
/// iterate by projected gradient. Iteration cap 500 M.
IrcResult solve_irc(const QuadraticForm& q, double tol);

/// One majorization-minimization step on the unit-modulus set:
/// phi_m <- exp(j arg([(lambda_max I - U) phi + V]_m)). Never decreases f2.
Eigen::VectorXcd mm_step(const QuadraticForm& q, const Eigen::VectorXcd& phi);

/// Maps each phase to the circularly nearest point of the kappa-level grid
/// {0, 2 pi/kappa, ...}; ties break toward the smaller grid phase.
Eigen::VectorXcd quantize_phases(const Eigen::VectorXcd& phi, int kappa);

/// Dispatches on the constraint set: IRC -> dual solve (kept only if it does
/// not lose f2 against the incumbent), CPS -> MM to tolerance, DPS -> MM with
/// per-step quantization keeping the best feasible iterate seen (the
/// incumbent included). FIXED is handled by the caller.
Eigen::VectorXcd optimize_phases(const QuadraticForm& q,
                                 const Eigen::VectorXcd& phi_current,
                                 RisMode mode, int kappa, int tau_max,
                                 double mm_tol, double ellipsoid_tol);

}  // namespace maris

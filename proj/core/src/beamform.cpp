#include "maris/beamform.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "maris/errors.hpp"

namespace maris {

namespace {

Eigen::MatrixXcd system_matrix(const Eigen::MatrixXcd& h_eff,
                               const Eigen::VectorXcd& beta, double lambda0) {
  const Eigen::Index n = h_eff.rows();
  Eigen::MatrixXcd m = h_eff * beta.cwiseAbs2().asDiagonal() * h_eff.adjoint();
  m.diagonal().array() += lambda0;
  return m;
}

Eigen::MatrixXcd rhs_matrix(const Eigen::MatrixXcd& h_eff,
                            const Eigen::VectorXd& alpha,
                            const Eigen::VectorXcd& beta) {
  const Eigen::VectorXcd scale =
      (alpha.array() + 1.0).sqrt().matrix().asDiagonal() * beta;
  return h_eff * scale.asDiagonal();
}

}  // namespace

void refresh_link_stats(BeamformAuxiliaries& aux, const Eigen::MatrixXcd& z,
                        double noise_w) {
  const Eigen::Index users = z.rows();
  aux.a.resize(users);
  aux.b.resize(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    aux.a(k) = z(k, k);
    aux.b(k) = z.row(k).squaredNorm() + noise_w;
  }
}

Eigen::VectorXd update_alpha(const Eigen::VectorXd& gamma) { return gamma; }

Eigen::VectorXcd scaled_gain_ratio(const Eigen::VectorXd& alpha,
                                   const Eigen::MatrixXcd& z, double noise_w) {
  const Eigen::Index users = z.rows();
  Eigen::VectorXcd out(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    const double b = z.row(k).squaredNorm() + noise_w;
    out(k) = std::sqrt(1.0 + alpha(k)) * z(k, k) / b;
  }
  return out;
}

Eigen::VectorXcd update_beta(const Eigen::VectorXd& alpha,
                             const Eigen::MatrixXcd& z, double noise_w) {
  return scaled_gain_ratio(alpha, z, noise_w);
}

Eigen::MatrixXcd update_w(const Eigen::MatrixXcd& h_eff,
                          const Eigen::VectorXd& alpha,
                          const Eigen::VectorXcd& beta, double lambda0) {
  const Eigen::MatrixXcd m = system_matrix(h_eff, beta, lambda0);
  const Eigen::MatrixXcd rhs = rhs_matrix(h_eff, alpha, beta);
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(m);
  if (lambda0 == 0.0) {
    // Rank-deficient at zero dual (always for K < N): even a consistent
    // system leaves the beamformer underdetermined, so demand a positive
    // dual instead.
    const Eigen::VectorXd d = ldlt.vectorD().real().cwiseAbs();
    if (d.size() == 0 || d.minCoeff() <= 1e-12 * d.maxCoeff()) {
      throw NumericalError("update_w: singular system at lambda0 = 0, "
                           "needs positive dual");
    }
  }
  Eigen::MatrixXcd w = ldlt.solve(rhs);
  const double rhs_norm = rhs.norm();
  const double residual = (m * w - rhs).norm();
  if (!w.allFinite() || residual > 1e-8 * std::max(rhs_norm, 1e-300)) {
    throw NumericalError(
        "update_w: singular system at lambda0 = " + std::to_string(lambda0) +
        ", needs positive dual");
  }
  return w;
}

PowerDualResult solve_power_dual(const Eigen::MatrixXcd& h_eff,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXcd& beta, double pmax,
                                 double bisect_tol) {
  constexpr int kMaxIter = 200;

  const auto power_at = [&](double lambda0) {
    return update_w(h_eff, alpha, beta, lambda0);
  };

  if (rhs_matrix(h_eff, alpha, beta).norm() == 0.0) {
    return {0.0, Eigen::MatrixXcd::Zero(h_eff.rows(), h_eff.cols())};
  }

  double lo = 0.0;
  try {
    Eigen::MatrixXcd w0 = power_at(0.0);
    if (total_power(w0) <= pmax) {
      return {0.0, std::move(w0)};
    }
  } catch (const NumericalError&) {
    // Rank-deficient at lambda0 = 0 (always the case for K < N); restart the
    // bracket just above zero.
    lo = 1e-12;
    Eigen::MatrixXcd w_lo = power_at(lo);
    if (total_power(w_lo) <= pmax) {
      return {lo, std::move(w_lo)};
    }
  }

  double hi = 1.0;
  Eigen::MatrixXcd w_hi = power_at(hi);
  int iter = 0;
  while (total_power(w_hi) > pmax) {
    hi *= 2.0;
    if (!std::isfinite(hi) || ++iter > kMaxIter) {
      throw NumericalError("solve_power_dual: failed to bracket the dual");
    }
    w_hi = power_at(hi);
  }

  // Invariant: power(lo) > pmax >= power(hi). The feasible side is returned,
  // so the beamformer never exceeds the budget.
  for (iter = 0; iter < kMaxIter; ++iter) {
    const double p_hi = total_power(w_hi);
    if (p_hi >= pmax * (1.0 - bisect_tol)) {
      return {hi, std::move(w_hi)};
    }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      // Interval exhausted at double precision.
      return {hi, std::move(w_hi)};
    }
    Eigen::MatrixXcd w_mid = power_at(mid);
    if (total_power(w_mid) > pmax) {
      lo = mid;
    } else {
      hi = mid;
      w_hi = std::move(w_mid);
    }
  }
  throw NumericalError("solve_power_dual: bisection iteration cap exceeded");
}

double p2_objective_bits(const Eigen::VectorXd& alpha,
                         const Eigen::VectorXcd& beta,
                         const Eigen::MatrixXcd& z, double noise_w) {
  const Eigen::Index users = z.rows();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < users; ++k) {
    const std::complex<double> a_k = z(k, k);
    const double b_k = z.row(k).squaredNorm() + noise_w;
    acc += std::log(1.0 + alpha(k)) - alpha(k) +
           2.0 * std::sqrt(1.0 + alpha(k)) * std::real(std::conj(beta(k)) * a_k) -
           std::norm(beta(k)) * b_k;
  }
  return acc / std::log(2.0);
}

}  // namespace maris

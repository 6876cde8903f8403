#include "maris/ris.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "maris/beamform.hpp"
#include "maris/channel.hpp"
#include "maris/errors.hpp"

namespace maris {

namespace {

/// Solves (U + diag(eta)) x = V; falls back to a complete orthogonal
/// decomposition when the LDLT result does not satisfy the system.
bool solve_shifted(const Eigen::MatrixXcd& u, const Eigen::VectorXd& eta,
                   const Eigen::VectorXcd& v, double rel_tol,
                   Eigen::VectorXcd& out) {
  Eigen::MatrixXcd a = u;
  a.diagonal() += eta.cast<std::complex<double>>();
  const double v_norm = std::max(v.norm(), 1e-300);

  out = Eigen::LDLT<Eigen::MatrixXcd>(a).solve(v);
  if (out.allFinite() && (a * out - v).norm() <= rel_tol * v_norm) return true;

  out = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(a).solve(v);
  return out.allFinite() && (a * out - v).norm() <= rel_tol * v_norm;
}

Eigen::VectorXcd project_unit_disks(Eigen::VectorXcd phi) {
  for (Eigen::Index m = 0; m < phi.size(); ++m) {
    const double mag = std::abs(phi(m));
    if (mag > 1.0) phi(m) /= mag;
  }
  return phi;
}

/// Accelerated projected gradient on the product of unit disks, started from
/// a near-optimal point; returns the best iterate seen.
Eigen::VectorXcd polish_primal(const QuadraticForm& q,
                               const Eigen::VectorXcd& start) {
  if (q.lambda_max <= 0.0) {
    // U vanishes: the objective is linear, maximized on the disk boundaries.
    Eigen::VectorXcd phi = start;
    for (Eigen::Index m = 0; m < phi.size(); ++m) {
      const double mag = std::abs(q.v(m));
      if (mag > 0.0) phi(m) = q.v(m) / mag;
    }
    return project_unit_disks(std::move(phi));
  }

  constexpr int kMaxIter = 2000;
  constexpr int kStallLimit = 50;
  const double step = 1.0 / q.lambda_max;

  Eigen::VectorXcd x = project_unit_disks(start);
  Eigen::VectorXcd y = x;
  Eigen::VectorXcd best = x;
  double f_best = f2_value(q, x);
  double t = 1.0;
  int stall = 0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    Eigen::VectorXcd xn = project_unit_disks(y + step * (q.v - q.u * y));
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + ((t - 1.0) / tn) * (xn - x);
    x = std::move(xn);
    t = tn;
    const double f = f2_value(q, x);
    if (f > f_best) {
      f_best = f;
      best = x;
      stall = 0;
    } else if (++stall > kStallLimit) {
      break;
    }
  }
  return best;
}

}  // namespace

double f2_value(const QuadraticForm& q, const Eigen::VectorXcd& phi) {
  return -std::real(phi.dot(q.u * phi)) + 2.0 * std::real(q.v.dot(phi));
}

Eigen::VectorXcd update_epsilon(const Eigen::VectorXd& alpha,
                                const Eigen::MatrixXcd& z, double noise_w) {
  return scaled_gain_ratio(alpha, z, noise_w);
}

QuadraticForm assemble_quadratic(const Scenario& sc, const AntennaPositions& t,
                                 const Beamformer& w,
                                 const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXcd& eps,
                                 double wavelength) {
  const int ris = sc.n_ris();
  const int users = sc.n_users();
  const Eigen::MatrixXcd g_t = field_response_matrix(t, sc.angles, wavelength);
  const Eigen::MatrixXcd f = sc.g_r.adjoint() * (sc.nu.asDiagonal() * g_t);

  QuadraticForm q;
  q.u = Eigen::MatrixXcd::Zero(ris, ris);
  q.v = Eigen::VectorXcd::Zero(ris);
  for (int k = 0; k < users; ++k) {
    const Eigen::MatrixXcd d_k = sc.h.col(k).conjugate().asDiagonal() * f;
    const Eigen::MatrixXcd e = d_k * w;  // column i = D_k w_i
    q.u.noalias() += std::norm(eps(k)) * (e * e.adjoint());
    q.v.noalias() +=
        std::sqrt(1.0 + alpha(k)) * std::conj(eps(k)) * e.col(k);
  }
  q.u = 0.5 * (q.u + q.u.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q.u,
                                                      Eigen::EigenvaluesOnly);
  q.lambda_max = eig.eigenvalues().maxCoeff();
  return q;
}

double phi_transform_objective(const QuadraticForm& q,
                               const Eigen::VectorXcd& phi,
                               const Eigen::VectorXcd& eps, double noise_w) {
  return f2_value(q, phi) - eps.squaredNorm() * noise_w;
}

IrcResult solve_irc(const QuadraticForm& q, double tol) {
  const int dim = static_cast<int>(q.v.size());
  IrcResult res;

  if (q.v.norm() == 0.0) {
    res.phi = Eigen::VectorXcd::Zero(dim);
    return res;
  }

  // Unconstrained stationary point (min-norm when U is rank deficient);
  // optimal whenever it is feasible.
  {
    const Eigen::VectorXcd phi_u =
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(q.u).solve(
            q.v);
    if (phi_u.allFinite() &&
        (q.u * phi_u - q.v).norm() <= 1e-8 * std::max(q.v.norm(), 1e-300) &&
        phi_u.cwiseAbs().maxCoeff() <= 1.0) {
      res.phi = phi_u;
      return res;
    }
  }

  double g_best = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd phi_best = Eigen::VectorXcd::Zero(dim);
  double f_best = f2_value(q, phi_best);
  bool bound_reached = false;
  int iter = 0;

  if (dim == 1) {
    // Scalar KKT: the constraint binds, eta = |V| - U.
    const double u0 = std::real(q.u(0, 0));
    const double eta = std::max(0.0, std::abs(q.v(0)) - u0);
    g_best = std::abs(q.v(0)) * std::abs(q.v(0)) / (u0 + eta) + eta;
    bound_reached = true;
  } else {
    const int cap = 500 * dim;
    const double n = static_cast<double>(dim);
    Eigen::VectorXd center = Eigen::VectorXd::Ones(dim);
    Eigen::MatrixXd shape =
        (100.0 * dim) * Eigen::MatrixXd::Identity(dim, dim);

    for (iter = 0; iter < cap; ++iter) {
      Eigen::VectorXd cut(dim);
      int violated = -1;
      double worst = 0.0;
      for (int m = 0; m < dim; ++m) {
        if (center(m) < worst) {
          worst = center(m);
          violated = m;
        }
      }
      if (violated >= 0) {
        cut = Eigen::VectorXd::Zero(dim);
        cut(violated) = -1.0;
      } else {
        Eigen::VectorXcd phi_eta;
        if (!solve_shifted(q.u, center, q.v, 1e-6, phi_eta)) {
          // Semi-definite corner case with eta touching zero; nudge inward.
          Eigen::VectorXd bumped =
              center.array() + 1e-12 * std::max(q.lambda_max, 1.0);
          if (!solve_shifted(q.u, bumped, q.v, 1e-6, phi_eta)) break;
        }
        const double g = std::real(q.v.dot(phi_eta)) + center.sum();
        if (g < g_best) g_best = g;

        Eigen::VectorXcd clipped = project_unit_disks(phi_eta);
        const double f_clip = f2_value(q, clipped);
        if (f_clip > f_best) {
          f_best = f_clip;
          phi_best = std::move(clipped);
        }

        // Certified duality gap; it usually closes long before the radius
        // bound does. The primal side is tightened by an occasional polish.
        const double tol_abs = tol * std::max(1.0, std::abs(g_best));
        if (g_best - f_best <= tol_abs) {
          bound_reached = true;
          break;
        }
        if ((iter & 0xFF) == 0xFF) {
          const Eigen::VectorXcd refined = polish_primal(q, phi_best);
          const double f_ref = f2_value(q, refined);
          if (f_ref > f_best) {
            f_best = f_ref;
            phi_best = refined;
          }
          if (g_best - f_best <= tol_abs) {
            bound_reached = true;
            break;
          }
        }

        for (int m = 0; m < dim; ++m) {
          cut(m) = 1.0 - std::norm(phi_eta(m));
        }
        const double bound =
            std::sqrt(std::max(0.0, cut.dot(shape * cut)));
        if (bound <= tol_abs) {
          bound_reached = true;
          break;
        }
      }

      const Eigen::VectorXd pa = shape * cut;
      const double denom2 = cut.dot(pa);
      if (!(denom2 > 0.0) || !std::isfinite(denom2)) break;
      const Eigen::VectorXd b = pa / std::sqrt(denom2);
      center -= b / (n + 1.0);
      shape = (n * n / (n * n - 1.0)) *
              (shape - (2.0 / (n + 1.0)) * (b * b.transpose()));
      shape = 0.5 * (shape + shape.transpose()).eval();
    }
  }

  Eigen::VectorXcd polished = polish_primal(q, phi_best);
  if (f2_value(q, polished) > f_best) {
    f_best = f2_value(q, polished);
    phi_best = std::move(polished);
  }

  res.phi = std::move(phi_best);
  res.iterations = iter;
  res.dual_gap = g_best - f_best;
  res.converged =
      bound_reached || res.dual_gap <= tol * std::max(1.0, std::abs(g_best));
  return res;
}

Eigen::VectorXcd mm_step(const QuadraticForm& q, const Eigen::VectorXcd& phi) {
  const Eigen::VectorXcd c = q.lambda_max * phi - q.u * phi + q.v;
  Eigen::VectorXcd out(phi.size());
  for (Eigen::Index m = 0; m < phi.size(); ++m) {
    out(m) = std::polar(1.0, std::arg(c(m)));
  }
  return out;
}

Eigen::VectorXcd quantize_phases(const Eigen::VectorXcd& phi, int kappa) {
  const double step = 2.0 * M_PI / kappa;
  Eigen::VectorXcd out(phi.size());
  for (Eigen::Index m = 0; m < phi.size(); ++m) {
    double ang = std::arg(phi(m));
    if (ang < 0.0) ang += 2.0 * M_PI;
    const double x = ang / step;
    const double lo = std::floor(x);
    const double frac = x - lo;
    long idx = static_cast<long>(lo);
    if (frac > 0.5) {
      ++idx;
    } else if (frac == 0.5) {
      // Equidistant: take the smaller grid phase, which is the upper
      // neighbour only when it wraps around to zero.
      const long upper = (idx + 1) % kappa;
      if (upper < idx % kappa) idx = upper;
    }
    idx %= kappa;
    out(m) = std::polar(1.0, step * static_cast<double>(idx));
  }
  return out;
}

Eigen::VectorXcd optimize_phases(const QuadraticForm& q,
                                 const Eigen::VectorXcd& phi_current,
                                 RisMode mode, int kappa, int tau_max,
                                 double mm_tol, double ellipsoid_tol) {
  switch (mode) {
    case RisMode::Irc: {
      const IrcResult res = solve_irc(q, ellipsoid_tol);
      if (!res.converged) {
        throw NumericalError(
            "solve_irc: iteration cap exceeded, residual dual gap " +
            std::to_string(res.dual_gap));
      }
      return f2_value(q, res.phi) >= f2_value(q, phi_current) ? res.phi
                                                              : phi_current;
    }
    case RisMode::Cps: {
      Eigen::VectorXcd phi = phi_current;
      double f_prev = f2_value(q, phi);
      for (int tau = 0; tau < tau_max; ++tau) {
        phi = mm_step(q, phi);
        const double f = f2_value(q, phi);
        if (std::abs(f - f_prev) <= mm_tol * std::max(1.0, std::abs(f_prev))) {
          break;
        }
        f_prev = f;
      }
      return phi;
    }
    case RisMode::Dps: {
      Eigen::VectorXcd best = quantize_phases(phi_current, kappa);
      double f_best = f2_value(q, best);
      const auto consider = [&](const Eigen::VectorXcd& cand) {
        const double f = f2_value(q, cand);
        if (f > f_best) {
          f_best = f;
          best = cand;
        }
      };

      Eigen::VectorXcd work = best;
      for (int tau = 0; tau < tau_max; ++tau) {
        const Eigen::VectorXcd next = quantize_phases(mm_step(q, work), kappa);
        consider(next);
        if (next == work) break;  // quantized fixed point
        work = next;
      }

      // Quantizing the converged continuous-phase point gives an independent
      // candidate that often escapes the quantized fixed point.
      consider(quantize_phases(
          optimize_phases(q, phi_current, RisMode::Cps, kappa, tau_max, mm_tol,
                          ellipsoid_tol),
          kappa));

      // Exact per-element ascent over the kappa levels until no element
      // improves; monotone in f2, so `best` only moves up.
      const Eigen::Index m_count = best.size();
      std::vector<std::complex<double>> levels(kappa);
      for (int i = 0; i < kappa; ++i) {
        levels[i] = std::polar(1.0, 2.0 * M_PI * i / kappa);
      }
      Eigen::VectorXcd phi = best;
      Eigen::VectorXcd u_phi = q.u * phi;
      for (int pass = 0; pass < tau_max; ++pass) {
        bool improved = false;
        for (Eigen::Index m = 0; m < m_count; ++m) {
          const std::complex<double> coeff =
              q.v(m) - (u_phi(m) - q.u(m, m) * phi(m));
          int arg_best = -1;
          double val_best = std::real(std::conj(phi(m)) * coeff);
          for (int i = 0; i < kappa; ++i) {
            const double val = std::real(std::conj(levels[i]) * coeff);
            if (val > val_best) {
              val_best = val;
              arg_best = i;
            }
          }
          if (arg_best >= 0) {
            u_phi += q.u.col(m) * (levels[arg_best] - phi(m));
            phi(m) = levels[arg_best];
            improved = true;
          }
        }
        if (!improved) break;
      }
      consider(phi);
      return best;
    }
    case RisMode::Fixed:
      return phi_current;
  }
  return phi_current;
}

}  // namespace maris

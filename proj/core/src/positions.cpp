#include "maris/positions.hpp"

#include <cmath>
#include <complex>

#include "maris/beamform.hpp"
#include "maris/channel.hpp"
#include "maris/errors.hpp"

namespace maris {

namespace {

constexpr double kF5RelTol = 1e-6;

/// Smallest value >= x whose mantissa fits in `bits` bits.
double round_up_mantissa(double x, int bits) {
  if (x == 0.0) return 0.0;
  int e = 0;
  const double m = std::frexp(x, &e);
  return std::ldexp(std::ceil(std::ldexp(m, bits)), e - bits);
}

int mantissa_bits_for(int n) {
  int extra = 0;
  while ((1 << extra) < n) ++extra;
  return 53 - extra;
}

}  // namespace

Eigen::VectorXcd update_delta(const Eigen::VectorXd& alpha,
                              const Eigen::MatrixXcd& z, double noise_w) {
  return scaled_gain_ratio(alpha, z, noise_w);
}

PositionAuxiliaries make_position_aux(const Scenario& sc, const RisPhases& phi,
                                      const Beamformer& w,
                                      const Eigen::VectorXcd& delta) {
  const int paths = sc.n_paths();
  const int users = sc.n_users();
  PositionAuxiliaries aux;
  aux.delta = delta;
  aux.p.resize(paths, users);
  for (int k = 0; k < users; ++k) {
    const Eigen::VectorXcd reflected =
        sc.g_r * sc.h.col(k).cwiseProduct(phi);
    aux.p.col(k) = delta(k) * sc.nu.conjugate().cwiseProduct(reflected);
  }
  aux.pi = w * w.adjoint();
  return aux;
}

double position_objective(const AntennaPositions& t, const Beamformer& w,
                          const PositionAuxiliaries& aux, const Scenario& sc,
                          const Eigen::VectorXd& alpha, double wavelength) {
  const Eigen::MatrixXcd g_t = field_response_matrix(t, sc.angles, wavelength);
  const Eigen::MatrixXcd gtw = g_t * w;
  const Eigen::MatrixXcd y = g_t.adjoint() * aux.p;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    acc += 2.0 * std::sqrt(1.0 + alpha(k)) *
           std::real(aux.p.col(k).dot(gtw.col(k)));
    acc -= std::real(y.col(k).dot(aux.pi * y.col(k)));
  }
  return acc;
}

Eigen::Vector2d position_gradient(const AntennaPositions& t, int n,
                                  const Beamformer& w,
                                  const PositionAuxiliaries& aux,
                                  const Scenario& sc,
                                  const Eigen::VectorXd& alpha,
                                  double wavelength) {
  const int paths = sc.n_paths();
  const double c = 2.0 * M_PI / wavelength;
  const Eigen::MatrixXcd g_t = field_response_matrix(t, sc.angles, wavelength);
  const Eigen::VectorXcd g_n = g_t.col(n);
  const Eigen::MatrixXcd piy = aux.pi * (g_t.adjoint() * aux.p);

  Eigen::VectorXd rho_x(paths), rho_y(paths);
  for (int l = 0; l < paths; ++l) {
    rho_x(l) = std::sin(sc.angles[l].theta) * std::cos(sc.angles[l].phi);
    rho_y(l) = std::cos(sc.angles[l].theta);
  }
  std::complex<double> acc_x{0.0, 0.0}, acc_y{0.0, 0.0};
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const std::complex<double> s_k =
        std::sqrt(1.0 + alpha(k)) * w(n, k) - piy(n, k);
    std::complex<double> qx{0.0, 0.0}, qy{0.0, 0.0};
    for (int l = 0; l < paths; ++l) {
      const std::complex<double> base = std::conj(aux.p(l, k)) * g_n(l);
      qx += rho_x(l) * base;
      qy += rho_y(l) * base;
    }
    acc_x += s_k * qx;
    acc_y += s_k * qy;
  }
  return {-2.0 * c * std::imag(acc_x), -2.0 * c * std::imag(acc_y)};
}

bool feasible(const AntennaPositions& t, const SystemConfig& config) {
  const double region = config.region_m();
  const double min_dist2 = config.min_dist_m() * config.min_dist_m();
  const Eigen::Index n = t.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (t(0, i) < 0.0 || t(0, i) > region || t(1, i) < 0.0 ||
        t(1, i) > region) {
      return false;
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dx = t(0, i) - t(0, j);
      const double dy = t(1, i) - t(1, j);
      if (dx * dx + dy * dy < min_dist2) return false;
    }
  }
  return true;
}

AntennaPositions optimize_positions(const Scenario& sc, const Beamformer& w,
                                    const PositionAuxiliaries& aux,
                                    const Eigen::VectorXd& alpha,
                                    const AntennaPositions& t0,
                                    const SystemConfig& config) {
  const double wl = config.wavelength();
  const double mu0 = config.mu0_lambda * wl;
  const double mu_min = config.mu_min_lambda * wl;

  AntennaPositions t = t0;
  double f = position_objective(t, w, aux, sc, alpha, wl);
  for (int sweep = 0; sweep < config.q_max; ++sweep) {
    const double f_start = f;
    for (int n = 0; n < t.cols(); ++n) {
      const Eigen::Vector2d grad =
          position_gradient(t, n, w, aux, sc, alpha, wl);
      double mu = mu0;
      while (mu >= mu_min) {
        AntennaPositions cand = t;
        cand.col(n) += mu * grad;
        if (feasible(cand, config)) {
          const double fc = position_objective(cand, w, aux, sc, alpha, wl);
          if (fc > f) {
            t = std::move(cand);
            f = fc;
            break;
          }
        }
        mu *= 0.5;
      }
    }
    if (std::abs(f - f_start) <= kF5RelTol * std::max(std::abs(f_start), 1e-300)) {
      break;
    }
  }
  return t;
}

AntennaPositions ula_positions(int n, double spacing) {
  const double s = round_up_mantissa(spacing, mantissa_bits_for(n));
  AntennaPositions t(2, n);
  for (int i = 0; i < n; ++i) {
    t(0, i) = i * s;
    t(1, i) = 0.0;
  }
  return t;
}

AntennaPositions packed_grid_positions(int n, double spacing, double region) {
  const double s = round_up_mantissa(spacing, mantissa_bits_for(n));
  int per_row = 1;
  while (per_row * s <= region) ++per_row;  // (per_row - 1) * s <= region
  AntennaPositions t(2, n);
  for (int i = 0; i < n; ++i) {
    const double x = (i % per_row) * s;
    const double y = (i / per_row) * s;
    if (y > region) {
      throw ConfigError(
          "antenna layout: region too small to place " + std::to_string(n) +
          " antennas at the required spacing");
    }
    t(0, i) = x;
    t(1, i) = y;
  }
  return t;
}

}  // namespace maris

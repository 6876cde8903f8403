#include "maris/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace maris {

namespace {
constexpr std::complex<double> kJ{0.0, 1.0};
}

Eigen::MatrixXcd field_response_matrix(const AntennaPositions& t,
                                       const std::vector<PathAngles>& angles,
                                       double wavelength) {
  const auto paths = static_cast<Eigen::Index>(angles.size());
  const Eigen::Index n = t.cols();
  const double c = 2.0 * M_PI / wavelength;
  Eigen::MatrixXcd g(paths, n);
  for (Eigen::Index l = 0; l < paths; ++l) {
    const double rx = std::sin(angles[l].theta) * std::cos(angles[l].phi);
    const double ry = std::cos(angles[l].theta);
    for (Eigen::Index col = 0; col < n; ++col) {
      const double phase = c * (t(0, col) * rx + t(1, col) * ry);
      g(l, col) = std::polar(1.0, phase);
    }
  }
  return g;
}

Eigen::MatrixXcd ris_grid_response(int n_elements,
                                   const std::vector<PathAngles>& arrival,
                                   double wavelength) {
  const int cols = static_cast<int>(std::ceil(std::sqrt(n_elements)));
  AntennaPositions grid(2, n_elements);
  for (int m = 0; m < n_elements; ++m) {
    grid(0, m) = (m % cols) * wavelength / 2.0;
    grid(1, m) = (m / cols) * wavelength / 2.0;
  }
  return field_response_matrix(grid, arrival, wavelength);
}

Eigen::MatrixXcd effective_channel(const Scenario& sc, const RisPhases& phi,
                                   const AntennaPositions& t,
                                   double wavelength) {
  if (phi.size() != sc.g_r.cols() || sc.nu.size() != sc.g_r.rows() ||
      sc.h.rows() != sc.g_r.cols()) {
    throw std::invalid_argument("effective_channel: dimension mismatch");
  }
  const Eigen::MatrixXcd g_t = field_response_matrix(t, sc.angles, wavelength);
  // H_k = G_t^H Lambda^H G_r S_k phi, with S_k phi = h_k .* phi.
  const Eigen::MatrixXcd reflected =
      sc.g_r * (sc.h.array().colwise() * phi.array()).matrix();
  return g_t.adjoint() * (sc.nu.conjugate().asDiagonal() * reflected);
}

Eigen::MatrixXcd gain_matrix(const Eigen::MatrixXcd& h_eff,
                             const Beamformer& w) {
  return h_eff.adjoint() * w;
}

Eigen::VectorXd sinr_from_gains(const Eigen::MatrixXcd& z, double noise_w) {
  const Eigen::Index users = z.rows();
  Eigen::VectorXd gamma(users);
  for (Eigen::Index k = 0; k < users; ++k) {
    const double sig = std::norm(z(k, k));
    const double denom = z.row(k).squaredNorm() - sig + noise_w;
    gamma(k) = sig / denom;
  }
  return gamma;
}

Eigen::VectorXd sinr_all(const Scenario& sc, const Beamformer& w,
                         const RisPhases& phi, const AntennaPositions& t,
                         double wavelength, double noise_w) {
  return sinr_from_gains(
      gain_matrix(effective_channel(sc, phi, t, wavelength), w), noise_w);
}

double sinr(int k, const Scenario& sc, const Beamformer& w,
            const RisPhases& phi, const AntennaPositions& t, double wavelength,
            double noise_w) {
  if (k < 0 || k >= sc.n_users()) {
    throw std::invalid_argument("sinr: user index out of range");
  }
  return sinr_all(sc, w, phi, t, wavelength, noise_w)(k);
}

double sum_rate_from_sinr(const Eigen::VectorXd& gamma) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < gamma.size(); ++k) {
    r += std::log2(1.0 + gamma(k));
  }
  return r;
}

double sum_rate(const Scenario& sc, const Beamformer& w, const RisPhases& phi,
                const AntennaPositions& t, double wavelength, double noise_w) {
  return sum_rate_from_sinr(sinr_all(sc, w, phi, t, wavelength, noise_w));
}

}  // namespace maris

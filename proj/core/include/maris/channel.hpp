#pragma once

#include <Eigen/Dense>
#include <vector>

#include "maris/scenario.hpp"
#include "maris/types.hpp"

namespace maris {

/// L x N transmit field-response matrix: entry (l, n) is
/// exp(j (2 pi / lambda) t_n . rho_l) with rho_l = [sin th cos ph, cos th].
/// Every entry has unit modulus.
Eigen::MatrixXcd field_response_matrix(const AntennaPositions& t,
                                       const std::vector<PathAngles>& angles,
                                       double wavelength);

/// L x M receive response of an M-element RIS laid out as a uniform planar
/// grid with lambda/2 spacing, same field-response construction as above.
Eigen::MatrixXcd ris_grid_response(int n_elements,
                                   const std::vector<PathAngles>& arrival,
                                   double wavelength);

/// Effective BS->user channels H_k = G_t^H Lambda^H G_r Phi^H h_k, returned
/// as an N x K matrix with column k = H_k.
Eigen::MatrixXcd effective_channel(const Scenario& sc, const RisPhases& phi,
                                   const AntennaPositions& t,
                                   double wavelength);

/// K x K matrix Z with Z(k, i) = H_k^H w_i; the diagonal carries each user's
/// own-signal gain, the off-diagonals the interference terms.
Eigen::MatrixXcd gain_matrix(const Eigen::MatrixXcd& h_eff,
                             const Beamformer& w);

/// All K SINRs, |Z(k,k)|^2 / (sum_{i != k} |Z(k,i)|^2 + noise).
Eigen::VectorXd sinr_all(const Scenario& sc, const Beamformer& w,
                         const RisPhases& phi, const AntennaPositions& t,
                         double wavelength, double noise_w);

/// SINR of user k (0-based).
double sinr(int k, const Scenario& sc, const Beamformer& w,
            const RisPhases& phi, const AntennaPositions& t, double wavelength,
            double noise_w);

/// Sum rate in bits/s/Hz: sum_k log2(1 + gamma_k).
double sum_rate(const Scenario& sc, const Beamformer& w, const RisPhases& phi,
                const AntennaPositions& t, double wavelength, double noise_w);

/// Same SINRs, but from a precomputed gain matrix.
Eigen::VectorXd sinr_from_gains(const Eigen::MatrixXcd& z, double noise_w);

double sum_rate_from_sinr(const Eigen::VectorXd& gamma);

}  // namespace maris

#include "maris/scenario.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "maris/channel.hpp"
#include "maris/rng.hpp"

namespace maris {

double path_loss(double distance_km, double f0_ghz, double reflection_gain_db) {
  if (!(distance_km > 0.0)) {
    throw std::invalid_argument("path_loss: distance must be > 0 km");
  }
  if (!(f0_ghz > 0.0)) {
    throw std::invalid_argument("path_loss: frequency must be > 0 GHz");
  }
  const double loss_db = 92.5 + 20.0 * std::log10(f0_ghz) +
                         20.0 * std::log10(distance_km) - reflection_gain_db;
  return std::pow(10.0, -loss_db / 10.0);
}

Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const int paths = config.n_paths;
  const int ris = config.n_ris;
  const int users = config.n_users;

  Rng rng(seed);
  Scenario sc;

  sc.angles.resize(paths);
  for (auto& a : sc.angles) {
    a.theta = rng.uniform(0.0, config.angle_max);
    a.phi = rng.uniform(0.0, config.angle_max);
  }

  const double v = path_loss(config.bs_ris_km, config.carrier_ghz,
                             config.reflection_gain_db);
  sc.nu.resize(paths);
  for (int l = 0; l < paths; ++l) {
    sc.nu(l) = rng.cnormal(v / paths);
  }

  if (config.gr_model == GrModel::FieldResponse) {
    std::vector<PathAngles> arrival(paths);
    for (auto& a : arrival) {
      a.theta = rng.uniform(0.0, config.angle_max);
      a.phi = rng.uniform(0.0, config.angle_max);
    }
    sc.g_r = ris_grid_response(ris, arrival, config.wavelength());
  } else {
    sc.g_r.resize(paths, ris);
    for (int l = 0; l < paths; ++l) {
      for (int m = 0; m < ris; ++m) {
        sc.g_r(l, m) = rng.cnormal(1.0);
      }
    }
  }

  // Users are dropped uniformly over a disk whose center sits on the RIS
  // boresight; u_k follows from the resulting RIS-user distance.
  const double center_m = config.ris_user_center_km * 1000.0;
  sc.h.resize(ris, users);
  for (int k = 0; k < users; ++k) {
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    const double rad = config.user_radius_m * std::sqrt(rng.uniform());
    const double x = center_m + rad * std::cos(ang);
    const double y = rad * std::sin(ang);
    const double dist_km = std::hypot(x, y) / 1000.0;
    const double u_k = path_loss(dist_km, config.carrier_ghz,
                                 config.reflection_gain_db);
    for (int m = 0; m < ris; ++m) {
      sc.h(m, k) = rng.cnormal(u_k);
    }
  }

  return sc;
}

}  // namespace maris

#pragma once

#include <cstdint>
#include <string>

namespace maris {

/// Reflection-coefficient constraint set of the RIS.
enum class RisMode {
  Irc,    ///< peak-power constrained, |psi_m| <= 1
  Cps,    ///< unit modulus, continuous phase
  Dps,    ///< unit modulus, kappa-level quantized phase
  Fixed,  ///< reflection coefficients frozen at their initial values
};

enum class AntennaMode {
  Movable,  ///< transmit antenna positions are optimized
  Fixed,    ///< lambda/2 uniform linear array, never moved
};

/// Statistical model for the RIS receive response matrix.
enum class GrModel {
  FieldResponse,  ///< planar lambda/2 grid, unit-modulus phase entries
  Gaussian,       ///< i.i.d. unit-variance complex Gaussian entries
};

std::string to_string(RisMode m);
std::string to_string(AntennaMode m);
std::string to_string(GrModel m);
RisMode ris_mode_from_string(const std::string& s);
AntennaMode antenna_mode_from_string(const std::string& s);
GrModel gr_model_from_string(const std::string& s);

/// dBm -> watts, e.g. 10 dBm -> 0.01 W, -100 dBm -> 1e-13 W.
double dbm_to_watts(double dbm);

/// All scalar parameters of one system instance. Distances and powers are
/// stored in the units the formulas use (meters, watts); the dBm/GHz inputs
/// are kept so a parsed config can be serialized back without loss.
struct SystemConfig {
  // dimensions
  int n_antennas = 4;  ///< N
  int n_users = 4;     ///< K
  int n_ris = 16;      ///< M
  int n_paths = 4;     ///< L

  // radio and geometry
  double carrier_ghz = 2.0;
  double region_lambda = 2.0;      ///< square region side, in wavelengths
  double min_dist_lambda = 0.5;    ///< antenna spacing floor, in wavelengths
  double pmax_dbm = 10.0;
  double noise_dbm = -100.0;
  double reflection_gain_db = 10.0;
  double bs_ris_km = 0.05;
  double ris_user_center_km = 0.1;
  double user_radius_m = 10.0;
  double angle_max = 3.14159265358979323846;  ///< path angles drawn on [0, angle_max]

  // modes
  RisMode ris_mode = RisMode::Cps;
  int dps_levels = 4;  ///< kappa, used when ris_mode == Dps
  AntennaMode antenna_mode = AntennaMode::Movable;
  GrModel gr_model = GrModel::FieldResponse;

  // solver controls
  std::uint64_t seed = 1;
  double tol = 1e-4;       ///< outer-loop relative sum-rate tolerance
  int r_max = 100;         ///< outer iteration cap
  int tau_max = 200;       ///< MM iteration cap per phi block
  int q_max = 50;          ///< position sweeps per T block
  double mu0_lambda = 0.1;     ///< initial GD step, in wavelengths
  double mu_min_lambda = 1e-4; ///< minimum GD step, in wavelengths

  // numeric tolerances not exposed in the config file
  double bisect_tol = 1e-11;     ///< relative power tolerance of the dual bisection
  double ellipsoid_tol = 1e-7;   ///< relative dual-gap tolerance of the IRC solve
  double mm_tol = 1e-10;         ///< relative f2 change that stops the MM loop

  // derived quantities
  double wavelength() const;   ///< meters, c / f0
  double pmax_w() const;       ///< transmit power budget in watts
  double noise_w() const;      ///< per-user noise power in watts
  double region_m() const;     ///< region side in meters
  double min_dist_m() const;   ///< minimum antenna distance in meters

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

}  // namespace maris

#include "maris/config.hpp"

#include <cmath>

#include "maris/errors.hpp"

namespace maris {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s
}

std::string to_string(RisMode m) {
  switch (m) {
    case RisMode::Irc: return "IRC";
    case RisMode::Cps: return "CPS";
    case RisMode::Dps: return "DPS";
    case RisMode::Fixed: return "FIXED";
  }
  return "?";
}

std::string to_string(AntennaMode m) {
  return m == AntennaMode::Movable ? "MA" : "FPA";
}

std::string to_string(GrModel m) {
  return m == GrModel::FieldResponse ? "frv" : "gaussian";
}

RisMode ris_mode_from_string(const std::string& s) {
  if (s == "IRC") return RisMode::Irc;
  if (s == "CPS") return RisMode::Cps;
  if (s == "DPS") return RisMode::Dps;
  if (s == "FIXED") return RisMode::Fixed;
  throw ConfigError("ris_mode: unknown value '" + s +
                    "' (expected IRC, CPS, DPS or FIXED)");
}

AntennaMode antenna_mode_from_string(const std::string& s) {
  if (s == "MA") return AntennaMode::Movable;
  if (s == "FPA") return AntennaMode::Fixed;
  throw ConfigError("antenna_mode: unknown value '" + s +
                    "' (expected MA or FPA)");
}

GrModel gr_model_from_string(const std::string& s) {
  if (s == "frv") return GrModel::FieldResponse;
  if (s == "gaussian") return GrModel::Gaussian;
  throw ConfigError("gr_model: unknown value '" + s +
                    "' (expected frv or gaussian)");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double SystemConfig::wavelength() const {
  return kSpeedOfLight / (carrier_ghz * 1e9);
}

double SystemConfig::pmax_w() const { return dbm_to_watts(pmax_dbm); }
double SystemConfig::noise_w() const { return dbm_to_watts(noise_dbm); }
double SystemConfig::region_m() const { return region_lambda * wavelength(); }
double SystemConfig::min_dist_m() const { return min_dist_lambda * wavelength(); }

void SystemConfig::validate() const {
  if (n_antennas < 1) throw ConfigError("n_antennas: must be >= 1");
  if (n_users < 1) throw ConfigError("n_users: must be >= 1");
  if (n_ris < 1) throw ConfigError("n_ris: must be >= 1");
  if (n_paths < 1) throw ConfigError("n_paths: must be >= 1");
  if (!(carrier_ghz > 0.0)) throw ConfigError("carrier_ghz: must be > 0");
  if (!(region_lambda > 0.0)) throw ConfigError("region_lambda: must be > 0");
  if (min_dist_lambda < 0.0) throw ConfigError("min_dist_lambda: must be >= 0");
  if (n_antennas >= 2 &&
      min_dist_lambda > region_lambda * std::sqrt(2.0)) {
    throw ConfigError(
        "min_dist_lambda: exceeds region diagonal, no feasible placement for "
        "n_antennas >= 2");
  }
  if (!(pmax_w() > 0.0)) throw ConfigError("pmax_dbm: implies non-positive power");
  if (!(noise_w() > 0.0)) throw ConfigError("noise_dbm: implies non-positive power");
  if (ris_mode == RisMode::Dps && dps_levels < 2) {
    throw ConfigError("dps_levels: must be >= 2 when ris_mode is DPS");
  }
  if (!(bs_ris_km > 0.0)) throw ConfigError("bs_ris_km: must be > 0");
  if (!(ris_user_center_km > 0.0)) throw ConfigError("ris_user_center_m: must be > 0");
  if (user_radius_m < 0.0) throw ConfigError("user_radius_m: must be >= 0");
  if (!(angle_max > 0.0)) throw ConfigError("angle_max: must be > 0");
  if (!(tol >= 0.0)) throw ConfigError("tol: must be >= 0");
  if (r_max < 1) throw ConfigError("r_max: must be >= 1");
  if (tau_max < 1) throw ConfigError("tau_max: must be >= 1");
  if (q_max < 1) throw ConfigError("q_max: must be >= 1");
  if (!(mu0_lambda > 0.0)) throw ConfigError("mu0_lambda: must be > 0");
  if (!(mu_min_lambda > 0.0)) throw ConfigError("mu_min_lambda: must be > 0");
}

}  // namespace maris

#include "maris/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maris/errors.hpp"

namespace maris {

namespace {

using nlohmann::json;

double require_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError(key + ": expected a number");
  }
  return value.get<double>();
}

int require_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError(key + ": expected an integer");
  }
  return value.get<int>();
}

std::string require_string(const json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError(key + ": expected a string");
  }
  return value.get<std::string>();
}

}  // namespace

SystemConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config: invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config: top-level document must be a JSON object");
  }

  SystemConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "n_antennas") cfg.n_antennas = require_int(value, key);
    else if (key == "n_users") cfg.n_users = require_int(value, key);
    else if (key == "n_ris") cfg.n_ris = require_int(value, key);
    else if (key == "n_paths") cfg.n_paths = require_int(value, key);
    else if (key == "carrier_ghz") cfg.carrier_ghz = require_number(value, key);
    else if (key == "region_lambda") cfg.region_lambda = require_number(value, key);
    else if (key == "min_dist_lambda") cfg.min_dist_lambda = require_number(value, key);
    else if (key == "pmax_dbm") cfg.pmax_dbm = require_number(value, key);
    else if (key == "noise_dbm") cfg.noise_dbm = require_number(value, key);
    else if (key == "ris_mode") cfg.ris_mode = ris_mode_from_string(require_string(value, key));
    else if (key == "dps_levels") cfg.dps_levels = require_int(value, key);
    else if (key == "antenna_mode") cfg.antenna_mode = antenna_mode_from_string(require_string(value, key));
    else if (key == "reflection_gain_db") cfg.reflection_gain_db = require_number(value, key);
    else if (key == "bs_ris_km") cfg.bs_ris_km = require_number(value, key);
    else if (key == "ris_user_center_m") cfg.ris_user_center_km = require_number(value, key) / 1000.0;
    else if (key == "user_radius_m") cfg.user_radius_m = require_number(value, key);
    else if (key == "gr_model") cfg.gr_model = gr_model_from_string(require_string(value, key));
    else if (key == "seed") {
      if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw ConfigError("seed: expected a nonnegative integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    }
    else if (key == "tol") cfg.tol = require_number(value, key);
    else if (key == "r_max") cfg.r_max = require_int(value, key);
    else if (key == "tau_max") cfg.tau_max = require_int(value, key);
    else if (key == "q_max") cfg.q_max = require_int(value, key);
    else if (key == "mu0_lambda") cfg.mu0_lambda = require_number(value, key);
    else if (key == "mu_min_lambda") cfg.mu_min_lambda = require_number(value, key);
    else throw ConfigError("config: unknown key '" + key + "'");
  }

  cfg.validate();
  return cfg;
}

SystemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const SystemConfig& config) {
  json doc;
  doc["n_antennas"] = config.n_antennas;
  doc["n_users"] = config.n_users;
  doc["n_ris"] = config.n_ris;
  doc["n_paths"] = config.n_paths;
  doc["carrier_ghz"] = config.carrier_ghz;
  doc["region_lambda"] = config.region_lambda;
  doc["min_dist_lambda"] = config.min_dist_lambda;
  doc["pmax_dbm"] = config.pmax_dbm;
  doc["noise_dbm"] = config.noise_dbm;
  doc["ris_mode"] = to_string(config.ris_mode);
  doc["dps_levels"] = config.dps_levels;
  doc["antenna_mode"] = to_string(config.antenna_mode);
  doc["reflection_gain_db"] = config.reflection_gain_db;
  doc["bs_ris_km"] = config.bs_ris_km;
  doc["ris_user_center_m"] = config.ris_user_center_km * 1000.0;
  doc["user_radius_m"] = config.user_radius_m;
  doc["gr_model"] = to_string(config.gr_model);
  doc["seed"] = config.seed;
  doc["tol"] = config.tol;
  doc["r_max"] = config.r_max;
  doc["tau_max"] = config.tau_max;
  doc["q_max"] = config.q_max;
  doc["mu0_lambda"] = config.mu0_lambda;
  doc["mu_min_lambda"] = config.mu_min_lambda;
  return doc.dump(2);
}

}  // namespace maris

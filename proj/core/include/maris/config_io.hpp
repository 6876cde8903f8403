#pragma once

#include <string>

#include "maris/config.hpp"

namespace maris {

/// Reads a JSON config file. Every key is optional (reference defaults
/// apply); unknown keys, wrong types and invalid values are rejected with a
/// ConfigError naming the key. Units are converted on load (dBm -> W,
/// meters -> km where the internal representation differs).
SystemConfig parse_config(const std::string& path);

/// Same, from an in-memory JSON document.
SystemConfig parse_config_text(const std::string& text);

/// Serializes back to the documented schema; parse(serialize(c)) is
/// semantically identical to c.
std::string serialize_config(const SystemConfig& config);

}  // namespace maris

#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "mardot/junction.hpp"
#include "mardot/settings.hpp"

namespace mardot {

struct RunConfig {
  JunctionParams params;
  SolverSettings settings;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" text, '#' starts a comment. Keys are JunctionParams
/// names (see parameter_names()) or SolverSettings names; anything else is an
/// error. Values are in units of the lead gap.
RunConfig parse_config(std::istream& in, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Applies one key to either the physical or the numerical section.
void apply_config_key(RunConfig& cfg, std::string_view key, double value);

/// Writes cfg back in the same format, with a units header.
std::string format_config(const RunConfig& cfg);

}  // namespace mardot

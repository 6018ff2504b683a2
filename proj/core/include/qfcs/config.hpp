#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfcs/scenario.hpp"

namespace qfcs {

struct ParsedConfig {
  Scenario scenario;
  std::vector<std::string> warnings;
};

/// Parses a scenario config (JSON, see docs/scenario.schema.json). Failures
/// raise ConfigError naming the offending field. `seed_override` replaces the
/// reservoir seed when given.
ParsedConfig parse_config_text(const std::string& text,
                               std::optional<std::uint64_t> seed_override = std::nullopt);

/// Same, reading the file at `path`. An unreadable file raises ConfigError
/// with field "<file>".
ParsedConfig parse_config(const std::string& path,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

/// Config text with every matrix written out explicitly. Parsing it back
/// reproduces the scenario's matrices bit for bit.
std::string serialize_scenario(const Scenario& scn);

}  // namespace qfcs

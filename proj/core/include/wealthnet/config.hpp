#pragma once

#include "wealthnet/experiment.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wealthnet {

// Text format: INI-style `key = value` lines grouped under [market], [tax],
// [herding], [network] and [run]. Key names are unique across sections, so a
// key may also appear before the first section header. Lines starting with
// ';' are comments. Unknown keys are errors.

struct ConfigKey {
    std::string section;
    std::string name;
    std::string description;
};

/// Every recognised key in canonical order.
const std::vector<ConfigKey>& config_keys();

/// Model defaults at paper scale (n = 1000, delta = 0.2, ..., T = 1000, R = 1000).
ScenarioConfig default_config();

/// "desk" (T = 500, R = 100) or "paper" (T = 1000, R = 1000).
void apply_preset(ScenarioConfig& config, std::string_view preset);

/// Sets one key from its textual value. Throws ConfigError naming the key for
/// unknown keys and unparsable values; ranges are checked by validate().
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Applies several keys at once. win_rates and loss_rates are combined, so
/// both may change the number of assets together.
void apply_settings(ScenarioConfig& config, std::span<const std::pair<std::string, std::string>> settings);

/// Parses `text` on top of `base` and validates the result.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = default_config());

/// (key, value) pairs for every key in canonical order.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config);

/// Canonical text; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const ScenarioConfig& config);

/// Fixed 17 significant digits ("nan", "inf", "-inf" for non-finite values).
std::string format_number(double value);

/// Shortest text that reads back to the same double.
std::string format_shortest(double value);

}  // namespace wealthnet

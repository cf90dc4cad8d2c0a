#pragma once

// Scenario configuration files: one `key = value` per line, `#` starts a
// comment. Money accepts base units ("500000000000000000") or whole units
// with an "ether" suffix ("0.5ether"). Unknown keys are rejected. The full
// key list is in the README.

#include <string>
#include <string_view>
#include <vector>

#include "spoc/harness.hpp"

namespace spoc {

// Applies the file on top of `base`. Throws ConfigInvalid with the line number.
ScenarioConfig parseConfig(std::string_view text, ScenarioConfig base = {});
ScenarioConfig loadConfigFile(const std::string& path, ScenarioConfig base = {});

// Grid files for `payoffs --grid`: one draw per line, five whitespace
// separated money values in the order V P C D_R D_E.
std::vector<ParamDraw> parseGrid(std::string_view text);
std::vector<ParamDraw> loadGridFile(const std::string& path);

std::string readTextFile(const std::string& path); // throws ConfigInvalid

} // namespace spoc
